#include "otter/degree.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

#include "otter/enumerate.hpp"
#include "otter/stochastics.hpp"
#include "otter/tree.hpp"

namespace otter {

namespace {

int parse_int(std::string_view text, std::string_view context) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw DegreeError("DegreeSet: cannot parse '" + std::string(text) + "' in '" + std::string(context) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

DegreeSet::DegreeSet(std::set<int> degrees) : below_tail_(std::move(degrees)) { validate(); }

DegreeSet::DegreeSet(std::set<int> below_tail, std::optional<int> tail_start, std::set<int> tail_exclusions)
    : below_tail_(std::move(below_tail)), tail_start_(tail_start), tail_exclusions_(std::move(tail_exclusions)) {
  validate();
}

DegreeSet DegreeSet::parse(std::string_view text) {
  std::set<int> listed, excluded;
  bool tail = false;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (item.empty()) throw DegreeError("DegreeSet: empty item in '" + std::string(text) + "'");
    if (item == "...") {
      tail = true;
    } else if (item.substr(0, 2) == "<=") {
      const int bound = parse_int(item.substr(2), text);
      for (int d = 1; d <= bound; ++d) listed.insert(d);
    } else if (item.substr(0, 7) == "except:") {
      excluded.insert(parse_int(item.substr(7), text));
    } else {
      listed.insert(parse_int(item, text));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  for (int d : listed) {
    if (d < 1) throw DegreeError("DegreeSet: degrees must be positive");
  }
  if (!tail) {
    for (int e : excluded) listed.erase(e);
    return DegreeSet(std::move(listed));
  }
  if (listed.empty()) throw DegreeError("DegreeSet: '...' needs at least one listed degree");
  const int start = *listed.rbegin() + 1;
  std::set<int> tail_excl;
  for (int e : excluded) {
    if (e >= start) {
      tail_excl.insert(e);
    } else {
      listed.erase(e);
    }
  }
  return DegreeSet(std::move(listed), start, std::move(tail_excl));
}

bool DegreeSet::contains(int degree) const {
  if (degree < 1) return false;
  if (below_tail_.count(degree) != 0) return true;
  return tail_start_ && degree >= *tail_start_ && tail_exclusions_.count(degree) == 0;
}

int DegreeSet::threshold() const {
  if (!tail_start_) throw DegreeError("DegreeSet: threshold of a finite set");
  int t = *tail_start_;
  if (!tail_exclusions_.empty()) t = std::max(t, *tail_exclusions_.rbegin() + 1);
  while (t > 1 && contains(t - 1)) --t;
  return t;
}

int DegreeSet::max_element() const {
  if (tail_start_) throw DegreeError("DegreeSet: cofinite set has no largest element");
  return *below_tail_.rbegin();
}

std::vector<int> DegreeSet::omega_upto(int bound) const {
  std::vector<int> out;
  for (int d = 1; d <= bound; ++d) {
    if (contains(d)) out.push_back(d);
  }
  return out;
}

std::vector<int> DegreeSet::omega_star_upto(int bound) const {
  std::vector<int> out;
  for (int k = 0; k <= bound; ++k) {
    if (contains_outdegree(k)) out.push_back(k);
  }
  return out;
}

int DegreeSet::gcd_star() const {
  const int bound = tail_start_ ? threshold() + 1 : max_element();
  int g = 0;
  for (int k = 1; k <= bound; ++k) {
    if (contains_outdegree(k)) g = std::gcd(g, k);
  }
  return g;
}

std::string DegreeSet::key() const {
  std::string out;
  const int bound = tail_start_ ? threshold() : max_element();
  for (int d = 1; d <= bound; ++d) {
    if (!contains(d)) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(d);
  }
  if (tail_start_) out += ",...";
  return out;
}

void DegreeSet::validate() const {
  if (!contains(1)) throw DegreeError("DegreeSet: 1 must be an allowed degree");
  if (!tail_start_) {
    if (below_tail_.empty() || *below_tail_.rbegin() < 3) {
      throw DegreeError("DegreeSet: some degree >= 3 must be allowed");
    }
    return;
  }
  if (threshold() == 1) throw DegreeError("DegreeSet: every degree allowed; use the unrestricted commands");
}

namespace {

// z sum_{k in S} MSET_k(a), with S = Omega (offset 0) or Omega* (offset 1).
ExactSeries slice_sum(const ExactSeries& a, const DegreeSet& d, int offset) {
  const std::size_t order = a.order();
  auto member = [&](int k) { return d.contains(k + offset); };
  std::vector<Rational> acc(order + 1);
  if (!d.is_cofinite()) {
    const int k_max = std::min<int>(d.max_element() - offset, static_cast<int>(order));
    const auto slices = mset_slices(a, static_cast<unsigned>(std::max(k_max, 0)));
    for (int k = 0; k <= k_max; ++k) {
      if (!member(k)) continue;
      for (std::size_t n = 0; n <= order; ++n) acc[n] += slices[k][n];
    }
  } else {
    // MSET minus the finitely many excluded slices.
    const ExactSeries all = polya_exp(a, 1);
    for (std::size_t n = 0; n <= order; ++n) acc[n] = all[n];
    const int k_max = std::min<int>(d.threshold() - offset, static_cast<int>(order));
    const auto slices = mset_slices(a, static_cast<unsigned>(std::max(k_max, 0)));
    for (int k = 0; k <= k_max; ++k) {
      if (member(k)) continue;
      for (std::size_t n = 0; n <= order; ++n) acc[n] -= slices[k][n];
    }
  }
  return shift(ExactSeries(order, std::move(acc)), 1);
}

// Order-growing fixed point: [z^m] of the right side only reads A below m.
ExactSeries compute_restricted_rooted(const DegreeSet& d, std::size_t n_max) {
  ExactSeries a(0);
  for (std::size_t m = 1; m <= n_max; ++m) {
    std::vector<Rational> c(a.coeffs().begin(), a.coeffs().end());
    c.resize(m + 1);
    a = slice_sum(ExactSeries(m, std::move(c)), d, 1);
  }
  if (!a.is_integral()) throw CountingError("restricted_rooted_series: non-integral coefficient");
  return a;
}

template <class Fn>
ExactSeries memo(const std::string& key, std::size_t n_max, Fn compute) {
  static std::mutex m;
  static std::map<std::string, ExactSeries> table;
  {
    std::lock_guard<std::mutex> lk(m);
    const auto it = table.find(key);
    if (it != table.end() && it->second.order() >= n_max) return it->second.truncated(n_max);
  }
  ExactSeries value = compute();
  std::lock_guard<std::mutex> lk(m);
  auto& slot = table.emplace(key, value).first->second;
  if (slot.order() < value.order()) slot = value;
  return value;
}

}  // namespace

ExactSeries restricted_rooted_series(const DegreeSet& d, std::size_t n_max) {
  return memo("rooted:" + d.key(), n_max, [&] { return compute_restricted_rooted(d, n_max); });
}

ExactSeries tilde_series(const DegreeSet& d, std::size_t n_max) {
  return memo("tilde:" + d.key(), n_max, [&] {
    ExactSeries t = slice_sum(restricted_rooted_series(d, n_max), d, 0);
    if (!t.is_integral()) throw CountingError("tilde_series: non-integral coefficient");
    return t;
  });
}

ExactSeries restricted_free_series(const DegreeSet& d, std::size_t n_max) {
  const ExactSeries a = restricted_rooted_series(d, n_max);
  const ExactSeries edges = scale(sub(mul(a, a), substitute_power(a, 2)), Rational(1, 2));
  ExactSeries f = sub(tilde_series(d, n_max), edges);
  if (!f.is_integral()) throw CountingError("restricted_free_series: non-integral coefficient");
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (sgn(f[n]) < 0) throw CountingError("restricted_free_series: negative count at n=" + std::to_string(n));
  }
  return f;
}

CountTable restricted_free_counts(const DegreeSet& d, std::size_t n_max, const RestrictedFreeOptions& options) {
  const ExactSeries f = restricted_free_series(d, n_max);
  std::vector<BigInt> values(n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) values[n] = f[n].get_num();
  const std::size_t check = std::min(n_max, options.verify_up_to);
  for (std::size_t n = 1; n <= check; ++n) {
    const std::size_t enumerated = count_stream(n, StreamKind::free, &d);
    if (values[n] != static_cast<unsigned long>(enumerated)) {
      throw CountingError("restricted_free_counts: series gives " + values[n].get_str() + " but enumeration gives " +
                          std::to_string(enumerated) + " at n=" + std::to_string(n) + " for degrees " + d.key());
    }
  }
  return CountTable(CountKind::free_unlabelled, std::move(values));
}

bool admissible(std::size_t n, RestrictedKind kind, const DegreeSet& d) {
  if (n == 0) return false;
  const std::size_t g = static_cast<std::size_t>(d.gcd_star());
  switch (kind) {
    case RestrictedKind::rooted:
      if (n == 1) return true;
      if ((n - 1) % g != 0) return false;
      return sgn(restricted_rooted_series(d, n)[n]) > 0;
    case RestrictedKind::tilde:
      if (n < 2 || (n - 2) % g != 0) return false;
      return sgn(tilde_series(d, n)[n]) > 0;
    case RestrictedKind::free:
      if (n < 2 || (n - 2) % g != 0) return false;
      return sgn(restricted_free_series(d, n)[n]) > 0;
  }
  return false;
}

namespace {

// Canonical rooted trees with every outdegree in Omega*, grouped by size.
class BranchTable {
 public:
  explicit BranchTable(const DegreeSet& d) : d_(d), by_size_(2) { by_size_[1].push_back({LevelSequence{1}, 0}); }

  struct Branch {
    LevelSequence levels;
    int height;
  };

  const std::vector<Branch>& of_size(std::size_t m) {
    while (by_size_.size() <= m) extend();
    return by_size_[m];
  }

  // Every multiset of `k` branches with sizes summing to `total`, listed in
  // non-increasing (size, index) order.
  template <class Fn>
  void forests(std::size_t total, std::size_t k, Fn&& visit) {
    of_size(total);  // no table growth during the recursion below
    std::vector<const Branch*> chosen;
    recurse(total, k, total, std::numeric_limits<std::size_t>::max(), chosen, visit);
  }

 private:
  void extend() {
    const std::size_t m = by_size_.size();
    std::vector<Branch> out;
    for (int k : d_.omega_star_upto(static_cast<int>(m) - 1)) {
      if (k == 0) continue;
      forests(m - 1, static_cast<std::size_t>(k), [&](const std::vector<const Branch*>& kids) {
        out.push_back(join(kids));
      });
    }
    std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) { return a.levels > b.levels; });
    by_size_.push_back(std::move(out));
  }

  template <class Fn>
  void recurse(std::size_t rem, std::size_t left, std::size_t max_size, std::size_t max_index,
               std::vector<const Branch*>& chosen, Fn& visit) {
    if (left == 0) {
      if (rem == 0) visit(chosen);
      return;
    }
    if (rem < left) return;
    for (std::size_t size = std::min(max_size, rem - (left - 1)); size >= 1; --size) {
      const auto& list = of_size(size);
      const std::size_t top = size == max_size ? std::min(max_index, list.size()) : list.size();
      for (std::size_t i = 0; i < top; ++i) {
        chosen.push_back(&of_size(size)[i]);
        recurse(rem - size, left - 1, size, i + 1, chosen, visit);
        chosen.pop_back();
      }
    }
  }

 public:
  // Root joined to the given branches, children in canonical order.
  static Branch join(const std::vector<const Branch*>& kids) {
    std::vector<const Branch*> sorted = kids;
    std::sort(sorted.begin(), sorted.end(), [](const Branch* a, const Branch* b) { return a->levels > b->levels; });
    Branch b{LevelSequence{1}, 0};
    for (const Branch* c : sorted) {
      for (int level : c->levels) b.levels.push_back(level + 1);
      b.height = std::max(b.height, c->height + 1);
    }
    return b;
  }

 private:
  const DegreeSet& d_;
  std::vector<std::vector<Branch>> by_size_;
};

}  // namespace

std::vector<FreeTree> gen_free_restricted(const DegreeSet& d, std::size_t n) {
  if (d.is_cofinite()) return gen_free(n, &d);
  std::vector<FreeTree> out;
  if (n < 2) return out;
  BranchTable table(d);
  // Centre vertex.
  for (int k : d.omega_upto(static_cast<int>(n) - 1)) {
    if (k < 2) continue;
    table.forests(n - 1, static_cast<std::size_t>(k), [&](const std::vector<const BranchTable::Branch*>& kids) {
      int h1 = -1, h2 = -1;
      for (const auto* c : kids) {
        if (c->height > h1) {
          h2 = h1;
          h1 = c->height;
        } else if (c->height > h2) {
          h2 = c->height;
        }
      }
      if (h1 == h2) out.push_back(canonicalize_free(adjacency_from_levels(BranchTable::join(kids).levels)));
    });
  }
  // Central edge: two branches of equal height, unordered.
  for (std::size_t a = 1; 2 * a <= n; ++a) {
    const auto& left = table.of_size(a);
    const auto& right = table.of_size(n - a);
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = (2 * a == n ? i : 0); j < right.size(); ++j) {
        if (left[i].height != right[j].height) continue;
        LevelSequence levels = right[j].levels;
        for (int level : left[i].levels) levels.push_back(level + 1);
        out.push_back(canonicalize_free(adjacency_from_levels(levels)));
      }
    }
  }
  return out;
}

Rational tv_exact_restricted(const DegreeSet& d, std::size_t n, std::size_t cap) {
  if (!admissible(n, RestrictedKind::free, d)) {
    throw DegreeError("tv_exact_restricted: n=" + std::to_string(n) + " is not admissible for degrees " + d.key());
  }
  if (n > cap) throw DegreeError("tv_exact_restricted: n exceeds the enumeration cap");
  const BigInt a_tilde = tilde_series(d, n)[n].get_num();
  const BigInt f = restricted_free_series(d, n)[n].get_num();
  const auto forest = gen_free_restricted(d, n);
  std::vector<std::size_t> orbits(forest.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(forest.size()); ++i) orbits[i] = orbit_count(forest[i]);
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t o : orbits) ++histogram[o];
  BigInt trees = 0, rootings = 0;
  Rational sum = 0;
  for (const auto& [orbits, count] : histogram) {
    const BigInt o(static_cast<unsigned long>(orbits));
    trees += static_cast<unsigned long>(count);
    rootings += o * static_cast<unsigned long>(count);
    sum += abs(make_rational(o, a_tilde) - make_rational(1, f)) * static_cast<unsigned long>(count);
  }
  if (trees != f) throw CountingError("tv_exact_restricted: enumeration disagrees with f^Omega_n");
  if (rootings != a_tilde) throw CountingError("tv_exact_restricted: orbit counts do not sum to the tilde count");
  return sum / 2;
}

NegativeControlReport negative_control(const DegreeSet& d, std::size_t n) {
  if (n < 2 || !admissible(n, RestrictedKind::rooted, d)) {
    throw DegreeError("negative_control: n=" + std::to_string(n) + " is not admissible for degrees " + d.key());
  }
  NegativeControlReport report;
  report.n = n;
  const ExactSeries a = restricted_rooted_series(d, n);
  const auto slices = mset_slices(a.truncated(n - 1), static_cast<unsigned>(n - 1));
  report.root_degree_law.assign(n, Rational(0));
  for (std::size_t k = 0; k < n; ++k) {
    if (!d.contains_outdegree(static_cast<int>(k))) continue;
    // [z^n] z MSET_k(A) = [z^{n-1}] MSET_k(A).
    report.root_degree_law[k] = slices[k][n - 1] / a[n];
    if (k >= 1 && !d.contains(static_cast<int>(k))) {
      report.forbidden_degrees.push_back(static_cast<int>(k));
      report.forbidden_mass += report.root_degree_law[k];
    }
  }
  Rational total = 0;
  for (const auto& p : report.root_degree_law) total += p;
  if (total != 1) throw CountingError("negative_control: root degree law does not sum to 1");
  return report;
}

}  // namespace otter
