#include "otter/enumerate.hpp"

#include <algorithm>
#include <numeric>

#include "otter/degree.hpp"

namespace otter {

namespace {

// Outdegree of every vertex of a level sequence.
std::vector<int> outdegrees(const LevelSequence& levels) {
  std::vector<int> out(levels.size(), 0);
  std::vector<int> last_at_level(levels.size() + 2, -1);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0) ++out[last_at_level[levels[i] - 1]];
    last_at_level[levels[i]] = static_cast<int>(i);
  }
  return out;
}

// True iff the root of `levels` is its centre, or the end of its central
// edge carrying the lexicographically larger half.
bool rooted_at_center(const LevelSequence& levels) {
  const std::size_t n = levels.size();
  if (n <= 1) return true;
  // Root child blocks: [start, end) with level 2 at start.
  int h1 = -1, h2 = -1;
  std::size_t tall_start = 0, tall_end = 0;
  for (std::size_t i = 1; i < n;) {
    std::size_t j = i + 1;
    int deepest = levels[i];
    while (j < n && levels[j] > 2) deepest = std::max(deepest, levels[j++]);
    const int h = deepest - 2;
    if (h > h1) {
      h2 = h1;
      h1 = h;
      tall_start = i;
      tall_end = j;
    } else if (h > h2) {
      h2 = h;
    }
    i = j;
  }
  if (h1 == h2) return true;
  if (h1 != h2 + 1) return false;
  // Bicentral with the unique tallest child on the other end of the centre.
  LevelSequence own_half;
  own_half.reserve(n - (tall_end - tall_start));
  for (std::size_t i = 0; i < n; ++i) {
    if (i < tall_start || i >= tall_end) own_half.push_back(levels[i]);
  }
  LevelSequence other_half;
  other_half.reserve(tall_end - tall_start);
  for (std::size_t i = tall_start; i < tall_end; ++i) other_half.push_back(levels[i] - 1);
  return own_half >= other_half;
}

}  // namespace

TreeStream::TreeStream(std::size_t n, StreamKind kind, const DegreeSet* degree_filter)
    : n_(n), kind_(kind), filter_(degree_filter) {
  if (n == 0) throw EnumerationError("TreeStream: n must be >= 1");
  levels_.resize(n);
  std::iota(levels_.begin(), levels_.end(), 1);
}

bool TreeStream::advance_raw() {
  if (!started_) {
    started_ = true;
    return true;
  }
  // Last position deeper than 2.
  std::size_t p = n_;
  for (std::size_t i = n_; i-- > 1;) {
    if (levels_[i] > 2) {
      p = i;
      break;
    }
  }
  if (p == n_) return false;
  std::size_t q = p;
  while (levels_[--q] != levels_[p] - 1) {
  }
  const std::size_t period = p - q;
  for (std::size_t i = p; i < n_; ++i) levels_[i] = levels_[i - period];
  return true;
}

bool TreeStream::accept() const {
  if (kind_ == StreamKind::free && !rooted_at_center(levels_)) return false;
  if (filter_ == nullptr) return true;
  const auto out = outdegrees(levels_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const bool ok = kind_ == StreamKind::rooted ? filter_->contains_outdegree(out[i])
                                                : filter_->contains(out[i] + (i > 0 ? 1 : 0));
    if (!ok) return false;
  }
  return true;
}

bool TreeStream::next() {
  if (done_) return false;
  while (advance_raw()) {
    if (accept()) return true;
  }
  done_ = true;
  return false;
}

FreeTree TreeStream::current_free() const { return canonicalize_free(adjacency_from_levels(levels_)); }

std::vector<RootedTree> gen_rooted(std::size_t n, const DegreeSet* degree_filter) {
  TreeStream stream(n, StreamKind::rooted, degree_filter);
  std::vector<RootedTree> out;
  while (stream.next()) out.push_back(stream.current_rooted());
  return out;
}

std::vector<FreeTree> gen_free(std::size_t n, const DegreeSet* degree_filter) {
  TreeStream stream(n, StreamKind::free, degree_filter);
  std::vector<FreeTree> out;
  while (stream.next()) out.push_back(stream.current_free());
  return out;
}

std::size_t count_stream(std::size_t n, StreamKind kind, const DegreeSet* degree_filter) {
  TreeStream stream(n, kind, degree_filter);
  std::size_t count = 0;
  while (stream.next()) ++count;
  return count;
}

namespace {

void add_tree_to_census(const FreeTree& tree, std::vector<Rational>& entries) {
  const FixPolynomial p = fix_polynomial(tree);
  const BigInt aut = p.total();
  for (std::size_t k = 0; k <= p.degree(); ++k) {
    if (sgn(p[k]) != 0) entries[k] += make_rational(p[k], aut);
  }
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n == 0) throw EnumerationError("symmetry_census: n must be >= 1");
  if (n > cap) {
    throw EnumerationError("symmetry_census: n=" + std::to_string(n) + " exceeds the census cap " +
                           std::to_string(cap));
  }
}

}  // namespace

SymTable symmetry_census(std::size_t n, const CensusOptions& options) {
  check_cap(n, options.cap);
  const auto trees = gen_free(n);
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk);
  const std::size_t chunks = (trees.size() + chunk - 1) / chunk;
  std::vector<std::vector<Rational>> partial(chunks, std::vector<Rational>(n + 1));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * chunk;
    const std::size_t end = std::min(trees.size(), begin + chunk);
    for (std::size_t i = begin; i < end; ++i) add_tree_to_census(trees[i], partial[c]);
  }
  SymTable table;
  table.n = n;
  table.entries.assign(n + 1, Rational(0));
  for (const auto& part : partial) {
    for (std::size_t k = 0; k <= n; ++k) table.entries[k] += part[k];
  }
  return table;
}

namespace serial {

SymTable symmetry_census(std::size_t n, std::size_t cap) {
  check_cap(n, cap);
  SymTable table;
  table.n = n;
  table.entries.assign(n + 1, Rational(0));
  TreeStream stream(n, StreamKind::free);
  while (stream.next()) add_tree_to_census(stream.current_free(), table.entries);
  return table;
}

}  // namespace serial

}  // namespace otter
