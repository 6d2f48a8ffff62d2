#include "otter/counting.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "otter/cache.hpp"

namespace otter {

namespace {

BigInt factorial(std::size_t n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

BigInt pow_ui(std::size_t base, std::size_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

CountTable table_from_series(CountKind kind, const ExactSeries& s, std::string_view what) {
  std::vector<BigInt> values(s.order() + 1);
  for (std::size_t n = 1; n <= s.order(); ++n) {
    if (s[n].get_den() != 1) {
      throw CountingError(std::string(what) + ": non-integral coefficient at n=" + std::to_string(n));
    }
    values[n] = s[n].get_num();
  }
  return CountTable(kind, std::move(values));
}

ExactSeries compute_rooted_series(std::size_t n_max) {
  ExactSeries a = ExactSeries::monomial(1, 1);
  for (std::size_t m = 1; m < n_max; ++m) {
    // z polya_exp(A_m, 1) is correct through z^{m+1} when A_m is correct through z^m.
    const ExactSeries e = polya_exp(a, 1);
    std::vector<Rational> next(m + 2);
    for (std::size_t j = 0; j <= m; ++j) next[j + 1] = e[j];
    a = ExactSeries(m + 1, std::move(next));
    if (a[m + 1].get_den() != 1) {
      throw CountingError("rooted_series: non-integral a_" + std::to_string(m + 1));
    }
  }
  if (n_max == 0) return ExactSeries(0);
  return a;
}

}  // namespace

std::string_view to_string(CountKind kind) {
  switch (kind) {
    case CountKind::rooted_unlabelled: return "rooted_unlabelled";
    case CountKind::free_unlabelled: return "free_unlabelled";
    case CountKind::labelled_unrooted: return "labelled_unrooted";
    case CountKind::labelled_rooted: return "labelled_rooted";
  }
  return "unknown";
}

CountTable::CountTable(CountKind kind, std::vector<BigInt> values) : kind_(kind), values_(std::move(values)) {
  if (values_.empty()) values_.resize(1);
}

namespace {

// Coefficients below n never depend on the truncation order, so one table
// at the largest order seen serves every smaller request. Orders are rounded
// up to a multiple of 100 so that sweeps over n rebuild rarely.
std::size_t rounded_order(std::size_t n) { return std::max<std::size_t>(100, (n + 99) / 100 * 100); }

template <class Fn>
ExactSeries prefix_memo(const std::string& family, std::size_t n_max, Fn compute) {
  static std::mutex m;
  static std::map<std::string, ExactSeries> largest;
  {
    std::lock_guard<std::mutex> lk(m);
    const auto it = largest.find(family);
    if (it != largest.end() && it->second.order() >= n_max) return it->second.truncated(n_max);
  }
  const std::size_t order = rounded_order(n_max);
  ExactSeries s = cache::load_or_compute(family + "_" + std::to_string(order), [&] { return compute(order); });
  {
    std::lock_guard<std::mutex> lk(m);
    auto it = largest.find(family);
    if (it == largest.end()) {
      largest.emplace(family, s);
    } else if (it->second.order() < s.order()) {
      it->second = s;
    }
  }
  return s.truncated(n_max);
}

}  // namespace

ExactSeries rooted_series(std::size_t n_max) {
  return prefix_memo("rooted_A", n_max, [](std::size_t order) { return compute_rooted_series(order); });
}

CountTable rooted_counts(std::size_t n_max) {
  if (n_max < 1) throw CountingError("rooted_counts: n_max must be >= 1");
  return table_from_series(CountKind::rooted_unlabelled, rooted_series(n_max), "rooted_counts");
}

CountTable rooted_counts_recurrence(std::size_t n_max) {
  std::vector<BigInt> a(n_max + 1);
  if (n_max >= 1) a[1] = 1;
  for (std::size_t n = 2; n <= n_max; ++n) {
    BigInt acc = 0;
    for (std::size_t d = 1; d <= n - 1; ++d) {
      const BigInt da = a[d] * static_cast<unsigned long>(d);
      for (std::size_t j = 1; j * d <= n - 1; ++j) acc += da * a[n - j * d];
    }
    if (!mpz_divisible_ui_p(acc.get_mpz_t(), n - 1)) {
      throw CountingError("rooted_counts_recurrence: non-integral a_" + std::to_string(n));
    }
    mpz_divexact_ui(a[n].get_mpz_t(), acc.get_mpz_t(), n - 1);
  }
  return CountTable(CountKind::rooted_unlabelled, std::move(a));
}

ExactSeries free_series_dissymmetry(std::size_t n_max) {
  return prefix_memo("free_F", n_max, [](std::size_t order) {
    const ExactSeries a = rooted_series(order);
    const ExactSeries correction = sub(mul(a, a), substitute_power(a, 2));
    ExactSeries f = sub(a, scale(correction, Rational(1, 2)));
    if (!f.is_integral()) throw CountingError("free_series_dissymmetry: non-integral coefficient");
    return f;
  });
}

CountTable free_counts_dissymmetry(std::size_t n_max) {
  if (n_max < 1) throw CountingError("free_counts_dissymmetry: n_max must be >= 1");
  return table_from_series(CountKind::free_unlabelled, free_series_dissymmetry(n_max), "free_counts_dissymmetry");
}

CountTable labelled_counts(std::size_t n_max) {
  std::vector<BigInt> u(n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) u[n] = n == 1 ? BigInt(1) : pow_ui(n, n - 2);
  return CountTable(CountKind::labelled_unrooted, std::move(u));
}

CountTable labelled_rooted_counts(std::size_t n_max) {
  std::vector<BigInt> t(n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) t[n] = pow_ui(n, n - 1);
  return CountTable(CountKind::labelled_rooted, std::move(t));
}

ExactSeries labelled_unrooted_egf(std::size_t order) {
  const CountTable u = labelled_counts(order);
  std::vector<Rational> c(order + 1);
  for (std::size_t n = 1; n <= order; ++n) c[n] = make_rational(u[n], factorial(n));
  return ExactSeries(order, std::move(c));
}

ExactSeries labelled_rooted_egf(std::size_t order) {
  const CountTable t = labelled_rooted_counts(order);
  std::vector<Rational> c(order + 1);
  for (std::size_t n = 1; n <= order; ++n) c[n] = make_rational(t[n], factorial(n));
  return ExactSeries(order, std::move(c));
}

ExactSeries s_series(std::size_t n_max) {
  return prefix_memo("s", n_max, [](std::size_t order) {
    const ExactSeries a = rooted_series(order);
    return shift(polya_exp(a, 2), 1);
  });
}

SymmetrySlices::SymmetrySlices(std::size_t n_max) : n_max_(n_max), power_(n_max + 1), u_of_s_(n_max) {
  const ExactSeries s = s_series(n_max);
  // sigma[m] = (m-1)! [z^m] s
  std::vector<BigInt> sigma(n_max + 1);
  for (std::size_t m = 1; m <= n_max; ++m) {
    const Rational scaled = s[m] * Rational(factorial(m - 1));
    if (scaled.get_den() != 1) {
      throw CountingError("SymmetrySlices: (m-1)! s_m not integral at m=" + std::to_string(m));
    }
    sigma[m] = scaled.get_num();
  }
  if (n_max == 0) return;

  // weight[r][m-1] = C(r, m-1) sigma[m]
  std::vector<std::vector<BigInt>> weight(n_max);
  {
    std::vector<BigInt> binom{1};
    for (std::size_t r = 0; r < n_max; ++r) {
      if (r > 0) {
        std::vector<BigInt> next(r + 1);
        next[0] = 1;
        next[r] = 1;
        for (std::size_t j = 1; j < r; ++j) next[j] = binom[j - 1] + binom[j];
        binom = std::move(next);
      }
      weight[r].resize(r + 1);
      for (std::size_t j = 0; j <= r; ++j) weight[r][j] = binom[j] * sigma[j + 1];
    }
  }

  power_[1].assign(sigma.begin() + 1, sigma.end());
  for (std::size_t k = 2; k <= n_max; ++k) {
    power_[k].resize(n_max - k + 1);
    const auto& prev = power_[k - 1];
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n_max); i >= static_cast<std::ptrdiff_t>(k); --i) {
      const auto n = static_cast<std::size_t>(i);
      BigInt acc = 0;
      const auto& w = weight[n - k];
      // P(k, n) = sum_m C(n-k, m-1) sigma_m P(k-1, n-m)
      for (std::size_t m = 1; m <= n - k + 1; ++m) {
        const BigInt& p = prev[n - m - (k - 1)];
        if (sgn(w[m - 1]) == 0 || sgn(p) == 0) continue;
        mpz_addmul(acc.get_mpz_t(), w[m - 1].get_mpz_t(), p.get_mpz_t());
      }
      power_[k][n - k] = std::move(acc);
    }
  }

  const ExactSeries u = labelled_unrooted_egf(n_max);
  std::vector<Rational> us(n_max + 1);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 1; i <= static_cast<std::ptrdiff_t>(n_max); ++i) {
    const auto n = static_cast<std::size_t>(i);
    Rational acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += u[k] * make_rational(power_[k][n - k], factorial(n - k));
    us[n] = acc;
  }
  u_of_s_ = ExactSeries(n_max, std::move(us));
}

Rational SymmetrySlices::s_power_coefficient(std::size_t k, std::size_t n) const {
  if (k == 0) return n == 0 ? Rational(1) : Rational(0);
  if (k > n_max_ || n > n_max_) throw CountingError("SymmetrySlices: index beyond table order");
  if (n < k) return 0;
  return make_rational(power_[k][n - k], factorial(n - k));
}

Rational SymmetrySlices::sym_coefficient(std::size_t k, std::size_t n) const {
  if (k == 0) throw CountingError("SymmetrySlices: k = 0 is Sym_0, use free_counts_symmetry");
  const BigInt uk = k == 1 ? BigInt(1) : pow_ui(k, k - 2);
  return make_rational(uk, factorial(k)) * s_power_coefficient(k, n);
}

std::shared_ptr<const SymmetrySlices> symmetry_slices(std::size_t n_max) {
  static std::mutex m;
  static std::shared_ptr<const SymmetrySlices> largest;
  std::lock_guard<std::mutex> lk(m);
  if (!largest || largest->n_max() < n_max) largest = std::make_shared<const SymmetrySlices>(rounded_order(n_max));
  return largest;
}

SymmetryRoute free_counts_symmetry(std::size_t n_max) {
  if (n_max < 1) throw CountingError("free_counts_symmetry: n_max must be >= 1");
  const ExactSeries f = free_series_dissymmetry(n_max);
  const ExactSeries u_of_s = cache::load_or_compute("u_of_s_" + std::to_string(n_max), [n_max] {
    return symmetry_slices(n_max)->u_of_s().truncated(n_max);
  });
  const ExactSeries sym0 = sub(f, u_of_s);
  const ExactSeries a2 = substitute_power(rooted_series(n_max), 2);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (sgn(sym0[n]) < 0) throw CountingError("free_counts_symmetry: negative Sym_0 at n=" + std::to_string(n));
    if (sym0[n] > a2[n]) {
      throw CountingError("free_counts_symmetry: Sym_0 exceeds [z^n]A(z^2) at n=" + std::to_string(n));
    }
  }
  CountTable free = table_from_series(CountKind::free_unlabelled, add(u_of_s, sym0), "free_counts_symmetry");
  return SymmetryRoute{u_of_s, sym0, std::move(free)};
}

ExactSeries sym_k_series(std::size_t k, std::size_t n_max) {
  if (k == 0) throw CountingError("sym_k_series: k must be positive");
  const auto slices = symmetry_slices(n_max);
  std::vector<Rational> c(n_max + 1);
  for (std::size_t n = k; n <= n_max; ++n) c[n] = slices->sym_coefficient(k, n);
  return ExactSeries(n_max, std::move(c));
}

Rational SymTable::total() const {
  Rational t = 0;
  for (const auto& e : entries) t += e;
  return t;
}

SymTable sym_table(std::size_t n) {
  if (n < 1) throw CountingError("sym_table: n must be >= 1");
  const auto slices = symmetry_slices(n);
  SymTable row;
  row.n = n;
  row.entries.resize(n + 1);
  row.entries[0] = free_series_dissymmetry(n)[n] - slices->u_of_s()[n];
  for (std::size_t k = 1; k <= n; ++k) row.entries[k] = slices->sym_coefficient(k, n);
  return row;
}

namespace serial {

ExactSeries sym_k_series(std::size_t k, std::size_t n_max) {
  if (k == 0) throw CountingError("sym_k_series: k must be positive");
  const ExactSeries s = s_series(n_max);
  ExactSeries p = s;
  for (std::size_t j = 1; j < k; ++j) p = otter::serial::mul(p, s);
  const BigInt uk = k == 1 ? BigInt(1) : pow_ui(k, k - 2);
  return scale(p, make_rational(uk, factorial(k)));
}

}  // namespace serial

}  // namespace otter
