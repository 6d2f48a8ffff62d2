#include "otter/series.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace otter {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw SeriesError("make_rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

std::vector<std::size_t> nonzero_indices(const ExactSeries& a, std::size_t upto) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= upto; ++k) {
    if (sgn(a[k]) != 0) idx.push_back(k);
  }
  return idx;
}

// sum_{k} a_k b_{n-k} over the nonzero support of a.
Rational convolve_at(const ExactSeries& a, const std::vector<std::size_t>& a_support,
                     const ExactSeries& b, std::size_t n) {
  Rational acc = 0;
  Rational term;
  for (std::size_t k : a_support) {
    if (k > n) break;
    const Rational& bk = b[n - k];
    if (sgn(bk) == 0) continue;
    mpq_mul(term.get_mpq_t(), a[k].get_mpq_t(), bk.get_mpq_t());
    mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), term.get_mpq_t());
  }
  return acc;
}

}  // namespace

ExactSeries::ExactSeries(std::size_t order) : coeffs_(order + 1) {}

ExactSeries::ExactSeries(std::size_t order, std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != order + 1) {
    throw SeriesError("ExactSeries: coefficient count " + std::to_string(coeffs_.size()) +
                      " does not match order " + std::to_string(order));
  }
  for (auto& c : coeffs_) c.canonicalize();
}

ExactSeries ExactSeries::monomial(std::size_t order, std::size_t degree, const Rational& c) {
  ExactSeries s(order);
  if (degree <= order) s.coeffs_[degree] = c;
  return s;
}

ExactSeries ExactSeries::from_integers(std::size_t order, std::span<const BigInt> values) {
  std::vector<Rational> c(order + 1);
  for (std::size_t n = 0; n <= order && n < values.size(); ++n) c[n] = Rational(values[n]);
  return ExactSeries(order, std::move(c));
}

Rational ExactSeries::coeff(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : Rational(0); }

ExactSeries ExactSeries::truncated(std::size_t order) const {
  if (order > this->order()) {
    throw SeriesError("truncated: requested order exceeds available order");
  }
  return ExactSeries(order, std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

ExactSeries ExactSeries::derivative() const {
  const std::size_t out_order = order() == 0 ? 0 : order() - 1;
  std::vector<Rational> c(out_order + 1);
  for (std::size_t n = 1; n <= order(); ++n) c[n - 1] = coeffs_[n] * static_cast<unsigned long>(n);
  return ExactSeries(out_order, std::move(c));
}

bool ExactSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.get_den() == 1; });
}

ExactSeries add(const ExactSeries& a, const ExactSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Rational> c(order + 1);
  for (std::size_t n = 0; n <= order; ++n) c[n] = a[n] + b[n];
  return ExactSeries(order, std::move(c));
}

ExactSeries sub(const ExactSeries& a, const ExactSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Rational> c(order + 1);
  for (std::size_t n = 0; n <= order; ++n) c[n] = a[n] - b[n];
  return ExactSeries(order, std::move(c));
}

ExactSeries scale(const ExactSeries& a, const Rational& k) {
  std::vector<Rational> c(a.order() + 1);
  for (std::size_t n = 0; n <= a.order(); ++n) c[n] = a[n] * k;
  return ExactSeries(a.order(), std::move(c));
}

ExactSeries shift(const ExactSeries& a, std::size_t k) {
  std::vector<Rational> c(a.order() + 1);
  for (std::size_t n = k; n <= a.order(); ++n) c[n] = a[n - k];
  return ExactSeries(a.order(), std::move(c));
}

ExactSeries mul(const ExactSeries& a, const ExactSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  const auto support = nonzero_indices(a, order);
  std::vector<Rational> c(order + 1);
  // Later coefficients cost more; dynamic scheduling keeps threads balanced.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(order); i >= 0; --i) {
    const auto n = static_cast<std::size_t>(i);
    c[n] = convolve_at(a, support, b, n);
  }
  return ExactSeries(order, std::move(c));
}

namespace serial {

ExactSeries mul(const ExactSeries& a, const ExactSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Rational> c(order + 1);
  for (std::size_t i = 0; i <= order; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= order; ++j) c[i + j] += a[i] * b[j];
  }
  return ExactSeries(order, std::move(c));
}

}  // namespace serial

ExactSeries power(const ExactSeries& a, unsigned k) {
  ExactSeries result = ExactSeries::monomial(a.order(), 0);
  ExactSeries base = a;
  while (k > 0) {
    if (k & 1U) result = mul(result, base);
    k >>= 1U;
    if (k > 0) base = mul(base, base);
  }
  return result;
}

ExactSeries exp_series(const ExactSeries& a) {
  if (!a.has_zero_constant()) throw SeriesError("exp_series: constant term must be zero");
  const std::size_t order = a.order();
  // weighted[k] = k a_k, the coefficients of z a'(z).
  std::vector<Rational> weighted(order + 1);
  std::vector<std::size_t> support;
  for (std::size_t k = 1; k <= order; ++k) {
    if (sgn(a[k]) == 0) continue;
    weighted[k] = a[k] * static_cast<unsigned long>(k);
    support.push_back(k);
  }
  std::vector<Rational> b(order + 1);
  b[0] = 1;
  Rational term;
  for (std::size_t n = 1; n <= order; ++n) {
    Rational acc = 0;
    for (std::size_t k : support) {
      if (k > n) break;
      if (sgn(b[n - k]) == 0) continue;
      mpq_mul(term.get_mpq_t(), weighted[k].get_mpq_t(), b[n - k].get_mpq_t());
      mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), term.get_mpq_t());
    }
    b[n] = acc / static_cast<unsigned long>(n);
  }
  return ExactSeries(order, std::move(b));
}

ExactSeries substitute_power(const ExactSeries& a, unsigned i) {
  if (i == 0) throw SeriesError("substitute_power: exponent must be positive");
  std::vector<Rational> c(a.order() + 1);
  for (std::size_t n = 0; n * i <= a.order(); ++n) c[n * i] = a[n];
  return ExactSeries(a.order(), std::move(c));
}

ExactSeries polya_exp(const ExactSeries& a, unsigned i_min) {
  if (!a.has_zero_constant()) throw SeriesError("polya_exp: constant term must be zero");
  if (i_min == 0) throw SeriesError("polya_exp: i_min must be positive");
  const std::size_t order = a.order();
  std::vector<Rational> g(order + 1);
  for (std::size_t i = i_min; i <= order; ++i) {
    for (std::size_t d = 1; d * i <= order; ++d) {
      if (sgn(a[d]) != 0) g[d * i] += a[d] / static_cast<unsigned long>(i);
    }
  }
  return exp_series(ExactSeries(order, std::move(g)));
}

std::vector<ExactSeries> mset_slices(const ExactSeries& a, unsigned k_max) {
  if (!a.has_zero_constant()) throw SeriesError("mset_slice: constant term must be zero");
  const std::size_t order = a.order();
  std::vector<ExactSeries> slices;
  slices.reserve(k_max + 1);
  slices.push_back(ExactSeries::monomial(order, 0));
  // k Z_k = sum_{i=1}^{k} a(z^i) Z_{k-i}
  for (unsigned k = 1; k <= k_max; ++k) {
    std::vector<Rational> acc(order + 1);
    for (unsigned i = 1; i <= k; ++i) {
      const ExactSeries& prev = slices[k - i];
      for (std::size_t d = 1; d * i <= order; ++d) {
        if (sgn(a[d]) == 0) continue;
        const std::size_t offset = d * i;
        for (std::size_t m = 0; m + offset <= order; ++m) {
          if (sgn(prev[m]) != 0) acc[m + offset] += a[d] * prev[m];
        }
      }
    }
    for (auto& c : acc) c /= k;
    slices.emplace_back(order, std::move(acc));
  }
  return slices;
}

ExactSeries mset_slice(const ExactSeries& a, unsigned k) { return mset_slices(a, k).back(); }

ExactSeries compose(const ExactSeries& outer, const ExactSeries& inner) {
  if (!inner.has_zero_constant()) throw SeriesError("compose: inner series needs a zero constant term");
  const std::size_t order = std::min(outer.order(), inner.order());
  ExactSeries result = ExactSeries::monomial(order, 0, outer[order]);
  const ExactSeries in = inner.truncated(order);
  for (std::size_t m = order; m-- > 0;) {
    result = mul(result, in);
    std::vector<Rational> c(result.coeffs().begin(), result.coeffs().end());
    c[0] += outer[m];
    result = ExactSeries(order, std::move(c));
  }
  return result;
}

RealEvaluation eval_real(const ExactSeries& a, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw SeriesError("eval_real: x must lie in [0, 1)");
  RealEvaluation r;
  // Horner in long double; the value is rounded once at the end.
  long double acc = 0.0L;
  for (std::size_t m = a.order() + 1; m-- > 0;) acc = acc * x + a[m].get_d();
  r.value = static_cast<double>(acc);

  // Tail: extrapolate geometrically from the last two nonzero terms.
  std::size_t last = a.order() + 1, prev = a.order() + 1;
  for (std::size_t m = a.order() + 1; m-- > 0;) {
    if (sgn(a[m]) == 0) continue;
    if (last > a.order()) {
      last = m;
    } else {
      prev = m;
      break;
    }
  }
  if (last > a.order() || x == 0.0) {
    r.tail_estimate = 0.0;
    return r;
  }
  const double t_last = std::abs(a[last].get_d()) * std::pow(x, static_cast<double>(last));
  if (prev > a.order()) {
    r.tail_estimate = t_last;
    r.tail_reliable = false;
    return r;
  }
  const double t_prev = std::abs(a[prev].get_d()) * std::pow(x, static_cast<double>(prev));
  const double ratio = t_prev > 0.0 ? std::pow(t_last / t_prev, 1.0 / static_cast<double>(last - prev)) : 1.0;
  if (ratio >= 0.99) {
    r.tail_estimate = std::numeric_limits<double>::infinity();
    r.tail_reliable = false;
  } else {
    r.tail_estimate = t_last * ratio / (1.0 - ratio);
  }
  return r;
}

double FloatSeries::evaluate(double x) const {
  long double acc = 0.0L;
  for (std::size_t m = coeffs_.size(); m-- > 0;) acc = acc * x + coeffs_[m];
  return static_cast<double>(acc);
}

FloatSeries to_float(const ExactSeries& a) {
  std::vector<double> c(a.order() + 1);
  double bound = 0.0;
  for (std::size_t n = 0; n <= a.order(); ++n) {
    c[n] = a[n].get_d();
    // mpq_get_d truncates, so the error is below one ulp of the result.
    const double ulp = std::abs(std::nextafter(c[n], std::numeric_limits<double>::infinity()) - c[n]);
    bound = std::max(bound, ulp);
  }
  return FloatSeries(std::move(c), bound);
}

FloatSeries mul(const FloatSeries& a, const FloatSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<double> c(order + 1, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i <= static_cast<std::ptrdiff_t>(order); ++i) {
    const auto n = static_cast<std::size_t>(i);
    long double acc = 0.0L;
    for (std::size_t k = 0; k <= n; ++k) acc += static_cast<long double>(a[k]) * b[n - k];
    c[n] = static_cast<double>(acc);
  }
  return FloatSeries(std::move(c), 0.0);
}

FloatSeries compose(const FloatSeries& outer, const FloatSeries& inner) {
  if (inner[0] != 0.0) throw SeriesError("compose: inner series needs a zero constant term");
  const std::size_t order = std::min(outer.order(), inner.order());
  std::vector<double> in(inner.coeffs().begin(), inner.coeffs().begin() + order + 1);
  const FloatSeries inner_t(std::move(in), 0.0);
  FloatSeries result(order);
  {
    std::vector<double> c(order + 1, 0.0);
    c[0] = outer[order];
    result = FloatSeries(std::move(c), 0.0);
  }
  for (std::size_t m = order; m-- > 0;) {
    FloatSeries next = mul(result, inner_t);
    std::vector<double> c(next.coeffs().begin(), next.coeffs().end());
    c[0] += outer[m];
    result = FloatSeries(std::move(c), 0.0);
  }
  return result;
}

void write_series(std::ostream& out, const ExactSeries& a) {
  for (std::size_t n = 0; n <= a.order(); ++n) {
    out << n << '\t' << a[n].get_num() << '/' << a[n].get_den() << '\n';
  }
}

ExactSeries read_series(std::istream& in) {
  std::vector<Rational> c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t n = 0;
    std::string value;
    if (!(row >> n >> value)) throw SeriesError("read_series: malformed line '" + line + "'");
    if (n != c.size()) throw SeriesError("read_series: coefficient indices must be consecutive from 0");
    Rational q;
    if (q.set_str(value, 10) != 0) throw SeriesError("read_series: bad rational '" + value + "'");
    c.push_back(q);
  }
  if (c.empty()) throw SeriesError("read_series: empty input");
  const std::size_t order = c.size() - 1;
  return ExactSeries(order, std::move(c));
}

}  // namespace otter
