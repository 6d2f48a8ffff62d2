#pragma once

// Truncated power series with exact rational coefficients, plus the
// Pólya-style exponential operators used to write down species equations
// for unlabelled trees.
//
// Every operation takes its output order from its inputs (or from an explicit
// argument); nothing is silently truncated below that order.

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace otter {

using BigInt = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms. mpq_class(num, den) alone skips the reduction
/// that every other mpq operation assumes.
Rational make_rational(const BigInt& num, const BigInt& den);

class SeriesError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coefficients of z^0..z^order, exact.
class ExactSeries {
 public:
  /// The zero series truncated at `order`.
  explicit ExactSeries(std::size_t order);
  /// Takes ownership of `coeffs`; its length must be order+1.
  ExactSeries(std::size_t order, std::vector<Rational> coeffs);

  static ExactSeries monomial(std::size_t order, std::size_t degree, const Rational& c = 1);
  static ExactSeries from_integers(std::size_t order, std::span<const BigInt> values);

  std::size_t order() const { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t n) const { return coeffs_[n]; }
  /// Coefficient of z^n, zero beyond the truncation order.
  Rational coeff(std::size_t n) const;
  std::span<const Rational> coeffs() const { return coeffs_; }

  ExactSeries truncated(std::size_t order) const;
  ExactSeries derivative() const;
  bool has_zero_constant() const { return sgn(coeffs_[0]) == 0; }
  /// True iff every coefficient is an integer.
  bool is_integral() const;

  bool operator==(const ExactSeries& other) const = default;

 private:
  std::vector<Rational> coeffs_;
};

ExactSeries add(const ExactSeries& a, const ExactSeries& b);
ExactSeries sub(const ExactSeries& a, const ExactSeries& b);
ExactSeries scale(const ExactSeries& a, const Rational& c);
/// Shift by z^k, keeping a.order().
ExactSeries shift(const ExactSeries& a, std::size_t k);

/// Cauchy product truncated to min(a.order(), b.order()). Output coefficients
/// are computed in parallel.
ExactSeries mul(const ExactSeries& a, const ExactSeries& b);
/// a^k at a.order(), by binary powering.
ExactSeries power(const ExactSeries& a, unsigned k);

/// exp(a) via n b_n = sum_k k a_k b_{n-k}. Requires a zero constant term.
ExactSeries exp_series(const ExactSeries& a);

/// a(z^i) at a.order().
ExactSeries substitute_power(const ExactSeries& a, unsigned i);

/// exp(sum_{i >= i_min} a(z^i)/i) at a.order().
ExactSeries polya_exp(const ExactSeries& a, unsigned i_min);

/// Generating series of unordered k-multisets of a-structures, computed as
/// [t^k] exp(sum_i t^i a(z^i)/i).
ExactSeries mset_slice(const ExactSeries& a, unsigned k);
/// mset_slice(a, 0..k_max) in one sweep.
std::vector<ExactSeries> mset_slices(const ExactSeries& a, unsigned k_max);

/// outer(inner(z)) at min order, by Horner's rule.
ExactSeries compose(const ExactSeries& outer, const ExactSeries& inner);

struct RealEvaluation {
  double value = 0.0;
  /// Heuristic size of the omitted tail sum_{m > order} c_m x^m.
  double tail_estimate = 0.0;
  /// False when the last terms do not decay geometrically fast enough for
  /// the tail estimate to mean anything.
  bool tail_reliable = true;
};

/// Sum of the truncated series at x in [0, 1).
RealEvaluation eval_real(const ExactSeries& a, double x);

/// Double-precision copy of an exact series.
class FloatSeries {
 public:
  explicit FloatSeries(std::size_t order) : coeffs_(order + 1, 0.0) {}
  FloatSeries(std::vector<double> coeffs, double rounding_error_bound)
      : coeffs_(std::move(coeffs)), rounding_error_bound_(rounding_error_bound) {}

  std::size_t order() const { return coeffs_.size() - 1; }
  double operator[](std::size_t n) const { return coeffs_[n]; }
  std::span<const double> coeffs() const { return coeffs_; }
  /// Max absolute error introduced by the exact-to-double conversion.
  double rounding_error_bound() const { return rounding_error_bound_; }
  double evaluate(double x) const;

 private:
  std::vector<double> coeffs_;
  double rounding_error_bound_ = 0.0;
};

FloatSeries to_float(const ExactSeries& a);
FloatSeries mul(const FloatSeries& a, const FloatSeries& b);
FloatSeries compose(const FloatSeries& outer, const FloatSeries& inner);

/// Line format: `n<TAB>numerator/denominator`, one coefficient per line.
void write_series(std::ostream& out, const ExactSeries& a);
ExactSeries read_series(std::istream& in);

namespace serial {
/// Single-threaded reference for otter::mul.
ExactSeries mul(const ExactSeries& a, const ExactSeries& b);
}  // namespace serial

}  // namespace otter
