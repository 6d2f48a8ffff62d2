#pragma once

// Exact counting sequences for unlabelled and labelled trees, the series
// s(z) = z exp(sum_{i>=2} A(z^i)/i), and the split of the free-tree series by
// the number of fixed points of a symmetry.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "otter/series.hpp"

namespace otter {

/// Raised when an exact computation produces something that cannot be right
/// (a non-integral count, a negative slice). Always an implementation bug.
class CountingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CountKind { rooted_unlabelled, free_unlabelled, labelled_unrooted, labelled_rooted };

std::string_view to_string(CountKind kind);

/// values indexed by n >= 1.
class CountTable {
 public:
  CountTable(CountKind kind, std::vector<BigInt> values_from_one);

  CountKind kind() const { return kind_; }
  std::size_t n_max() const { return values_.size() - 1; }
  const BigInt& operator[](std::size_t n) const { return values_.at(n); }

 private:
  CountKind kind_;
  std::vector<BigInt> values_;  // values_[0] unused
};

/// A(z) to order n_max by fixed-point iteration of A = z polya_exp(A, 1),
/// growing the order by one per sweep. Throws CountingError on a
/// non-integral coefficient.
ExactSeries rooted_series(std::size_t n_max);
CountTable rooted_counts(std::size_t n_max);
/// a_n from (n-1) a_n = sum_{j d <= n-1} d a_d a_{n-jd}. Independent of the
/// series code; the sampler's tables come from here.
CountTable rooted_counts_recurrence(std::size_t n_max);

/// F(z) = A(z) - (A(z)^2 - A(z^2))/2.
ExactSeries free_series_dissymmetry(std::size_t n_max);
CountTable free_counts_dissymmetry(std::size_t n_max);

/// u_n = n^{n-2} (u_1 = 1).
CountTable labelled_counts(std::size_t n_max);
/// n^{n-1}.
CountTable labelled_rooted_counts(std::size_t n_max);
/// U(z) = sum n^{n-2}/n! z^n.
ExactSeries labelled_unrooted_egf(std::size_t order);
/// T(z) = sum n^{n-1}/n! z^n.
ExactSeries labelled_rooted_egf(std::size_t order);

ExactSeries s_series(std::size_t n_max);

/// Powers of s(z) up to a fixed order, stored as integers: for k >= 1,
/// [z^n] s^k = P(k, n) / (n-k)!. This holds because (m-1)! [z^m] s is an
/// integer (s = A exp(-A)), which turns s^k into a binomial convolution.
class SymmetrySlices {
 public:
  explicit SymmetrySlices(std::size_t n_max);

  std::size_t n_max() const { return n_max_; }
  /// [z^n] s(z)^k for 1 <= k, n <= n_max.
  Rational s_power_coefficient(std::size_t k, std::size_t n) const;
  /// [z^n] Sym_k(U)(z) = (k^{k-2}/k!) [z^n] s^k, k >= 1.
  Rational sym_coefficient(std::size_t k, std::size_t n) const;
  /// [z^n] U(s(z)).
  const ExactSeries& u_of_s() const { return u_of_s_; }

 private:
  std::size_t n_max_;
  // power_[k][n - k] = P(k, n)
  std::vector<std::vector<BigInt>> power_;
  ExactSeries u_of_s_;
};

/// Process-wide table, rebuilt only when a larger order is requested.
std::shared_ptr<const SymmetrySlices> symmetry_slices(std::size_t n_max);

/// The free series split as U(s) plus the fixed-point-free part.
struct SymmetryRoute {
  ExactSeries u_of_s;
  /// Defined as F_dissymmetry - U(s).
  ExactSeries sym0;
  CountTable free;
};

/// f_n via U(s(z)) + Sym_0. Throws CountingError if Sym_0 is negative or
/// exceeds [z^n] A(z^2).
SymmetryRoute free_counts_symmetry(std::size_t n_max);

/// Sym_k(U)(z) to order n_max, k >= 1.
ExactSeries sym_k_series(std::size_t k, std::size_t n_max);

/// One row of the fixed-point split: entries[k] = [z^n] Sym_k, 0 <= k <= n.
struct SymTable {
  std::size_t n = 0;
  std::vector<Rational> entries;

  Rational total() const;
};

/// Row n from the series route (k = 0 from Sym_0 = F - U(s)).
SymTable sym_table(std::size_t n);

namespace serial {
/// Rational-arithmetic reference for SymmetrySlices::sym_coefficient, via
/// repeated series multiplication of s.
ExactSeries sym_k_series(std::size_t k, std::size_t n_max);
}  // namespace serial

}  // namespace otter
