#pragma once

// The radius rho of A(z), the mean of the step variable X, the constants
// c_A and c_F, and ratio checks of exact counts against first- and
// second-order asymptotics.

#include <cstddef>
#include <stdexcept>

#include "otter/series.hpp"

namespace otter {

class AsymptoticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RhoSolution {
  double rho = 0.0;
  /// |e s_N(rho) - 1|, the defining equation actually solved.
  double residual = 0.0;
  /// A_N(rho) of the truncated series. Falls short of 1 by roughly
  /// 2 c_A / sqrt(N) because the coefficients of A decay like n^{-3/2} at rho.
  double truncated_a = 0.0;
};

/// Bisection on [0.2, 0.5] for rho exp(sum_{i>=2} A(rho^i)/i) = 1/e, which
/// is equivalent to A(rho) = 1 and converges geometrically in the truncation
/// order. Throws if the bracket has no sign change or the residual exceeds tol.
RhoSolution solve_rho(std::size_t order, double tol);

/// E[X] = 1 + sum_{i>=2} rho^i A'(rho^i), the derivative at 1 of the PGF
/// rho z exp(1 + sum_{i>=2} A((rho z)^i)/i). Throws if the PGF at 1 differs
/// from 1 by more than 1e-8.
double mean_step(double rho, std::size_t order);

struct Constants {
  double rho = 0.0;
  double mean_x = 0.0;
  double c_a = 0.0;
  double c_f = 0.0;
  std::size_t truncation_order = 0;
  double residual = 0.0;
};

/// c_A = sqrt(E[X] / 2pi), c_F = E[X]^{3/2} / sqrt(2pi); also checks
/// c_F = 2 pi c_A^3 to 1e-12.
Constants constants(std::size_t order = 400);

enum class TreeKind { rooted, free };

/// count / (c n^{-beta} rho^{-n}) with beta = 3/2 (rooted) or 5/2 (free),
/// evaluated in 50-digit binary floating point.
double asymptotic_ratio(const BigInt& count, std::size_t n, TreeKind kind, const Constants& c);
/// Same, fetching the exact count.
double asymptotic_ratio(std::size_t n, TreeKind kind, const Constants& c);

/// a_n / f_n - n / E[X].
double second_order_ratio(std::size_t n, const Constants& c);

/// 2 [z^n]U(s) rho^n / (E[X]^{-1} P(N = floor(n/E[X]))), where P(N = k) =
/// 2 k^{k-2} e^{-k} / k!. Tends to 1.
double local_limit_ratio(std::size_t n, const Constants& c);

}  // namespace otter
