#include "otter/asymptotics.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "otter/counting.hpp"

namespace otter {

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

HighFloat to_high(const BigInt& v) { return HighFloat(v.get_str()); }
HighFloat to_high(const Rational& q) { return to_high(q.get_num()) / to_high(q.get_den()); }

std::vector<long double> coefficients_ld(const ExactSeries& a) {
  std::vector<long double> c(a.order() + 1);
  for (std::size_t n = 0; n <= a.order(); ++n) c[n] = static_cast<long double>(a[n].get_d());
  return c;
}

long double horner(const std::vector<long double>& c, long double x) {
  long double acc = 0.0L;
  for (std::size_t m = c.size(); m-- > 0;) acc = acc * x + c[m];
  return acc;
}

long double horner_derivative(const std::vector<long double>& c, long double x) {
  long double acc = 0.0L;
  for (std::size_t m = c.size(); m-- > 1;) acc = acc * x + c[m] * static_cast<long double>(m);
  return acc;
}

// sum_{i>=2} A(x^i)/i, stopping once x^i drops below 1e-22 (A(y) ~ y there).
long double higher_polya_sum(const std::vector<long double>& a, long double x) {
  long double total = 0.0L;
  long double xi = x * x;
  for (unsigned i = 2; xi > 1e-22L; ++i, xi *= x) total += horner(a, xi) / i;
  return total;
}

// e * s(x) - 1 = x exp(1 + sum_{i>=2} A(x^i)/i) - 1
long double s_equation(const std::vector<long double>& a, long double x) {
  return x * std::exp(1.0L + higher_polya_sum(a, x)) - 1.0L;
}

}  // namespace

RhoSolution solve_rho(std::size_t order, double tol) {
  if (order < 50) throw AsymptoticsError("solve_rho: truncation order must be at least 50");
  if (!(tol > 0.0)) throw AsymptoticsError("solve_rho: tolerance must be positive");
  const auto a = coefficients_ld(rooted_series(order));
  long double lo = 0.2L, hi = 0.5L;
  if (!(s_equation(a, lo) < 0.0L && s_equation(a, hi) > 0.0L)) {
    throw AsymptoticsError("solve_rho: no sign change on [0.2, 0.5]");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-18L; ++iter) {
    const long double mid = (lo + hi) / 2;
    (s_equation(a, mid) < 0.0L ? lo : hi) = mid;
  }
  RhoSolution sol;
  const long double rho = (lo + hi) / 2;
  sol.rho = static_cast<double>(rho);
  sol.residual = static_cast<double>(std::abs(s_equation(a, rho)));
  sol.truncated_a = static_cast<double>(horner(a, rho));
  if (sol.residual > tol) {
    throw AsymptoticsError("solve_rho: residual " + std::to_string(sol.residual) + " exceeds tolerance");
  }
  return sol;
}

double mean_step(double rho, std::size_t order) {
  const auto a = coefficients_ld(rooted_series(order));
  const long double r = rho;
  const long double pgf_at_one = r * std::exp(1.0L + higher_polya_sum(a, r));
  if (std::abs(pgf_at_one - 1.0L) > 1e-8L) {
    throw AsymptoticsError("mean_step: PGF(1) = " + std::to_string(static_cast<double>(pgf_at_one)) +
                           " is not normalized");
  }
  long double mean = 1.0L;
  long double ri = r * r;
  for (unsigned i = 2;; ++i, ri *= r) {
    const long double term = ri * horner_derivative(a, ri);
    mean += term;
    if (term < 1e-16L) break;
  }
  return static_cast<double>(mean);
}

Constants constants(std::size_t order) {
  const RhoSolution sol = solve_rho(order, 1e-10);
  Constants c;
  c.rho = sol.rho;
  c.residual = sol.residual;
  c.truncation_order = order;
  c.mean_x = mean_step(sol.rho, order);
  const double two_pi = 2.0 * std::numbers::pi;
  c.c_a = std::sqrt(c.mean_x / two_pi);
  c.c_f = std::pow(c.mean_x, 1.5) / std::sqrt(two_pi);
  if (std::abs(c.c_f / (two_pi * c.c_a * c.c_a * c.c_a) - 1.0) > 1e-12) {
    throw AsymptoticsError("constants: c_F != 2 pi c_A^3");
  }
  return c;
}

double asymptotic_ratio(const BigInt& count, std::size_t n, TreeKind kind, const Constants& c) {
  const HighFloat rho(c.rho);
  const HighFloat nn(static_cast<double>(n));
  const double beta = kind == TreeKind::rooted ? 1.5 : 2.5;
  const HighFloat constant(kind == TreeKind::rooted ? c.c_a : c.c_f);
  const HighFloat ratio = to_high(count) * boost::multiprecision::pow(rho, static_cast<int>(n)) *
                          boost::multiprecision::pow(nn, HighFloat(beta)) / constant;
  return ratio.convert_to<double>();
}

double asymptotic_ratio(std::size_t n, TreeKind kind, const Constants& c) {
  const BigInt count = kind == TreeKind::rooted ? rooted_counts(n)[n] : free_counts_dissymmetry(n)[n];
  return asymptotic_ratio(count, n, kind, c);
}

double second_order_ratio(std::size_t n, const Constants& c) {
  const Rational q = make_rational(rooted_counts(n)[n], free_counts_dissymmetry(n)[n]);
  return q.get_d() - static_cast<double>(n) / c.mean_x;
}

double local_limit_ratio(std::size_t n, const Constants& c) {
  const Rational u_of_s = free_counts_symmetry(n).u_of_s[n];
  const HighFloat lhs = 2 * to_high(u_of_s) * boost::multiprecision::pow(HighFloat(c.rho), static_cast<int>(n));
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) / c.mean_x));
  if (k == 0) throw AsymptoticsError("local_limit_ratio: n too small");
  const HighFloat kk(static_cast<double>(k));
  // log P(N = k) = log 2 + (k-2) log k - k - log k!
  const HighFloat log_p = boost::multiprecision::log(HighFloat(2)) + (kk - 2) * boost::multiprecision::log(kk) - kk -
                          boost::multiprecision::lgamma(kk + 1);
  const HighFloat rhs = boost::multiprecision::exp(log_p) / HighFloat(c.mean_x);
  return HighFloat(lhs / rhs).convert_to<double>();
}

}  // namespace otter
