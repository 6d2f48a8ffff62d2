#pragma once

// Laws of the step variable X, its partial sums S_k, and the mixing counts N
// and N~. Exact total-variation distance between F(A_n) and the uniform free
// tree, the conditional law of the number of fixed points, and tail checks.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "otter/asymptotics.hpp"
#include "otter/series.hpp"

namespace otter {

class StochasticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// pmf[m] = P(X = m) = e s_m rho^m, m = 0..order.
struct StepDistribution {
  double rho = 0.0;
  std::vector<double> pmf;
  double mean = 0.0;
};

/// Throws StochasticsError if sum pmf is off by more than 1e-8 or the mean
/// disagrees with mean_step by more than 1e-8.
StepDistribution step_law(std::size_t order = 200);

enum class RootCountKind {
  /// P(N = k) = 2 k^{k-2} e^{-k} / k!, PGF 2U(z/e).
  n,
  /// P(N~ = k) = k^{k-1} e^{-k} / k!, PGF T(z/e). No finite mean.
  n_tilde,
};

class RootCountLaw {
 public:
  explicit RootCountLaw(RootCountKind kind) : kind_(kind) {}

  RootCountKind kind() const { return kind_; }
  /// k >= 1.
  double pmf(std::size_t k) const;
  /// Direct sum below a cutoff plus the tail from the Stirling expansion of
  /// the pmf, integrated with Euler-Maclaurin corrections.
  double total() const;
  /// E[N]; throws for N~.
  double mean() const;

 private:
  RootCountKind kind_;
};

/// A finite distribution. Exact tables carry rationals summing to 1.
template <class Key, class Prob>
struct DistTable {
  std::vector<Key> support;
  std::vector<Prob> probs;
  bool exact = false;

  Prob total() const {
    Prob t = 0;
    for (const auto& p : probs) t += p;
    return t;
  }
};

template <class Key>
using ExactDist = DistTable<Key, Rational>;
template <class Key>
using RealDist = DistTable<Key, double>;

/// Half the L1 distance; keys missing from one side have mass 0 there.
template <class Key>
Rational total_variation(const std::map<Key, Rational>& p, const std::map<Key, Rational>& q) {
  Rational sum = 0;
  for (const auto& [key, mass] : p) {
    const auto it = q.find(key);
    sum += abs(mass - (it == q.end() ? Rational(0) : it->second));
  }
  for (const auto& [key, mass] : q) {
    if (p.find(key) == p.end()) sum += abs(mass);
  }
  return sum / 2;
}

/// P(S_k = n) = e^k rho^n [z^n] s(z)^k for n = 0..n_max.
RealDist<std::size_t> walk_law(std::size_t k, std::size_t n_max);

struct MixedWalkIdentity {
  Rational f_minus_sym0;
  Rational u_of_s;
  /// (1/2) sum_k P(N = k) P(S_k = n) rho^{-n}.
  double probabilistic = 0.0;
};

/// Throws StochasticsError when the probabilistic value misses u_of_s by
/// more than 1e-6 relative.
MixedWalkIdentity mixed_walk_identity_check(std::size_t n);

/// P(N = k | S_N = n) = [z^n] Sym_k / [z^n] U(s), k = 1..n. For n <= 12 the
/// census is computed too and must agree exactly.
ExactDist<std::size_t> conditional_fixed_points(std::size_t n);

inline constexpr std::size_t kTvExactCap = 18;

/// (1/2) sum over free trees F of |o(F)/a_n - 1/f_n|, exactly. Trees are
/// processed in parallel; the result is grouped by orbit count so the sum
/// is schedule independent.
Rational tv_exact(std::size_t n, std::size_t cap = kTvExactCap);

struct TvEstimate {
  double tv = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t rounds_total = 0;
};

/// (1/2) E|o(F) f_n / a_n - 1| over exactly uniform free trees F, with a
/// normal-approximation 95% interval. Samples are drawn in fixed blocks, one
/// RNG stream per block, so the estimate does not depend on thread count.
TvEstimate tv_monte_carlo(std::size_t n, std::size_t samples, std::uint64_t seed);

struct AppendixCheck {
  std::size_t k = 0;
  double x = 0.0;
  /// P(|S_k - k E[X]| >= x) from walk_law.
  double tail = 0.0;
  /// inf over lambda in [0, delta] of 2 exp(c k lambda^2 - lambda x).
  double bound = 0.0;
  double c = 0.0;
  double delta = 0.0;
  double best_lambda = 0.0;
  bool holds = false;
};

/// c = max K''(lambda) over [-delta, delta], K the cumulant generating
/// function of X; delta is half the geometric decay rate of pmf.
AppendixCheck appendix_lemma_check(std::size_t k, double x);

struct ConcentrationReport {
  std::size_t n = 0;
  double alpha = 0.0;
  double center = 0.0;
  double radius = 0.0;
  /// Mass of P(N = k | S_N = n) on |k - n/E[X]| >= n^alpha.
  double tail_mass = 0.0;
  /// -log(tail_mass) / n^{2 alpha - 1}; infinite when the tail is empty.
  double bound_exponent = 0.0;
  /// At k = round(n/E[X]), x = n^alpha.
  AppendixCheck appendix;
};

ConcentrationReport concentration_check(std::size_t n, double alpha);

namespace serial {
Rational tv_exact(std::size_t n, std::size_t cap = kTvExactCap);
}  // namespace serial

}  // namespace otter
