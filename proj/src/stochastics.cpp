#include "otter/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "otter/counting.hpp"
#include "otter/enumerate.hpp"
#include "otter/sample.hpp"
#include "otter/tree.hpp"

namespace otter {

namespace {

const Constants& default_constants() {
  static std::once_flag once;
  static Constants c;
  std::call_once(once, [] { c = constants(400); });
  return c;
}

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr std::size_t kRootLawCutoff = 20000;

// Stirling: k^k e^{-k} / k! = (2 pi k)^{-1/2} (1 - 1/(12k) + 1/(288k^2) + 139/(51840k^3) + ...).
constexpr long double kStirlingInverse[] = {1.0L, -1.0L / 12.0L, 1.0L / 288.0L, 139.0L / 51840.0L};

// sum_{k >= K} C sum_j c_j k^{-(a+j)} by Euler-Maclaurin.
long double power_tail_sum(long double scale, long double a, std::size_t K) {
  const long double k = static_cast<long double>(K);
  long double integral = 0, f = 0, f1 = 0, f3 = 0;
  for (std::size_t j = 0; j < std::size(kStirlingInverse); ++j) {
    const long double b = a + static_cast<long double>(j);
    const long double c = kStirlingInverse[j];
    integral += c * std::pow(k, 1 - b) / (b - 1);
    f += c * std::pow(k, -b);
    f1 += -c * b * std::pow(k, -b - 1);
    f3 += -c * b * (b + 1) * (b + 2) * std::pow(k, -b - 3);
  }
  return scale * (integral + f / 2 - f1 / 12 + f3 / 720);
}

long double log_root_pmf(RootCountKind kind, std::size_t k) {
  const long double kk = static_cast<long double>(k);
  const long double common = -kk - std::lgamma(kk + 1);
  if (kind == RootCountKind::n) return std::log(2.0L) + (kk - 2) * std::log(kk) + common;
  return (kk - 1) * std::log(kk) + common;
}

}  // namespace

StepDistribution step_law(std::size_t order) {
  if (order < 1) throw StochasticsError("step_law: order must be positive");
  const Constants& c = default_constants();
  const ExactSeries s = s_series(order);
  StepDistribution d;
  d.rho = c.rho;
  d.pmf.assign(order + 1, 0.0);
  const long double log_rho = std::log(static_cast<long double>(c.rho));
  long double total = 0, mean = 0;
  for (std::size_t m = 1; m <= order; ++m) {
    if (sgn(s[m]) == 0) continue;
    const long double p = std::exp(1 + static_cast<long double>(m) * log_rho) * s[m].get_d();
    d.pmf[m] = static_cast<double>(p);
    total += p;
    mean += static_cast<long double>(m) * p;
  }
  d.mean = static_cast<double>(mean);
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-8) {
    throw StochasticsError("step_law: pmf sums to " + std::to_string(static_cast<double>(total)));
  }
  if (std::fabs(d.mean - c.mean_x) > 1e-8) {
    throw StochasticsError("step_law: mean " + std::to_string(d.mean) + " disagrees with E[X]");
  }
  return d;
}

double RootCountLaw::pmf(std::size_t k) const {
  if (k == 0) return 0.0;
  return static_cast<double>(std::exp(log_root_pmf(kind_, k)));
}

double RootCountLaw::total() const {
  long double sum = 0;
  for (std::size_t k = 1; k < kRootLawCutoff; ++k) sum += std::exp(log_root_pmf(kind_, k));
  const long double root = 1 / std::sqrt(2 * kPi);
  if (kind_ == RootCountKind::n) return static_cast<double>(sum + power_tail_sum(2 * root, 2.5L, kRootLawCutoff));
  return static_cast<double>(sum + power_tail_sum(root, 1.5L, kRootLawCutoff));
}

double RootCountLaw::mean() const {
  if (kind_ != RootCountKind::n) throw StochasticsError("RootCountLaw: N~ has no finite mean");
  long double sum = 0;
  for (std::size_t k = 1; k < kRootLawCutoff; ++k) {
    sum += static_cast<long double>(k) * std::exp(log_root_pmf(kind_, k));
  }
  const long double root = 1 / std::sqrt(2 * kPi);
  return static_cast<double>(sum + power_tail_sum(2 * root, 1.5L, kRootLawCutoff));
}

RealDist<std::size_t> walk_law(std::size_t k, std::size_t n_max) {
  RealDist<std::size_t> law;
  law.support.resize(n_max + 1);
  std::iota(law.support.begin(), law.support.end(), std::size_t{0});
  law.probs.assign(n_max + 1, 0.0);
  if (k == 0) {
    law.probs[0] = 1.0;
    return law;
  }
  if (k > n_max) return law;
  const auto slices = symmetry_slices(n_max);
  const long double log_rho = std::log(static_cast<long double>(default_constants().rho));
  for (std::size_t n = k; n <= n_max; ++n) {
    const Rational coef = slices->s_power_coefficient(k, n);
    if (sgn(coef) == 0) continue;
    const long double weight = std::exp(static_cast<long double>(k) + static_cast<long double>(n) * log_rho);
    law.probs[n] = static_cast<double>(weight * coef.get_d());
  }
  return law;
}

MixedWalkIdentity mixed_walk_identity_check(std::size_t n) {
  if (n < 1) throw StochasticsError("mixed_walk_identity_check: n must be >= 1");
  const auto slices = symmetry_slices(n);
  const RootCountLaw law_n(RootCountKind::n);
  const long double log_rho = std::log(static_cast<long double>(default_constants().rho));
  MixedWalkIdentity out;
  long double prob = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    out.f_minus_sym0 += slices->sym_coefficient(k, n);
    const long double p_walk = std::exp(static_cast<long double>(k) + static_cast<long double>(n) * log_rho) *
                               slices->s_power_coefficient(k, n).get_d();
    prob += static_cast<long double>(law_n.pmf(k)) * p_walk;
  }
  out.u_of_s = slices->u_of_s()[n];
  out.probabilistic = static_cast<double>(prob / 2 * std::exp(-static_cast<long double>(n) * log_rho));
  const double exact = out.u_of_s.get_d();
  if (std::fabs(out.probabilistic - exact) > 1e-6 * std::fabs(exact)) {
    throw StochasticsError("mixed_walk_identity_check: probabilistic form misses U(s) at n=" + std::to_string(n));
  }
  return out;
}

ExactDist<std::size_t> conditional_fixed_points(std::size_t n) {
  if (n < 1) throw StochasticsError("conditional_fixed_points: n must be >= 1");
  const auto slices = symmetry_slices(n);
  const Rational denom = slices->u_of_s()[n];
  ExactDist<std::size_t> law;
  law.exact = true;
  std::vector<Rational> sym(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    sym[k] = slices->sym_coefficient(k, n);
    law.support.push_back(k);
    law.probs.push_back(sym[k] / denom);
  }
  if (n <= CensusOptions{}.cap) {
    const SymTable census = symmetry_census(n);
    for (std::size_t k = 1; k <= n; ++k) {
      if (census.entries[k] != sym[k]) {
        throw StochasticsError("conditional_fixed_points: census disagrees with series at n=" + std::to_string(n) +
                               ", k=" + std::to_string(k));
      }
    }
  }
  if (law.total() != 1) throw StochasticsError("conditional_fixed_points: table does not sum to 1");
  return law;
}

namespace {

void check_tv_range(std::size_t n, std::size_t cap) {
  if (n < 1) throw StochasticsError("tv_exact: n must be >= 1");
  if (n > cap) {
    throw StochasticsError("tv_exact: n=" + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(cap));
  }
}

// orbit count -> number of free trees with it.
Rational tv_from_histogram(std::size_t n, const std::map<std::size_t, std::size_t>& histogram) {
  const BigInt a = rooted_counts_recurrence(n)[n];
  const BigInt f = free_counts_dissymmetry(n)[n];
  BigInt trees = 0, rootings = 0;
  Rational sum = 0;
  for (const auto& [orbits, count] : histogram) {
    trees += static_cast<unsigned long>(count);
    rootings += static_cast<unsigned long>(count) * BigInt(static_cast<unsigned long>(orbits));
    sum += abs(make_rational(BigInt(static_cast<unsigned long>(orbits)), a) - make_rational(1, f)) *
           static_cast<unsigned long>(count);
  }
  if (trees != f) throw StochasticsError("tv_exact: enumerated free trees differ from f_n at n=" + std::to_string(n));
  if (rootings != a) throw StochasticsError("tv_exact: orbit counts do not sum to a_n at n=" + std::to_string(n));
  return sum / 2;
}

}  // namespace

Rational tv_exact(std::size_t n, std::size_t cap) {
  check_tv_range(n, cap);
  std::vector<LevelSequence> sequences;
  TreeStream stream(n, StreamKind::free);
  while (stream.next()) sequences.push_back(stream.current());
  std::vector<std::size_t> orbits(sequences.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sequences.size()); ++i) {
    orbits[i] = orbit_count(canonicalize_free(adjacency_from_levels(sequences[i])));
  }
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t o : orbits) ++histogram[o];
  return tv_from_histogram(n, histogram);
}

namespace serial {

Rational tv_exact(std::size_t n, std::size_t cap) {
  check_tv_range(n, cap);
  std::map<std::size_t, std::size_t> histogram;
  TreeStream stream(n, StreamKind::free);
  while (stream.next()) ++histogram[orbit_count_by_rerooting(stream.current_free())];
  return tv_from_histogram(n, histogram);
}

}  // namespace serial

TvEstimate tv_monte_carlo(std::size_t n, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw StochasticsError("tv_monte_carlo: need at least 2 samples");
  constexpr std::size_t kBlock = 64;
  const Rational ratio = make_rational(free_counts_dissymmetry(n)[n], rooted_counts_recurrence(n)[n]);
  const SamplerContext base(seed, n);
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> values(samples);
  std::vector<std::size_t> rounds(blocks, 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    SamplerContext ctx = base.split(static_cast<std::uint64_t>(b));
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(samples, begin + kBlock);
    for (std::size_t i = begin; i < end; ++i) {
      const FreeSample s = sample_free_exact(ctx, n);
      rounds[b] += s.rounds;
      const Rational scaled = ratio * static_cast<unsigned long>(orbit_count(s.tree));
      values[i] = std::fabs(scaled.get_d() - 1.0) / 2;
    }
  }
  TvEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.rounds_total = std::accumulate(rounds.begin(), rounds.end(), std::size_t{0});
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(samples);
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples - 1);
  const double half = 1.959963984540054 * std::sqrt(var / static_cast<double>(samples));
  est.tv = mean;
  est.ci_low = std::max(0.0, mean - half);
  est.ci_high = std::min(1.0, mean + half);
  return est;
}

namespace {

struct CumulantData {
  double c = 0.0;
  double delta = 0.0;
};

CumulantData cumulant_constant() {
  const StepDistribution step = step_law(200);
  // Least-squares slope of log pmf over the upper half of the support.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t m = step.pmf.size() / 2; m < step.pmf.size(); ++m) {
    if (step.pmf[m] <= 0) continue;
    const double x = static_cast<double>(m), y = std::log(step.pmf[m]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw StochasticsError("appendix_lemma_check: not enough pmf terms to fit decay");
  const double slope = (static_cast<double>(count) * sxy - sx * sy) / (static_cast<double>(count) * sxx - sx * sx);
  CumulantData out;
  out.delta = -slope / 2;
  if (!(out.delta > 0)) throw StochasticsError("appendix_lemma_check: pmf does not decay geometrically");
  constexpr int kGrid = 200;
  for (int g = 0; g <= kGrid; ++g) {
    const double lambda = out.delta * (2.0 * g / kGrid - 1.0);
    long double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t m = 1; m < step.pmf.size(); ++m) {
      const long double w = step.pmf[m] * std::exp(static_cast<long double>(lambda) * m);
      m0 += w;
      m1 += w * m;
      m2 += w * m * m;
    }
    const double k2 = static_cast<double>(m2 / m0 - (m1 / m0) * (m1 / m0));
    out.c = std::max(out.c, k2);
  }
  return out;
}

}  // namespace

AppendixCheck appendix_lemma_check(std::size_t k, double x) {
  if (k < 1 || !(x > 0)) throw StochasticsError("appendix_lemma_check: need k >= 1 and x > 0");
  static std::once_flag once;
  static CumulantData cumulant;
  std::call_once(once, [] { cumulant = cumulant_constant(); });

  const double mean = default_constants().mean_x;
  const double center = static_cast<double>(k) * mean;
  const auto top = static_cast<std::size_t>(std::ceil(center + x)) + 1;
  const RealDist<std::size_t> law = walk_law(k, top);
  long double inside = 0;
  for (std::size_t n = 0; n <= top; ++n) {
    if (std::fabs(static_cast<double>(n) - center) < x) inside += law.probs[n];
  }
  AppendixCheck out;
  out.k = k;
  out.x = x;
  out.c = cumulant.c;
  out.delta = cumulant.delta;
  out.tail = std::max(0.0, static_cast<double>(1 - inside));
  out.bound = std::numeric_limits<double>::infinity();
  const double ck = cumulant.c * static_cast<double>(k);
  const double optimum = std::clamp(x / (2 * ck), 0.0, cumulant.delta);
  auto bound_at = [&](double lambda) { return 2 * std::exp(ck * lambda * lambda - lambda * x); };
  constexpr int kSweep = 400;
  for (int g = 0; g <= kSweep; ++g) {
    const double lambda = cumulant.delta * g / kSweep;
    if (bound_at(lambda) < out.bound) {
      out.bound = bound_at(lambda);
      out.best_lambda = lambda;
    }
  }
  if (bound_at(optimum) < out.bound) {
    out.bound = bound_at(optimum);
    out.best_lambda = optimum;
  }
  out.holds = out.tail <= out.bound;
  return out;
}

ConcentrationReport concentration_check(std::size_t n, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw StochasticsError("concentration_check: alpha must lie in (0.5, 1)");
  if (n < 1) throw StochasticsError("concentration_check: n must be >= 1");
  const double mean = default_constants().mean_x;
  ConcentrationReport r;
  r.n = n;
  r.alpha = alpha;
  r.center = static_cast<double>(n) / mean;
  r.radius = std::pow(static_cast<double>(n), alpha);
  const auto law = conditional_fixed_points(n);
  Rational tail = 0;
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    if (std::fabs(static_cast<double>(law.support[i]) - r.center) >= r.radius) tail += law.probs[i];
  }
  r.tail_mass = tail.get_d();
  const double scale = std::pow(static_cast<double>(n), 2 * alpha - 1);
  r.bound_exponent = r.tail_mass > 0 ? -std::log(r.tail_mass) / scale : std::numeric_limits<double>::infinity();
  r.appendix = appendix_lemma_check(static_cast<std::size_t>(std::llround(r.center)), r.radius);
  return r;
}

}  // namespace otter
