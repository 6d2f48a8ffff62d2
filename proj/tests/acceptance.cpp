// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "otter/asymptotics.hpp"
#include "otter/counting.hpp"
#include "otter/degree.hpp"
#include "otter/enumerate.hpp"
#include "otter/sample.hpp"
#include "otter/stochastics.hpp"
#include "otter/verify.hpp"

using namespace otter;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

std::string str(const Rational& q) { return q.get_str(); }

void constants_check(Outcome& out, const Thresholds&) {
  const Constants c = constants(400);
  out.require(std::abs(c.rho - 0.338321) < 1e-5, "|rho - 0.338321| < 1e-5");
  out.require(std::abs(c.c_a - 0.439924) < 1e-5, "|c_A - 0.439924| < 1e-5");
  out.require(std::abs(c.c_f - 2 * std::numbers::pi * std::pow(c.c_a, 3)) < 1e-12, "c_F = 2 pi c_A^3 to 1e-12");
  out.require(std::abs(c.c_f - 0.53495) < 1e-5, "c_F near 0.53495");
  out.detail.precision(12);
  out.detail << "rho=" << c.rho << " c_A=" << c.c_a << " c_F=" << c.c_f;
}

void oracle_equivalence(Outcome& out, const Thresholds&) {
  const CountTable a = rooted_counts(16);
  const CountTable f = free_counts_dissymmetry(18);
  for (std::size_t n = 1; n <= 16; ++n) {
    out.require(a[n] == count_stream(n, StreamKind::rooted), "a_n = #rooted stream at n=" + std::to_string(n));
  }
  for (std::size_t n = 1; n <= 18; ++n) {
    out.require(f[n] == count_stream(n, StreamKind::free), "f_n = #free stream at n=" + std::to_string(n));
  }
  out.detail << "a_16=" << a[16].get_str() << " f_18=" << f[18].get_str();
}

void dissymmetry_vs_symmetry(Outcome& out, const Thresholds&) {
  const std::size_t n_max = 200;
  const CountTable dis = free_counts_dissymmetry(n_max);
  const SymmetryRoute route = free_counts_symmetry(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const Rational sum = route.sym0[n] + route.u_of_s[n];
    out.require(sum == Rational(dis[n]), "[z^n](Sym_0 + U(s)) = f_n at n=" + std::to_string(n));
  }
  out.detail << "n<=200, f_200 has " << dis[n_max].get_str().size() << " digits";
}

void symmetry_census_check(Outcome& out, const Thresholds&) {
  const auto slices = symmetry_slices(200);
  const SymmetryRoute route = free_counts_symmetry(200);
  const CountTable f = free_counts_dissymmetry(200);
  for (std::size_t n = 1; n <= 12; ++n) {
    const SymTable census = symmetry_census(n);
    for (std::size_t k = 1; k <= n; ++k) {
      out.require(census.entries[k] == slices->sym_coefficient(k, n),
                  "census Sym_" + std::to_string(k) + " at n=" + std::to_string(n));
    }
    out.require(census.total() == Rational(f[n]), "sum_k Sym_k = f_n at n=" + std::to_string(n));
    out.require(census.entries[0] == route.sym0[n], "census Sym_0 = F - U(s) at n=" + std::to_string(n));
  }
  const ExactSeries a2 = substitute_power(rooted_series(200), 2);
  for (std::size_t n = 1; n <= 200; ++n) {
    out.require(sgn(route.sym0[n]) >= 0 && route.sym0[n] <= a2[n], "0 <= Sym_0 <= A(z^2) at n=" + std::to_string(n));
  }
  out.detail << "census n<=12, bound n<=200";
}

void tv_curve(Outcome& out, const Thresholds& th) {
  std::map<std::size_t, Rational> tv;
  for (std::size_t n = 3; n <= 18; ++n) tv[n] = tv_exact(n);
  out.require(tv[3] == 0 && tv[4] == 0, "d_TV(3) = d_TV(4) = 0");
  out.require(tv[5] == make_rational(1, 9), "d_TV(5) = 1/9");
  out.require(tv[16] < tv[8], "d_TV(16) < d_TV(8)");
  out.require(tv[8] < tv[5], "d_TV(8) < d_TV(5)");
  for (const auto& [n, value] : tv) {
    const auto it = th.tv_profile.find(n);
    out.require(it != th.tv_profile.end() && it->second == value, "fixture profile at n=" + std::to_string(n));
  }
  out.detail << "d_TV(5)=" << str(tv[5]) << " d_TV(8)=" << str(tv[8]) << " d_TV(16)=" << str(tv[16]) << " ~"
             << tv[16].get_d();
}

void asymptotic_ratios(Outcome& out, const Thresholds& th) {
  const Constants c = constants(400);
  out.detail.precision(3);
  for (TreeKind kind : {TreeKind::rooted, TreeKind::free}) {
    const char* name = kind == TreeKind::rooted ? "rooted" : "free";
    double prev = INFINITY;
    out.detail << name << ":";
    for (std::size_t n : {50, 100, 200, 400}) {
      const double err = std::abs(asymptotic_ratio(n, kind, c) - 1.0);
      out.require(err < prev, std::string(name) + " |ratio-1| decreasing at n=" + std::to_string(n));
      prev = err;
      out.detail << " " << err;
    }
    out.detail << "; ";
    const double bound = kind == TreeKind::rooted ? th.rooted_ratio_400 : th.free_ratio_400;
    out.require(prev < bound, std::string(name) + " |ratio(400)-1| below fixture");
  }
}

void second_order(Outcome& out, const Thresholds& th) {
  const Constants c = constants(400);
  double worst = 0.0;
  std::size_t at = 0;
  for (std::size_t n = 1; n <= 400; ++n) {
    const double r = std::abs(second_order_ratio(n, c));
    if (r > worst) {
      worst = r;
      at = n;
    }
  }
  out.require(worst <= th.second_order_bound, "max |a_n/f_n - n/E[X]| <= fixture");
  out.detail << "max=" << worst << " at n=" << at << " bound=" << th.second_order_bound;
}

void sampler_uniformity(Outcome& out, const Thresholds& th) {
  const std::size_t draws = 100000;
  SamplerContext ctx(20260101, 100);
  {
    const auto support = gen_rooted(8);
    std::map<RootedTree, std::size_t> hits;
    for (std::size_t i = 0; i < draws; ++i) ++hits[sample_rooted(ctx, 8)];
    std::vector<std::size_t> counts;
    for (const auto& t : support) counts.push_back(hits.count(t) ? hits[t] : 0);
    const ChiSquare chi = chi_square_uniform(counts);
    out.require(support.size() == 115 && hits.size() == 115, "115 rooted trees observed");
    out.require(chi.p_value > th.chi_square_significance, "rooted chi-square p > 0.001");
    out.detail << "rooted p=" << chi.p_value << "; ";
  }
  {
    const auto support = gen_free(8);
    std::map<FreeTree, std::size_t> hits;
    for (std::size_t i = 0; i < draws; ++i) ++hits[sample_free_exact(ctx, 8).tree];
    std::vector<std::size_t> counts;
    for (const auto& t : support) counts.push_back(hits.count(t) ? hits[t] : 0);
    const ChiSquare chi = chi_square_uniform(counts);
    out.require(support.size() == 23 && hits.size() == 23, "23 free trees observed");
    out.require(chi.p_value > th.chi_square_significance, "free chi-square p > 0.001");
    out.detail << "free p=" << chi.p_value << "; ";
  }
  {
    const std::size_t runs = 10000;
    std::size_t rounds = 0;
    for (std::size_t i = 0; i < runs; ++i) rounds += sample_free_exact(ctx, 100).rounds;
    const double mean = static_cast<double>(rounds) / runs;
    const double expected = make_rational(rooted_counts(100)[100], free_counts_dissymmetry(100)[100]).get_d();
    out.require(std::abs(mean / expected - 1.0) < th.rejection_tolerance, "rejection mean within 10% of a_100/f_100");
    out.detail << "rounds mean=" << mean << " a/f=" << expected;
  }
}

void concentration(Outcome& out, const Thresholds& th) {
  const ConcentrationReport r = concentration_check(200, 0.75);
  out.require(r.tail_mass < th.concentration_tail_200, "tail mass at n=200 below fixture");
  out.detail << "tail=" << r.tail_mass << "; ";
  std::size_t points = 0;
  for (std::size_t k : {25, 50, 100, 165, 200}) {
    for (double frac : {0.5, 0.75, 0.9}) {
      const double x = std::pow(static_cast<double>(k), frac);
      const AppendixCheck a = appendix_lemma_check(k, x);
      out.require(a.holds && a.tail <= a.bound,
                  "S_k tail bound at k=" + std::to_string(k) + " x=" + std::to_string(x));
      ++points;
    }
  }
  out.require(r.appendix.holds, "S_k tail bound at k=n/E[X], x=n^0.75");
  out.detail << "tail bound c=" << r.appendix.c << " delta=" << r.appendix.delta << " on " << points + 1 << " points";
}

void degree_restricted(Outcome& out, const Thresholds& th) {
  const DegreeSet d = DegreeSet::parse("1,3");
  const ExactSeries free = restricted_free_series(d, 16);
  const ExactSeries rooted = restricted_rooted_series(d, 16);
  for (std::size_t n = 1; n <= 16; ++n) {
    out.require(free[n] == count_stream(n, StreamKind::free, &d), "restricted free count at n=" + std::to_string(n));
    out.require(rooted[n] == count_stream(n, StreamKind::rooted, &d),
                "restricted rooted count at n=" + std::to_string(n));
  }
  std::map<std::size_t, Rational> tv;
  for (std::size_t n = 2; n <= kRestrictedTvCap; n += 2) {
    if (!admissible(n, RestrictedKind::free, d)) continue;
    tv[n] = tv_exact_restricted(d, n);
    const auto it = th.restricted_tv_profile.find(n);
    out.require(it != th.restricted_tv_profile.end() && it->second == tv[n],
                "restricted fixture profile at n=" + std::to_string(n));
  }
  auto block_max = [&](std::size_t lo, std::size_t hi) {
    Rational m = 0;
    for (const auto& [n, v] : tv) {
      if (n >= lo && n <= hi && v > m) m = v;
    }
    return m;
  };
  const Rational b1 = block_max(10, 18), b2 = block_max(20, 28), b3 = block_max(30, 40);
  out.require(b1 > b2 && b2 > b3, "block maxima of d_TV strictly decrease");
  out.detail << "block maxima " << b1.get_d() << " > " << b2.get_d() << " > " << b3.get_d() << "; ";
  for (std::size_t n : {9, 15, 31, 61}) {
    const NegativeControlReport r = negative_control(d, n);
    out.require(sgn(r.forbidden_mass) > 0, "forbidden root mass > 0 at n=" + std::to_string(n));
    if (n == 61) out.detail << "forbidden mass(61)=" << r.forbidden_mass.get_d();
  }
}

}  // namespace

int main() {
  const Thresholds th = load_thresholds(default_thresholds_path());
  const std::vector<std::pair<std::string, std::function<void(Outcome&, const Thresholds&)>>> criteria = {
      {"constants", constants_check},
      {"oracle equivalence", oracle_equivalence},
      {"dissymmetry vs symmetry route", dissymmetry_vs_symmetry},
      {"symmetry census", symmetry_census_check},
      {"TV curve", tv_curve},
      {"asymptotic ratios", asymptotic_ratios},
      {"second-order ratio", second_order},
      {"sampler uniformity", sampler_uniformity},
      {"fixed-point concentration", concentration},
      {"degree-restricted", degree_restricted},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out, th);
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !out.passed;
    std::printf("%s criterion %zu (%s): %s (%.1fs)\n", out.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
