#include "otter/verify.hpp"

#include <json.hpp>

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "otter/asymptotics.hpp"
#include "otter/counting.hpp"
#include "otter/degree.hpp"
#include "otter/enumerate.hpp"
#include "otter/sample.hpp"
#include "otter/stochastics.hpp"
#include "otter/tree.hpp"

namespace otter {

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& what) {
  if (!condition) throw CheckFailure(what);
}

std::string str(std::size_t n) { return std::to_string(n); }

Rational parse_rational(const std::string& text) {
  Rational q(text);
  q.canonicalize();
  return q;
}

std::map<std::size_t, Rational> read_profile(const nlohmann::json& j) {
  std::map<std::size_t, Rational> out;
  for (const auto& [key, value] : j.items()) out[std::stoul(key)] = parse_rational(value.get<std::string>());
  return out;
}

}  // namespace

std::string default_thresholds_path() { return std::string(OTTER_FIXTURES_DIR) + "/thresholds.json"; }

Thresholds load_thresholds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open thresholds file " + path);
  nlohmann::json j;
  try {
    in >> j;
    Thresholds t;
    t.rho_reference = j.at("rho_reference").get<double>();
    t.c_a_reference = j.at("c_a_reference").get<double>();
    t.c_f_reference = j.at("c_f_reference").get<double>();
    t.constant_tolerance = j.at("constant_tolerance").get<double>();
    t.rooted_ratio_400 = j.at("rooted_ratio_400").get<double>();
    t.free_ratio_400 = j.at("free_ratio_400").get<double>();
    t.second_order_bound = j.at("second_order_bound").get<double>();
    t.tv_profile = read_profile(j.at("tv_profile"));
    t.restricted_tv_profile = read_profile(j.at("restricted_tv_profile_1_3"));
    t.concentration_tail_200 = j.at("concentration_tail_200").get<double>();
    t.chi_square_significance = j.at("chi_square_significance").get<double>();
    t.rejection_tolerance = j.at("rejection_tolerance").get<double>();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed thresholds file " + path + ": " + e.what());
  }
}

bool VerifyReport::ok() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

ChiSquare chi_square_uniform(const std::vector<std::size_t>& observed) {
  ChiSquare out;
  if (observed.size() < 2) throw std::invalid_argument("chi_square_uniform: need at least 2 cells");
  double total = 0;
  for (auto o : observed) total += static_cast<double>(o);
  const double expected = total / static_cast<double>(observed.size());
  for (auto o : observed) {
    const double d = static_cast<double>(o) - expected;
    out.statistic += d * d / expected;
  }
  out.degrees_of_freedom = observed.size() - 1;
  const boost::math::chi_squared dist(static_cast<double>(out.degrees_of_freedom));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

namespace {

struct Sizes {
  std::size_t series_order, rooted_enum, free_enum, routes, fixpoly, orbits, census, mixed, tv, restricted_rooted,
      restricted_free, restricted_tv, concentration_n;
  std::size_t chi_draws, rejection_n, rejection_runs;
};

Sizes sizes_for(VerifyLevel level) {
  if (level == VerifyLevel::quick) return {100, 12, 14, 100, 7, 10, 10, 60, 12, 12, 12, 24, 100, 20000, 50, 2000};
  return {400, 16, 18, 200, 9, 12, 12, 200, 18, 14, 16, 40, 200, 100000, 100, 10000};
}

using Check = std::pair<std::string, std::function<void()>>;

std::vector<Check> build_checks(VerifyLevel level, const Thresholds& t) {
  const Sizes z = sizes_for(level);
  std::vector<Check> checks;

  checks.emplace_back("series.exp_inverse", [] {
    const auto x = add(ExactSeries::monomial(30, 1), ExactSeries::monomial(30, 3, Rational(2, 7)));
    const auto prod = mul(exp_series(x), exp_series(scale(x, -1)));
    expect(prod == ExactSeries::monomial(30, 0), "exp(x) exp(-x) != 1");
  });

  checks.emplace_back("counting.rooted_series_vs_recurrence", [z] {
    const auto series = rooted_counts(z.series_order);
    const auto rec = rooted_counts_recurrence(z.series_order);
    for (std::size_t n = 1; n <= z.series_order; ++n) {
      expect(series[n] == rec[n], "a_n differs between series and recurrence at n=" + str(n));
    }
  });

  checks.emplace_back("counting.dissymmetry_vs_symmetry_route", [z] {
    const auto route = free_counts_symmetry(z.routes);
    const auto dis = free_counts_dissymmetry(z.routes);
    for (std::size_t n = 1; n <= z.routes; ++n) {
      expect(route.free[n] == dis[n], "F != Sym_0 + U(s) at n=" + str(n));
    }
  });

  checks.emplace_back("counting.rooted_vs_enumeration", [z] {
    const auto a = rooted_counts(z.rooted_enum);
    for (std::size_t n = 1; n <= z.rooted_enum; ++n) {
      expect(a[n] == static_cast<unsigned long>(count_stream(n, StreamKind::rooted)),
             "a_n differs from enumeration at n=" + str(n));
    }
  });

  checks.emplace_back("counting.free_vs_enumeration", [z] {
    const auto f = free_counts_dissymmetry(z.free_enum);
    for (std::size_t n = 1; n <= z.free_enum; ++n) {
      expect(f[n] == static_cast<unsigned long>(count_stream(n, StreamKind::free)),
             "f_n differs from enumeration at n=" + str(n));
    }
  });

  checks.emplace_back("counting.labelled_tree_function", [] {
    const auto tz = labelled_rooted_egf(40);
    expect(tz == shift(exp_series(tz), 1), "T != z exp(T)");
    const auto u = labelled_unrooted_egf(40);
    expect(u == sub(tz, scale(mul(tz, tz), Rational(1, 2))), "U != T - T^2/2");
  });

  checks.emplace_back("counting.symmetry_slices_vs_serial", [] {
    for (std::size_t k = 1; k <= 5; ++k) {
      expect(sym_k_series(k, 40) == serial::sym_k_series(k, 40), "Sym_k kernel differs at k=" + str(k));
    }
  });

  checks.emplace_back("asymptotics.constants", [t] {
    const Constants c = constants(400);
    expect(std::fabs(c.rho - t.rho_reference) <= t.constant_tolerance, "rho off reference");
    expect(std::fabs(c.c_a - t.c_a_reference) <= t.constant_tolerance, "c_A off reference");
    expect(std::fabs(c.c_f - t.c_f_reference) <= t.constant_tolerance, "c_F off reference");
    expect(std::fabs(c.c_f - 2 * M_PI * c.c_a * c.c_a * c.c_a) <= 1e-12, "c_F != 2 pi c_A^3");
  });

  checks.emplace_back("asymptotics.ratio_trend", [z, t] {
    const Constants c = constants(400);
    const std::vector<std::size_t> grid = z.series_order >= 400 ? std::vector<std::size_t>{50, 100, 200, 400}
                                                                : std::vector<std::size_t>{25, 50, 100};
    for (TreeKind kind : {TreeKind::rooted, TreeKind::free}) {
      double previous = 1e300;
      for (std::size_t n : grid) {
        const double dev = std::fabs(asymptotic_ratio(n, kind, c) - 1);
        expect(dev < previous, "asymptotic ratio not approaching 1 at n=" + str(n));
        previous = dev;
      }
      if (grid.back() == 400) {
        const double cap = kind == TreeKind::rooted ? t.rooted_ratio_400 : t.free_ratio_400;
        expect(previous <= cap, "|ratio - 1| at n=400 above the fixture threshold");
      }
    }
  });

  checks.emplace_back("asymptotics.second_order", [z, t] {
    const Constants c = constants(400);
    for (std::size_t n = 1; n <= z.series_order; ++n) {
      expect(std::fabs(second_order_ratio(n, c)) <= t.second_order_bound,
             "|a_n/f_n - n/E[X]| above the fixture bound at n=" + str(n));
    }
  });

  checks.emplace_back("tree.fix_polynomial_vs_brute_force", [z] {
    for (std::size_t n = 1; n <= z.fixpoly; ++n) {
      for (const auto& tree : gen_free(n)) {
        const auto p = fix_polynomial(tree);
        expect(p == serial::fix_polynomial_brute_force(tree), "fixed-point polynomial wrong for " + tree.to_string());
        expect(p.total() == aut_size(tree), "sum of fixed-point polynomial != |Aut| for " + tree.to_string());
      }
    }
  });

  checks.emplace_back("tree.orbit_counts", [z] {
    for (std::size_t n = 1; n <= z.orbits; ++n) {
      BigInt sum = 0;
      for (const auto& tree : gen_free(n)) {
        const auto o = orbit_count(tree);
        expect(o == serial::orbit_count_by_rerooting(tree), "orbit count wrong for " + tree.to_string());
        expect(o >= 1 && o <= n, "orbit count outside [1, n]");
        sum += static_cast<unsigned long>(o);
      }
      expect(sum == rooted_counts(n)[n], "orbit counts do not sum to a_n at n=" + str(n));
    }
  });

  checks.emplace_back("enumerate.census_vs_series", [z] {
    for (std::size_t n = 1; n <= z.census; ++n) {
      const SymTable census = symmetry_census(n);
      const SymTable series = sym_table(n);
      expect(census.entries == series.entries, "census differs from series at n=" + str(n));
      expect(census.total() == Rational(free_counts_dissymmetry(n)[n]), "census total != f_n at n=" + str(n));
    }
  });

  checks.emplace_back("sample.uniformity", [z, t] {
    const std::size_t n = z.chi_draws >= 100000 ? 8 : 6;
    std::map<std::string, std::size_t> index;
    for (const auto& tree : gen_free(n)) index.emplace(tree.to_string(), index.size());
    std::vector<std::size_t> counts(index.size(), 0);
    SamplerContext ctx(20240611, n);
    for (std::size_t i = 0; i < z.chi_draws; ++i) ++counts.at(index.at(sample_free_exact(ctx, n).tree.to_string()));
    const auto chi = chi_square_uniform(counts);
    expect(chi.p_value > t.chi_square_significance, "free sampler fails chi-square at n=" + str(n));
  });

  checks.emplace_back("sample.rejection_rounds", [z, t] {
    const std::size_t n = z.rejection_n;
    SamplerContext ctx(7, n);
    std::size_t rounds = 0;
    for (std::size_t i = 0; i < z.rejection_runs; ++i) rounds += sample_free_exact(ctx, n).rounds;
    const double mean = static_cast<double>(rounds) / static_cast<double>(z.rejection_runs);
    const double exact = make_rational(rooted_counts(n)[n], free_counts_dissymmetry(n)[n]).get_d();
    expect(std::fabs(mean / exact - 1) <= t.rejection_tolerance, "mean rejection rounds far from a_n/f_n");
  });

  checks.emplace_back("stochastics.step_law", [] {
    const auto step = step_law(200);
    expect(step.pmf[2] == 0.0, "P(X = 2) != 0");
    expect(std::fabs(step.pmf[1] - std::exp(1.0) * step.rho) < 1e-12, "P(X = 1) != e rho");
  });

  checks.emplace_back("stochastics.root_count_laws", [] {
    const RootCountLaw n(RootCountKind::n), nt(RootCountKind::n_tilde);
    expect(std::fabs(n.total() - 1) <= 1e-10, "sum P(N = k) != 1");
    expect(std::fabs(nt.total() - 1) <= 1e-10, "sum P(N~ = k) != 1");
    expect(std::fabs(n.mean() - 2) <= 1e-8, "E[N] != 2");
  });

  checks.emplace_back("stochastics.mixed_walk_identity", [z] {
    for (std::size_t n = 1; n <= z.mixed; ++n) {
      const auto r = mixed_walk_identity_check(n);
      expect(r.f_minus_sym0 == r.u_of_s, "F - Sym_0 != U(s) at n=" + str(n));
    }
  });

  checks.emplace_back("stochastics.tv_profile", [z, t] {
    expect(tv_exact(3) == 0 && tv_exact(4) == 0, "d_TV(3) or d_TV(4) nonzero");
    expect(tv_exact(5) == Rational(1, 9), "d_TV(5) != 1/9");
    for (std::size_t n = 3; n <= z.tv; ++n) {
      const Rational tv = tv_exact(n);
      const Rational crude = 1 - make_rational(free_counts_dissymmetry(n)[n], rooted_counts(n)[n]);
      expect(sgn(tv) >= 0 && tv <= crude, "d_TV outside [0, 1 - f_n/a_n] at n=" + str(n));
      const auto it = t.tv_profile.find(n);
      if (it != t.tv_profile.end()) expect(tv == it->second, "d_TV differs from the fixture at n=" + str(n));
    }
    if (z.tv >= 16) expect(tv_exact(16) < tv_exact(8) && tv_exact(8) < tv_exact(5), "d_TV(16) < d_TV(8) < d_TV(5) fails");
  });

  checks.emplace_back("stochastics.concentration", [z, t] {
    const auto r = concentration_check(z.concentration_n, 0.75);
    if (z.concentration_n == 200) expect(r.tail_mass < t.concentration_tail_200, "conditional tail mass too large");
    expect(r.appendix.holds, "tail bound 2 exp(c k l^2 - l x) fails for the exact S_k law");
    const auto loose = concentration_check(z.concentration_n, 0.6);
    expect(r.tail_mass <= loose.tail_mass, "tail mass increases with alpha");
  });

  checks.emplace_back("degree.restricted_vs_enumeration", [z] {
    for (const char* text : {"1,3", "1,2,4", "1,2,3"}) {
      const DegreeSet d = DegreeSet::parse(text);
      const auto a = restricted_rooted_series(d, z.restricted_rooted);
      for (std::size_t n = 1; n <= z.restricted_rooted; ++n) {
        expect(a[n] == static_cast<unsigned long>(count_stream(n, StreamKind::rooted, &d)),
               std::string("restricted rooted count differs for ") + text + " at n=" + str(n));
      }
      restricted_free_counts(d, z.restricted_free, RestrictedFreeOptions{z.restricted_free});
    }
  });

  checks.emplace_back("degree.congruences", [] {
    for (const char* text : {"1,3", "1,4", "1,2,4"}) {
      const DegreeSet d = DegreeSet::parse(text);
      const auto g = static_cast<std::size_t>(d.gcd_star());
      const auto a = restricted_rooted_series(d, 40);
      const auto tl = tilde_series(d, 40);
      const auto f = restricted_free_series(d, 40);
      for (std::size_t n = 2; n <= 40; ++n) {
        if ((n - 1) % g != 0) expect(sgn(a[n]) == 0, "rooted coefficient violates congruence");
        if ((n - 2) % g != 0) expect(sgn(tl[n]) == 0 && sgn(f[n]) == 0, "tilde/free coefficient violates congruence");
      }
    }
  });

  checks.emplace_back("degree.tv_profile", [z, t] {
    const DegreeSet d = DegreeSet::parse("1,3");
    std::map<std::size_t, Rational> block_max;
    for (std::size_t n = 2; n <= z.restricted_tv; ++n) {
      if (!admissible(n, RestrictedKind::free, d)) continue;
      const Rational tv = tv_exact_restricted(d, n);
      const auto it = t.restricted_tv_profile.find(n);
      if (it != t.restricted_tv_profile.end()) expect(tv == it->second, "restricted d_TV differs at n=" + str(n));
      if (n >= 10) {
        auto& m = block_max[std::min<std::size_t>((n - 10) / 10, 2)];
        m = std::max(m, tv);
      }
    }
    if (z.restricted_tv >= 40) {
      expect(block_max[2] < block_max[1] && block_max[1] < block_max[0],
             "restricted d_TV block maxima over [10,18], [20,28], [30,40] not decreasing");
    }
  });

  checks.emplace_back("degree.negative_control", [] {
    const auto r13 = negative_control(DegreeSet::parse("1,3"), 9);
    expect(r13.forbidden_mass == 1, "Omega={1,3}: forbidden root mass != 1");
    const auto r124 = negative_control(DegreeSet::parse("1,2,4"), 9);
    expect(sgn(r124.forbidden_mass) > 0, "Omega={1,2,4}: no forbidden root mass");
  });

  return checks;
}

}  // namespace

VerifyReport run_verify(VerifyLevel level, const Thresholds& thresholds,
                        const std::function<void(const CheckResult&)>& on_check) {
  VerifyReport report;
  for (auto& [name, fn] : build_checks(level, thresholds)) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
      r.passed = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_check) on_check(r);
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace otter
