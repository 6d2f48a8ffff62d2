#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "otter/asymptotics.hpp"
#include "otter/counting.hpp"
#include "otter/stochastics.hpp"

using namespace otter;

TEST_CASE("step law is a probability law with mean E[X]") {
  const StepDistribution law = step_law(200);
  double total = 0.0;
  for (double p : law.pmf) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(law.mean == doctest::Approx(constants(400).mean_x).epsilon(1e-8));
  CHECK(law.pmf[0] == 0.0);
}

TEST_CASE("root count laws: Borel-type masses, totals and means") {
  const RootCountLaw n(RootCountKind::n), tilde(RootCountKind::n_tilde);
  CHECK(n.total() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tilde.total() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(n.mean() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(n.pmf(1) == doctest::Approx(2.0 * std::exp(1.0) * std::exp(-1.0) * std::exp(-1.0) * 1.0).epsilon(1e-12));
  CHECK(tilde.pmf(2) == doctest::Approx(2.0 * std::exp(-2.0) / 2.0).epsilon(1e-12));
  CHECK_THROWS(tilde.mean());
}

TEST_CASE("exact TV distance equals the brute-force oracle for n <= 10") {
  for (std::size_t n = 1; n <= 10; ++n) {
    CAPTURE(n);
    CHECK(tv_exact(n) == oracle::tv(n));
  }
  CHECK(tv_exact(3) == 0);
  CHECK(tv_exact(4) == 0);
  CHECK(tv_exact(5) == make_rational(1, 9));
}

TEST_CASE("parallel TV equals the re-rooting reference") {
  for (std::size_t n = 3; n <= 13; ++n) CHECK(tv_exact(n) == serial::tv_exact(n));
  CHECK_THROWS(tv_exact(kTvExactCap + 1));
}

TEST_CASE("Monte Carlo TV interval covers the exact value") {
  const TvEstimate est = tv_monte_carlo(12, 6000, 2024);
  const double exact = tv_exact(12).get_d();
  CHECK(est.ci_low <= exact);
  CHECK(exact <= est.ci_high);
  CHECK(est.samples == 6000);
  const TvEstimate again = tv_monte_carlo(12, 6000, 2024);
  CHECK(again.tv == est.tv);
}

TEST_CASE("total_variation on maps") {
  std::map<int, Rational> p{{1, make_rational(1, 2)}, {2, make_rational(1, 2)}};
  std::map<int, Rational> q{{2, make_rational(1, 4)}, {3, make_rational(3, 4)}};
  CHECK(total_variation(p, q) == make_rational(3, 4));
  CHECK(total_variation(p, p) == 0);
}

TEST_CASE("walk law: S_1 is X and S_k sums to at most one") {
  const StepDistribution step = step_law(200);
  const auto w1 = walk_law(1, 60);
  for (std::size_t m = 0; m < w1.support.size(); ++m) {
    CHECK(w1.probs[m] == doctest::Approx(step.pmf[w1.support[m]]).epsilon(1e-9));
  }
  const auto w5 = walk_law(5, 200);
  CHECK(w5.total() <= 1.0 + 1e-12);
  CHECK(w5.total() > 0.99);
}

TEST_CASE("mixed walk identity") {
  for (std::size_t n : {5, 20, 60}) {
    const MixedWalkIdentity r = mixed_walk_identity_check(n);
    CHECK(r.f_minus_sym0 == r.u_of_s);
    CHECK(r.probabilistic == doctest::Approx(r.u_of_s.get_d()).epsilon(1e-6));
  }
}

TEST_CASE("conditional fixed-point law") {
  const auto two = conditional_fixed_points(2);
  REQUIRE(two.support.size() >= 1);
  for (std::size_t i = 0; i < two.support.size(); ++i) {
    CHECK(two.probs[i] == (two.support[i] == 2 ? Rational(1) : Rational(0)));
  }
  for (std::size_t n : {6, 12, 40}) {
    const auto law = conditional_fixed_points(n);
    CHECK(law.exact);
    CHECK(law.total() == 1);
  }
}

TEST_CASE("conditional law from the brute-force census for n <= 8") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto census = oracle::sym_census(n);
    mpq_class positive = 0;
    for (std::size_t k = 1; k <= n; ++k) positive += census[k];
    const auto law = conditional_fixed_points(n);
    for (std::size_t i = 0; i < law.support.size(); ++i) CHECK(law.probs[i] == census[law.support[i]] / positive);
  }
}

TEST_CASE("cumulant tail bound holds on a grid and concentration is tight at n = 200") {
  for (std::size_t k : {20, 60, 150}) {
    for (double x : {5.0, 15.0, 30.0}) {
      const AppendixCheck c = appendix_lemma_check(k, x);
      CAPTURE(k);
      CAPTURE(x);
      CHECK(c.holds);
      CHECK(c.tail <= c.bound);
      CHECK(c.c > 0.0);
      CHECK(c.delta > 0.0);
    }
  }
  const ConcentrationReport r = concentration_check(200, 0.75);
  CHECK(r.tail_mass < 1e-3);
  CHECK(r.appendix.holds);
}
