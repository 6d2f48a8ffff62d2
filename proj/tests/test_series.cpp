#include <random>
#include <sstream>

#include "doctest.h"
#include "oracle.hpp"
#include "otter/counting.hpp"
#include "otter/series.hpp"

using namespace otter;

namespace {

ExactSeries random_series(std::mt19937_64& rng, std::size_t order, bool zero_constant) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
  std::vector<Rational> c(order + 1);
  for (auto& x : c) x = make_rational(num(rng), den(rng));
  if (zero_constant) c[0] = 0;
  return ExactSeries(order, std::move(c));
}

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("make_rational reduces and rejects zero denominators") {
  const Rational q = make_rational(6, -4);
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 2);
  CHECK_THROWS_AS(make_rational(1, 0), SeriesError);
}

TEST_CASE("parallel product equals the serial product") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t order = 1 + rng() % 40;
    const auto a = random_series(rng, order, false);
    const auto b = random_series(rng, order + rng() % 5, false);
    CHECK(mul(a, b) == serial::mul(a, b));
  }
}

TEST_CASE("product is commutative and distributes over addition") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_series(rng, 25, false), b = random_series(rng, 25, false), c = random_series(rng, 25, false);
    CHECK(mul(a, b) == mul(b, a));
    CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
  }
}

TEST_CASE("exp of z gives 1/k!") {
  const auto e = exp_series(ExactSeries::monomial(15, 1));
  for (unsigned k = 0; k <= 15; ++k) CHECK(e[k] == make_rational(1, factorial(k)));
  CHECK_THROWS_AS(exp_series(ExactSeries::monomial(5, 0)), SeriesError);
}

TEST_CASE("exp turns sums into products") {
  std::mt19937_64 rng(3);
  const auto a = random_series(rng, 18, true), b = random_series(rng, 18, true);
  CHECK(exp_series(add(a, b)) == mul(exp_series(a), exp_series(b)));
}

TEST_CASE("power agrees with repeated multiplication") {
  std::mt19937_64 rng(5);
  const auto a = random_series(rng, 20, false);
  ExactSeries p = ExactSeries::monomial(20, 0);
  for (unsigned k = 0; k <= 6; ++k) {
    CHECK(power(a, k) == p);
    p = mul(p, a);
  }
}

TEST_CASE("substitute_power and shift place coefficients") {
  const auto a = ExactSeries::from_integers(10, std::vector<BigInt>{0, 1, 2, 3});
  const auto a2 = substitute_power(a, 2);
  CHECK(a2[2] == 1);
  CHECK(a2[4] == 2);
  CHECK(a2[6] == 3);
  CHECK(a2[3] == 0);
  const auto s = shift(a, 3);
  CHECK(s.order() == 10);
  CHECK(s[4] == 1);
  CHECK(s[6] == 3);
}

TEST_CASE("z times the Polya exponential of the rooted counts is the rooted series") {
  const std::size_t n = 40;
  const auto a = oracle::rooted_counts(n);
  const auto series = ExactSeries::from_integers(n, a);
  CHECK(shift(polya_exp(series, 1), 1) == series);
}

TEST_CASE("multiset slices: k = 2 is (A^2 + A(z^2))/2 and slices sum to the Polya exponential") {
  std::mt19937_64 rng(9);
  const auto a = random_series(rng, 16, true);
  const auto slices = mset_slices(a, 16);
  CHECK(slices[0] == ExactSeries::monomial(16, 0));
  CHECK(slices[1] == a);
  CHECK(slices[2] == scale(add(mul(a, a), substitute_power(a, 2)), make_rational(1, 2)));
  CHECK(mset_slice(a, 3) == slices[3]);
  ExactSeries total(16);
  for (const auto& s : slices) total = add(total, s);
  CHECK(total == polya_exp(a, 1));
}

TEST_CASE("compose: exp(z) composed with z + z^2 equals exp(z + z^2)") {
  const auto inner = add(ExactSeries::monomial(14, 1), ExactSeries::monomial(14, 2));
  const auto outer = exp_series(ExactSeries::monomial(14, 1));
  CHECK(compose(outer, inner) == exp_series(inner));
}

TEST_CASE("series text round trip") {
  std::mt19937_64 rng(1);
  const auto a = random_series(rng, 12, false);
  std::stringstream io;
  write_series(io, a);
  CHECK(read_series(io) == a);
}

TEST_CASE("float conversion and evaluation") {
  const auto geom = ExactSeries::from_integers(60, std::vector<BigInt>(61, 1));
  const auto f = to_float(geom);
  CHECK(f.evaluate(0.25) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  const auto r = eval_real(geom, 0.25);
  CHECK(r.value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(r.tail_estimate < 1e-30);
  const auto g = mul(f, f);
  CHECK(g[10] == doctest::Approx(11.0));
}

TEST_CASE("integrality flag") {
  CHECK(ExactSeries::from_integers(3, std::vector<BigInt>{1, 2}).is_integral());
  CHECK_FALSE(ExactSeries::monomial(3, 1, make_rational(1, 2)).is_integral());
}
