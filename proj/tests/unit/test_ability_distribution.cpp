#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contest/ability_distribution.hpp"
#include "contest/errors.hpp"
#include "oracles.hpp"

using namespace contest;

TEST_CASE("uniform distribution") {
  const auto u = AbilityDistribution::uniform();
  for (double a : {0.0, 0.1, 0.5, 0.93, 1.0}) {
    CHECK(u.cdf(a) == doctest::Approx(a));
    CHECK(u.inverse_cdf(a) == doctest::Approx(a));
    CHECK(u.pdf(a) == doctest::Approx(1.0));
  }
}

TEST_CASE("beta CDF matches closed forms") {
  // Beta(2,3): F(x) = 6x^2 - 8x^3 + 3x^4
  const auto b23 = AbilityDistribution::beta(2.0, 3.0);
  // Beta(1/2,1/2): F(x) = (2/pi) asin(sqrt(x))
  const auto arcsine = AbilityDistribution::beta(0.5, 0.5);
  // Beta(3,1): F(x) = x^3
  const auto b31 = AbilityDistribution::beta(3.0, 1.0);
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    CHECK(b23.cdf(x) == doctest::Approx(6 * x * x - 8 * x * x * x + 3 * x * x * x * x).epsilon(1e-9));
    CHECK(arcsine.cdf(x) ==
          doctest::Approx(2.0 / std::numbers::pi * std::asin(std::sqrt(x))).epsilon(1e-9));
    CHECK(b31.cdf(x) == doctest::Approx(x * x * x).epsilon(1e-9));
  }
  CHECK(b23.pdf(0.5) == doctest::Approx(12 * 0.5 * 0.25));
}

TEST_CASE("beta inverse CDF round trip") {
  for (auto [p, q] : {std::pair{2.0, 5.0}, {0.5, 0.5}, {0.3, 2.0}, {4.0, 0.7}, {1.0, 1.0}}) {
    const auto d = AbilityDistribution::beta(p, q);
    for (int i = 1; i < 20; ++i) {
      const double u = i / 20.0;
      CHECK(std::abs(d.cdf(d.inverse_cdf(u)) - u) <= 1e-7);
    }
  }
}

TEST_CASE("piecewise-linear distribution") {
  const auto d = AbilityDistribution::piecewise_linear({{0, 0}, {0.5, 0.8}, {1, 1}});
  CHECK(d.cdf(0.25) == doctest::Approx(0.4));
  CHECK(d.cdf(0.75) == doctest::Approx(0.9));
  CHECK(d.inverse_cdf(0.9) == doctest::Approx(0.75));
  CHECK(d.pdf(0.25) == doctest::Approx(1.6));

  CHECK_THROWS_AS(AbilityDistribution::piecewise_linear({{0, 0}, {0.5, 0.5}}), ContractError);
  CHECK_THROWS_AS(AbilityDistribution::piecewise_linear({{0, 0}, {0.5, 0.6}, {0.4, 0.7}, {1, 1}}),
                  ContractError);
  CHECK_THROWS_AS(AbilityDistribution::piecewise_linear({{0, 0}, {0.5, 0.5}, {0.6, 0.5}, {1, 1}}),
                  ContractError);
}

TEST_CASE("domain errors outside [0,1]") {
  const auto u = AbilityDistribution::uniform();
  CHECK_THROWS_AS(u.inverse_cdf(1.5), DomainError);
  CHECK_THROWS_AS(u.inverse_cdf(-0.1), DomainError);
  CHECK_THROWS_AS(AbilityDistribution::beta(0.0, 1.0), ContractError);
}

TEST_CASE("sampling passes Kolmogorov-Smirnov at 1%") {
  const std::size_t n = 20000;
  const double critical = 1.63 / std::sqrt(static_cast<double>(n));
  for (const auto& d : {AbilityDistribution::uniform(), AbilityDistribution::beta(2.0, 5.0),
                        AbilityDistribution::beta(0.5, 0.5),
                        AbilityDistribution::piecewise_linear({{0, 0}, {0.3, 0.6}, {1, 1}})}) {
    Stream s(2024);
    const auto sample = d.sample(s, n);
    CHECK_MESSAGE(oracle::ks_distance(sample, [&](double x) { return d.cdf(x); }) < critical,
                  d.name());
  }
}

TEST_CASE("property: CDF is nondecreasing and the inverse is its right inverse") {
  Stream s(77);
  for (int trial = 0; trial < 25; ++trial) {
    const double p = 0.2 + 5.0 * s.uniform();
    const double q = 0.2 + 5.0 * s.uniform();
    const auto d = AbilityDistribution::beta(p, q);
    double prev = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double f = d.cdf(i / 50.0);
      REQUIRE(f >= prev - 1e-12);
      prev = f;
    }
    CHECK(d.cdf(1.0) == doctest::Approx(1.0));
    const double u = s.uniform();
    CHECK(std::abs(d.cdf(d.inverse_cdf(u)) - u) <= 1e-7);
  }
}
