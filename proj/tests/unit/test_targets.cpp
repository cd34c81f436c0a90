#include <doctest.h>

#include <cmath>

#include "stein1d/targets.hpp"

using namespace stein1d;

TEST_CASE("normal kernel is the variance") {
  const auto z = make_target(TargetFamily::normal, {{"mu", 1.0}, {"sigma", 2.0}});
  for (double x : {-3.0, 0.0, 1.0, 4.5}) CHECK(z.stein_kernel(x) == doctest::Approx(4.0));
}

TEST_CASE("kernel weight gives score mean - x") {
  for (auto fam : {TargetFamily::exponential, TargetFamily::gamma, TargetFamily::beta}) {
    ParamMap p;
    if (fam == TargetFamily::exponential) p = {{"lambda", 1.5}};
    if (fam == TargetFamily::gamma) p = {{"alpha", 2.5}, {"beta", 0.7}};
    if (fam == TargetFamily::beta) p = {{"alpha", 2.0}, {"beta", 3.0}};
    const auto t = make_target(fam, p);
    const auto w = stein_kernel_weight(t);
    const double x = t.mean * 0.8;
    CHECK(eval_score(t, w, x) == doctest::Approx(t.mean - x).epsilon(1e-8));
  }
}

TEST_CASE("stein kernel of a quadratic family matches its coefficients") {
  const auto t = make_target(TargetFamily::gamma, {{"alpha", 3.0}, {"beta", 2.0}});
  REQUIRE(t.ip.has_value());
  for (double x : {0.2, 1.0, 3.0})
    CHECK(t.stein_kernel(x) == doctest::Approx((*t.ip)(x)).epsilon(1e-9));
}

TEST_CASE("gamma12 of the exponential") {
  // int_0^x F = x - 1 + e^-x, int_x^inf (1 - F) = e^-x for lambda = 1.
  const auto t = make_target(TargetFamily::exponential, {{"lambda", 1.0}});
  for (double x : {0.1, 1.0, 5.0}) {
    const auto [g1, g2] = gamma12(t, x);
    CHECK(g1 == doctest::Approx(x - 1.0 + std::exp(-x)).epsilon(1e-10));
    CHECK(g2 == doctest::Approx(std::exp(-x)).epsilon(1e-10));
  }
}

TEST_CASE("beta gamma12 sums to the distance from the mean") {
  // g1 - g2 = int_a^x F - int_x^b (1-F) = x - mean.
  const auto t = make_target(TargetFamily::beta, {{"alpha", 0.5}, {"beta", 4.0}});
  for (double x : {0.01, 0.3, 0.97, 0.9999}) {
    const auto [g1, g2] = gamma12(t, x);
    CHECK(g1 - g2 == doctest::Approx(x - t.mean).epsilon(1e-10));
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(make_target(TargetFamily::gamma, {{"alpha", -1.0}, {"beta", 1.0}}), Error);
  CHECK_THROWS_AS(make_target(TargetFamily::exponential, {}), Error);
}
