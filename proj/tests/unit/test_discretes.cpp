#include <doctest.h>

#include <cmath>

#include "stein1d/discretes.hpp"

using namespace stein1d;

TEST_CASE("binomial moments") {
  const auto law = make_discrete(DiscreteFamily::binomial, {{"n", 12.0}, {"t", 0.3}});
  const auto m = moments(law);
  CHECK(m.mean == doctest::Approx(3.6).epsilon(1e-13));
  CHECK(m.variance == doctest::Approx(2.52).epsilon(1e-13));
}

TEST_CASE("poisson truncation keeps the tail mass below tolerance") {
  const auto law = make_discrete(DiscreteFamily::poisson, {{"lambda", 4.0}}, 1e-12);
  REQUIRE(law.truncation.has_value());
  double kept = 0.0;
  for (double p : law.masses) kept += p;
  CHECK(1.0 - kept <= 1e-12);
  const auto view = full_view(law);
  CHECK(view.points.size() > law.size());
}

TEST_CASE("custom laws are validated") {
  CHECK_NOTHROW(make_custom_law({0.0, 1.0}, {0.25, 0.75}));
  CHECK_THROWS_AS(make_custom_law({1.0, 0.0}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(make_custom_law({0.0, 1.0}, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(make_custom_law({0.0, 1.0}, {1.0, 0.0}), Error);
}

TEST_CASE("standardize matches mean and variance of the target") {
  const auto law = make_discrete(DiscreteFamily::binomial, {{"n", 30.0}, {"t", 0.2}});
  const auto z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const auto st = standardize(law, z);
  const auto m = moments(st.law);
  CHECK(std::abs(m.mean) < 1e-13);
  CHECK(m.variance == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("apply_map is affine") {
  const auto law = make_custom_law({0.0, 1.0, 3.0}, {0.2, 0.5, 0.3});
  const auto y = apply_map(law, AffineMap{2.0, -1.0});
  CHECK(moments(y).mean == doctest::Approx(2.0 * moments(law).mean - 1.0));
  CHECK(moments(y).variance == doctest::Approx(4.0 * moments(law).variance));
}

TEST_CASE("moment conditions against the normal") {
  const auto z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const auto w = constant_weight(1.0);
  CHECK(check_conditions(make_custom_law({-1.0, 1.0}, {0.5, 0.5}), z, w).pass);
  CHECK_FALSE(check_conditions(make_custom_law({-1.0, 2.0}, {0.5, 0.5}), z, w).pass);
}
