#include <doctest.h>

#include "stein1d/factors.hpp"

using namespace stein1d;

TEST_CASE("closed-form factors") {
  const auto z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const auto fz = closed_form_factors(z, WeightKind::constant_one);
  CHECK(fz.c0 == doctest::Approx(1.0));
  CHECK(fz.c1 == doctest::Approx(0.0));
  const auto e = make_target(TargetFamily::exponential, {{"lambda", 3.0}});
  CHECK(closed_form_factors(e, WeightKind::stein_kernel).c0 == doctest::Approx(1.5));
}

TEST_CASE("beta factors sum to eight in the symmetric three-halves case") {
  const auto [b0, b1] = beta_b0b1(1.5, 1.5);
  CHECK(b0 + b1 == doctest::Approx(8.0));
}

TEST_CASE("numeric sup of the exponential equals its rate") {
  for (double lambda : {0.5, 2.0}) {
    const auto e = make_target(TargetFamily::exponential, {{"lambda", lambda}});
    const auto ns = numeric_fprime_bound(e);
    CHECK(ns.value == doctest::Approx(lambda).epsilon(1e-6));
  }
}

TEST_CASE("numeric factors fall back for the student target") {
  const auto t = make_target(TargetFamily::student, {{"nu", 5.0}});
  const auto f = numeric_factors(t, stein_kernel_weight(t));
  CHECK(f.provenance == FactorProvenance::numeric_sup);
  CHECK(f.c0 > 0.0);
}
