#include <doctest.h>

#include <cmath>

#include "stein1d/bounds.hpp"
#include "stein1d/cases.hpp"

using namespace stein1d;

TEST_CASE("bernoulli-laplace formula at n = 50") {
  CHECK(bernoulli_laplace_bound(50.0) == doctest::Approx(0.66).epsilon(1e-14));
}

TEST_CASE("regular spacing reduces to c0 d + c1 d^2") {
  const auto app = prepare_application("binomial", {{"n", 16.0}, {"t", 0.5}});
  const auto r = assess(app);
  REQUIRE(r.mesh.has_value());
  const auto f = factors_for(app);
  CHECK(r.bound == doctest::Approx(f.c0 * *r.mesh + f.c1 * *r.mesh * *r.mesh).epsilon(1e-12));
}

TEST_CASE("clt bound shrinks like one over root n") {
  const auto bern = make_discrete(DiscreteFamily::binomial, {{"n", 1.0}, {"t", 0.3}});
  const double b100 = clt_bound(bern, 100.0).bound;
  const double b400 = clt_bound(bern, 400.0).bound;
  CHECK(b100 / b400 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("miw bound dominates its exact form") {
  for (double n : {10.0, 50.0, 200.0}) CHECK(miw_exact_bound(n) <= miw_bound(n));
}

TEST_CASE("attach_oracle records the ratio") {
  BoundReport r;
  r.bound = 0.4;
  attach_oracle(r, 0.1);
  REQUIRE(r.ratio.has_value());
  CHECK(*r.ratio == doctest::Approx(4.0));
}

TEST_CASE("bounds are nonnegative across the applications") {
  for (const auto& info : applications()) {
    ParamMap p;
    for (const auto& ps : info.params) p[ps.name] = ps.example;
    const auto app = prepare_application(info.name, p);
    const auto r = assess(app);
    CHECK_MESSAGE(r.bound >= 0.0, info.name);
    CHECK_MESSAGE(std::isfinite(r.bound), info.name);
  }
}
