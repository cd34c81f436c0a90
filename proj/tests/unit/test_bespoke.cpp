#include <doctest.h>

#include <cmath>
#include <random>

#include "stein1d/bespoke.hpp"
#include "stein1d/cases.hpp"

using namespace stein1d;

TEST_CASE("binomial weights are 1 - i/n") {
  const auto app = prepare_application("binomial", {{"n", 4.0}, {"t", 0.3}});
  const auto ws = compute_weights(app.law, app.target, app.weight);
  const double expected[] = {1.0, 0.75, 0.5, 0.25, 0.0};
  REQUIRE(ws.values.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(ws.values[i] - expected[i]) < 1e-14);
  CHECK(ws.in_unit_interval);
}

TEST_CASE("poisson weights are all one") {
  const auto app = prepare_application("poisson", {{"lambda", 2.0}});
  const auto ws = compute_weights(app.law, app.target, app.weight);
  for (double v : ws.values) CHECK(std::abs(v - 1.0) < 1e-12);
}

TEST_CASE("symmetric two-point law against the normal") {
  // pi_0 = 1 and (D^pi)^t p closes the system only with pi_1 = 0.
  const auto law = make_custom_law({-1.0, 1.0}, {0.5, 0.5});
  const auto z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const auto ws = compute_weights(law, z, constant_weight(1.0));
  CHECK(ws.values[0] == doctest::Approx(1.0));
  CHECK(std::abs(ws.values[1]) < 1e-15);
}

TEST_CASE("recurrence agrees with the direct solve on random laws") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const auto z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const auto w = constant_weight(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = 3 + trial % 9;
    std::vector<double> pts, ms;
    double x = 0.0, total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      x += u(rng);
      pts.push_back(x);
      ms.push_back(u(rng));
      total += ms.back();
    }
    for (double& m : ms) m /= total;
    const auto st = standardize(make_custom_law(pts, ms), z);
    const auto a = compute_weights(st.law, z, w);
    const auto b = brute_force_weights(st.law, z, w);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-9);
    CHECK(a.max_residual < 1e-10);
  }
}

TEST_CASE("failed conditions throw unless overridden") {
  const auto law = make_custom_law({-1.0, 2.0}, {0.5, 0.5});
  const auto z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  CHECK_THROWS_AS(compute_weights(law, z, constant_weight(1.0)), Error);
  const auto ws = compute_weights(law, z, constant_weight(1.0), true);
  CHECK(ws.condition_override);
}

TEST_CASE("range check proves the binomial and refutes the discrete uniform") {
  const auto bin = prepare_application("binomial", {{"n", 20.0}, {"t", 0.5}});
  CHECK(check_range_sufficient(bin.law, bin.target, bin.weight).verdict ==
        RangeVerdict::proved_in_unit_interval);
  const auto du = prepare_application("discrete_uniform", {{"n", 12.0}});
  CHECK(check_range_sufficient(du.law, du.target, du.weight).verdict ==
        RangeVerdict::proved_violation);
}
