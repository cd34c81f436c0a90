#include <doctest.h>

#include <cmath>
#include <random>

#include "stein1d/discretes.hpp"
#include "stein1d/oracle.hpp"

using namespace stein1d;

namespace {
const ContinuousTarget kStdNormal = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
}

TEST_CASE("point mass against the standard normal") {
  const auto law = make_custom_law({0.0}, {1.0});
  CHECK(exact_w1(law, kStdNormal).value == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-9));
}

TEST_CASE("two atoms against the unit exponential") {
  // int_0^2 |1/2 - F| + int_2^inf (1 - F), F(x) = 1 - e^-x, crossing at ln 2.
  const auto law = make_custom_law({0.0, 2.0}, {0.5, 0.5});
  const auto e = make_target(TargetFamily::exponential, {{"lambda", 1.0}});
  const double expected = 1.0 - std::log(2.0) + 2.0 * std::exp(-2.0);
  CHECK(exact_w1(law, e).value == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("w1 between discrete laws") {
  CHECK(w1_discrete({0.0}, {1.0}, {1.0}, {1.0}) == doctest::Approx(1.0));
  CHECK(w1_discrete({0.0, 1.0}, {0.5, 0.5}, {0.0, 1.0}, {0.5, 0.5}) == doctest::Approx(0.0));
}

TEST_CASE("w1 bounds and affine scaling on random laws") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> pts, ms;
    double x = -2.0, total = 0.0;
    for (int i = 0; i < 6; ++i) {
      x += u(rng);
      pts.push_back(x);
      ms.push_back(u(rng));
      total += ms.back();
    }
    for (double& m : ms) m /= total;
    const auto law = make_custom_law(pts, ms);
    const double w = exact_w1(law, kStdNormal).value;
    CHECK(w + 1e-12 >= std::abs(moments(law).mean));
    CHECK(lipschitz_gap(law, kStdNormal) <= w + 1e-9);

    const auto scaled = apply_map(law, AffineMap{2.0, 1.0});
    const auto z2 = make_target(TargetFamily::normal, {{"mu", 1.0}, {"sigma", 2.0}});
    CHECK(exact_w1(scaled, z2).value == doctest::Approx(2.0 * w).epsilon(1e-8));
  }
}

TEST_CASE("stein solution for the identity against the normal") {
  const auto w = constant_weight(1.0);
  for (double x : {-1.0, 0.5, 2.0}) {
    const auto s = solve_stein_equation(kStdNormal, w, [](double y) { return y; }, x);
    CHECK(s.value == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("stein solution satisfies its ode") {
  const auto e = make_target(TargetFamily::exponential, {{"lambda", 1.0}});
  const auto w = stein_kernel_weight(e);
  auto h = [](double y) { return std::sin(y); };
  for (double x : {0.5, 1.0, 3.0}) CHECK(std::abs(stein_ode_residual(e, w, h, x)) < 1e-6);
}
