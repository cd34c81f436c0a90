#include <doctest.h>

#include <cmath>

#include "stein1d/bespoke.hpp"
#include "stein1d/builder.hpp"
#include "stein1d/oracle.hpp"

using namespace stein1d;

TEST_CASE("built laws have degenerate weights") {
  const auto g = make_target(TargetFamily::gamma, {{"alpha", 2.0}, {"beta", 1.0}});
  const auto w = stein_kernel_weight(g);
  const auto law = build_discrete(g, w, unbounded_grid(0.0, 0.1));
  const auto ws = compute_weights(law, g, w);
  CHECK(ws.values.front() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < ws.values.size(); ++i) CHECK(std::abs(ws.values[i]) < 1e-9);
}

TEST_CASE("beta grid solve hits the right end") {
  const auto b = make_target(TargetFamily::beta, {{"alpha", 2.0}, {"beta", 3.0}});
  const auto ip = solve_ip_grid(b, 40);
  CHECK(std::abs(ip.endpoint_residual) < 1e-10);
  CHECK(ip.delta * 40 <= 1.0);
}

TEST_CASE("halving the mesh does not increase the distance") {
  const auto e = make_target(TargetFamily::exponential, {{"lambda", 1.0}});
  const auto w = stein_kernel_weight(e);
  double prev = INFINITY;
  for (double d : {0.2, 0.1, 0.05}) {
    const double v = exact_w1(build_discrete(e, w, unbounded_grid(0.0, d)), e).value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("miw points for three worlds") {
  const auto x = miw_points(3);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == doctest::Approx(-1.0));
  CHECK(std::abs(x[1]) < 1e-14);
  CHECK(x[2] == doctest::Approx(1.0));
}

TEST_CASE("grid helpers") {
  const auto g = uniform_grid(1.0, 0.5, 4);
  CHECK(g.points == std::vector<double>{1.0, 1.5, 2.0, 2.5});
  CHECK_FALSE(g.infinite());
  CHECK(unbounded_grid(0.0, 0.1).infinite());
  CHECK_THROWS_AS(uniform_grid(0.0, -1.0, 3), Error);
}
