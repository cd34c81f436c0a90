#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "stein1d/discretes.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

// Either an explicit finite grid or the unbounded uniform grid start + delta * i.
struct Grid {
  std::vector<double> points;
  std::optional<double> start;
  std::optional<double> delta;

  bool infinite() const { return start.has_value(); }
};

Grid uniform_grid(double start, double delta, std::size_t count);
Grid unbounded_grid(double start, double delta);

// Masses whose bespoke weights are (1, 0, 0, ...) for the given target and weight.
DiscreteLaw build_discrete(const ContinuousTarget& target, const WeightFunction& weight,
                           const Grid& grid, double tail_tol = kDefaultTailTol);

struct IpGrid {
  double delta = 0.0;
  std::optional<std::size_t> ell;
  double endpoint_residual = 0.0;  // tau(a + delta ell) + delta (mean - a - delta ell)
};

// Finite right end: solve for delta given ell. Unbounded right end: the largest feasible mesh.
IpGrid solve_ip_grid(const ContinuousTarget& target, std::optional<std::size_t> ell = {});

// Zero-sum configuration with gaps x_{i+1} - x_i = -1 / (x_1 + ... + x_i).
std::vector<double> miw_points(std::size_t n);

}  // namespace stein1d
