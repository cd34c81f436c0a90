#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stein1d/discretes.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

enum class FactorProvenance { closed_form, numeric_sup, literature_constant };

std::string to_string(FactorProvenance p);

struct GridInfo {
  std::size_t points = 0;
  double min_edge_distance = 0.0;  // closest approach to a finite endpoint, 0 if none
  double lower = 0.0;              // range actually scanned
  double upper = 0.0;
};

struct SteinFactors {
  double c0 = 0.0;
  double c1 = 0.0;
  std::optional<double> c_combined;
  // Indexed by interval: entry i covers [x_{i-1}, x_i]; entries 0 and size-1 are unused (zero).
  std::optional<std::vector<double>> piecewise_c0;
  std::optional<std::vector<double>> piecewise_c1;
  // Same intervals, without the factor one half of the factor definition.
  std::optional<std::vector<double>> piecewise_c0_unhalved;
  // Beta with both shapes below one: bound on sup ||tau' f_h'||.
  std::optional<double> tau_prime_fprime;
  FactorProvenance provenance = FactorProvenance::closed_form;
  std::optional<GridInfo> grid;
};

// Tabulated pairs: normal with constant weight one; exponential, gamma and beta with the
// Stein kernel weight.
SteinFactors closed_form_factors(const ContinuousTarget& target, WeightKind weight_kind);

// Piecewise constants of the beta approximation; a shape equal to 2 takes the "<= 2" branch.
std::pair<double, double> beta_b0b1(double alpha, double beta);

struct GridSpec {
  std::size_t interior_points = 100000;
  double edge_min = 1e-9;  // relative to the target scale
  std::size_t per_decade = 8;
};

struct NumericSup {
  double value = 0.0;
  double argmax = 0.0;
  GridInfo grid;
};

// Interior scan points: Chebyshev-spaced over the support (unbounded sides cut where the
// density falls below e^-700 of its peak) plus geometric refinement towards finite ends.
std::vector<double> sup_grid(const ContinuousTarget& target, const GridSpec& spec, GridInfo* info);

// sup over the grid of 2 Gamma_1 Gamma_2 / (q tau^2), a bound on sup_h ||f_h'||.
NumericSup numeric_fprime_bound(const ContinuousTarget& target, const GridSpec& spec = {});

// sup over the grid of the pointwise bound on |(f_h' tau)'| built from Gamma_1.
NumericSup fprime_tau_proxy_sup(const ContinuousTarget& target, const GridSpec& spec = {});

// Grid estimates of C0, C1 for an arbitrary weight from the general pointwise bounds on
// |f_h'| and |(f_h' w)'|. Provenance numeric_sup.
SteinFactors numeric_factors(const ContinuousTarget& target, const WeightFunction& weight,
                             const GridSpec& spec = {.interior_points = 4000});

// Per-interval first-order factors for a constant weight from a bound on |f_h''|,
// sampled inside each interval between consecutive atoms (recorded tail included).
SteinFactors piecewise_factors(const DiscreteLaw& law,
                               const std::function<double(double)>& fpp_bound,
                               const WeightFunction& weight, std::size_t samples = 16);

// Literature bound on |f_h''| for the Erlang-C diffusion limit: (23 + 13/x_n)/mu left of x_n,
// 2/mu to the right.
std::function<double(double)> erlang_fpp_bound(double n, double lambda, double mu);

}  // namespace stein1d
