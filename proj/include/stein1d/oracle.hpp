#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "stein1d/discretes.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

struct W1Result {
  double value = 0.0;
  double error_estimate = 0.0;  // summed quadrature error estimates
  std::size_t panels = 0;
};

// int |F_X - F_Z| for the retained law X (right-continuous steps). Each step panel is split at
// the crossing of F_Z with the step level so the integrand keeps one sign per piece.
W1Result exact_w1(const DiscreteLaw& law, const ContinuousTarget& target, double tol = 1e-8);

// W1 between two finite discrete laws (exact, by merging the step functions).
double w1_discrete(const std::vector<double>& xa, const std::vector<double>& pa,
                   const std::vector<double>& xb, const std::vector<double>& pb);

// W1 between the retained law and its untruncated view (0 when nothing was cut).
double truncation_w1(const DiscreteLaw& law);

// max over the probes h(x) = x and h_t(x) = |x - t| of |E h(X) - E h(Z)|; a lower bound on W1.
double lipschitz_gap(const DiscreteLaw& law, const ContinuousTarget& target,
                     std::size_t probe_count = 200);

using TestFunction = std::function<double(double)>;

struct SteinSolution {
  double value = 0.0;
  double target_mean_of_h = 0.0;
};

// f_h(x) = (1/(q(x) w(x))) int_a^x (h - E h(Z)) q, integrating from the side with less mass.
SteinSolution solve_stein_equation(const ContinuousTarget& target, const WeightFunction& weight,
                                   const TestFunction& h, double x);

// E h(Z) by quadrature.
double target_expectation(const ContinuousTarget& target, const TestFunction& h);

// |w f_h'(x) + s(x) f_h(x) - (h(x) - E h(Z))| with f_h' by central differences.
double stein_ode_residual(const ContinuousTarget& target, const WeightFunction& weight,
                          const TestFunction& h, double x);

// (Fbar Gamma_1 + F Gamma_2) / (q tau): bound on |f_h| for Lipschitz(1) h with w = tau.
double stein_solution_envelope(const ContinuousTarget& target, double x);

}  // namespace stein1d
