#pragma once

#include <map>
#include <optional>
#include <string>

#include "stein1d/bespoke.hpp"
#include "stein1d/discretes.hpp"
#include "stein1d/factors.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

enum class Theorem { uniform, combined, refined_piecewise, clt, regular_spacing };

std::string to_string(Theorem t);

struct BoundTerms {
  double first_order = 0.0;
  double second_order = 0.0;
  double truncation_slack = 0.0;       // W1(retained law, untruncated law)
  double standardization_slack = 0.0;  // affine shift to the exactly standardized law
  double sum() const;
};

struct BoundReport {
  double bound = 0.0;
  Theorem theorem = Theorem::uniform;
  BoundTerms terms;
  bool approximate = false;  // a caller override of the moment conditions was absorbed as slack
  std::optional<double> mesh;  // common spacing when regular
  std::optional<double> oracle_w1;
  std::optional<double> ratio;
  // Mesh-moment expectations E[|pi| d+ + |1-pi| d-] and E[|pi| d+^2 + |1-pi| d-^2].
  double first_moment = 0.0;
  double second_moment = 0.0;
  WeightSource weight_source = WeightSource::recurrence;
  bool weights_in_unit_interval = false;
  std::optional<SteinFactors> factors;
  // clt only: 3 E|Y - mu|^3 / (sigma^3 sqrt n), the classical comparison constant.
  std::optional<double> comparison;
};

// C0 E[|pi| d+ + |1-pi| d-] + C1 E[|pi| d+^2 + |1-pi| d-^2]; regular spacing with weights in
// [0, 1] reduces to C0 d + C1 d^2. If the weights were computed with a condition override,
// the law is restandardized and the affine distance is added as slack.
BoundReport wasserstein_bound(const DiscreteLaw& law, const ContinuousTarget& target,
                              const WeightFunction& weight, const WeightSequence& weights,
                              const SteinFactors& factors);

// C E[|pi| d+ + |1-pi| d-].
BoundReport wasserstein_bound_combined(const DiscreteLaw& law, const ContinuousTarget& target,
                                       const WeightFunction& weight,
                                       const WeightSequence& weights, double c_combined);

// sum_i (C0_{i+1} |pi_i| d+_i + C0_i |1-pi_i| d-_i) p_i plus the second-order analogue.
BoundReport wasserstein_bound_refined(const DiscreteLaw& law, const ContinuousTarget& target,
                                      const WeightSequence& weights, const SteinFactors& factors);

// iid sums of n copies of an integer summand against the standard normal.
BoundReport clt_bound(const DiscreteLaw& summand, double n);

// |b1 - b2| E|X| + |c1 - c2|: W1 between two affine images of X.
double affine_shift_bound(double b1, double c1, double b2, double c2, double abs_mean);

void attach_oracle(BoundReport& report, double w1);

}  // namespace stein1d
