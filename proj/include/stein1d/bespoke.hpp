#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stein1d/discretes.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

enum class WeightSource { recurrence, closed_form, linear_solve, clt_composition };

std::string to_string(WeightSource s);

struct WeightSequence {
  std::vector<double> values;       // aligned with the retained atoms
  std::vector<double> tail_values;  // aligned with the recorded tail, if any
  bool in_unit_interval = false;
  double max_residual = 0.0;
  WeightSource source = WeightSource::recurrence;
  bool condition_override = false;
  std::optional<ConditionReport> conditions;
  // pi_{K+1} w_{K+1} p_{K+1} / (pi_K w_K p_K) at the last retained atom K of a truncated law.
  std::optional<double> edge_ratio;
  // Defect of the last row if the retained atoms were treated as the whole law.
  std::optional<double> edge_defect;
};

inline constexpr double kUnitIntervalSlack = 1e-10;

bool within_unit_interval(const std::vector<double>& values, double slack = kUnitIntervalSlack);

// Weights for each atom of the law. Throws if the moment conditions fail, unless
// allow_override is set, in which case the plain prefix-sum form is used and the failing
// condition report is attached.
WeightSequence compute_weights(const DiscreteLaw& law, const ContinuousTarget& target,
                               const WeightFunction& weight, bool allow_override = false);

// max_i |((D^pi)^t (w p))_i + s_i p_i| / max(1, |s_i p_i|), over retained and tail atoms.
double residual(const DiscreteLaw& law, const WeightSequence& weights,
                const ContinuousTarget& target, const WeightFunction& weight);

// Families: binomial, poisson, negative_binomial, geometric, hypergeometric, discrete_uniform,
// polya, bernoulli_laplace, nb_gamma, semicircle_fulman, miw, erlangC_stationary.
// `count` is the number of atoms (needed for countable families).
WeightSequence closed_form_weights(const std::string& family, const ParamMap& params,
                                   std::size_t count);

struct SteinOperatorResult {
  std::vector<double> values;
  double expectation = 0.0;
};

// (T f)_i = w_i (D^pi f)_i - ((D^pi)^t (w p))_i / p_i f_i on the retained atoms.
SteinOperatorResult apply_stein_operator(const DiscreteLaw& law, const WeightSequence& weights,
                                         const WeightFunction& weight,
                                         const std::vector<double>& f_values);

enum class RangeVerdict { proved_in_unit_interval, proved_violation, inconclusive };

std::string to_string(RangeVerdict v);

struct RangeCheck {
  RangeVerdict verdict = RangeVerdict::inconclusive;
  // 1-based index of the matching sufficient condition, 0 if none matched.
  int upper_condition = 0;
  int lower_condition = 0;
  bool sign_tests_prove = false;
  bool enumeration_violation = false;
  double min_weight = 0.0;
  double max_weight = 0.0;
};

RangeCheck check_range_sufficient(const DiscreteLaw& law, const ContinuousTarget& target,
                                  const WeightFunction& weight);

// (E[pi(Y)], (1 + E[(Y - mu)^3] / sigma^2) / 2) for a law on consecutive integers, with the
// weights taken against the standard normal after standardization.
std::pair<double, double> third_moment_identity(const DiscreteLaw& integer_law);

// E[|pi(X)| + |1 - pi(X)|] for the standardized summand against the standard normal.
double clt_weights_expectation(const DiscreteLaw& summand);

// Direct solve of the defining linear system in extended precision, independent of the recurrence.
WeightSequence brute_force_weights(const DiscreteLaw& law, const ContinuousTarget& target,
                                   const WeightFunction& weight);

struct CompositionResult {
  DiscreteLaw law;  // standardized sum on its lattice
  WeightSequence weights;
};

// Weights of a standardized sum of independent integer summands, by exhaustive enumeration of
// the conditional expectation of the summand weights. Small instances only.
CompositionResult clt_composition_weights(const std::vector<DiscreteLaw>& integer_summands);

}  // namespace stein1d
