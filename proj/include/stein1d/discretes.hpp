#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stein1d/numerics.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

enum class DiscreteFamily {
  binomial,
  poisson,
  negative_binomial,
  geometric,
  hypergeometric,
  discrete_uniform,
  polya,
  bernoulli_laplace,
  moran,
  semicircle_fulman,
  erlangC_stationary,
  miw,
  custom
};

std::string to_string(DiscreteFamily f);
DiscreteFamily discrete_family_from_string(const std::string& s);
bool is_countable(DiscreteFamily f);

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr std::size_t kMaxAtoms = 10'000'000;
inline constexpr double kTailExtensionLog = -92.1034037197618;  // log(1e-40)

// Record of the cut applied to a countable support. The atoms past the cut are kept (with their
// probabilities under the untruncated law, down to ~1e-40) so that expectations can be taken
// over the untruncated law while the retained law stays finite.
struct Truncation {
  std::size_t cut_index = 0;
  double dropped_mass = 0.0;
  double tail_tol = kDefaultTailTol;
  std::vector<double> tail_points;
  std::vector<double> tail_masses;
};

struct DiscreteLaw {
  DiscreteFamily family = DiscreteFamily::custom;
  ParamMap params;
  std::vector<double> points;
  std::vector<double> masses;
  std::optional<Truncation> truncation;

  std::size_t size() const { return points.size(); }
};

// Retained atoms followed by the recorded tail, masses summing to one.
struct SupportView {
  std::vector<double> points;
  std::vector<double> masses;
  std::size_t retained = 0;
  std::size_t size() const { return points.size(); }
};

SupportView full_view(const DiscreteLaw& law);

// Throws unless points are strictly increasing, masses positive and summing to one.
void validate_law(const DiscreteLaw& law);

DiscreteLaw make_discrete(DiscreteFamily family, const ParamMap& params,
                          double tail_tol = kDefaultTailTol);
// Law from log masses on increasing points; atoms whose upper tail mass drops below tail_tol
// are moved into the truncation record.
DiscreteLaw truncate_sequence(DiscreteFamily family, ParamMap params, std::vector<double> points,
                              const std::vector<double>& log_masses, double tail_tol);
DiscreteLaw make_custom_law(std::vector<double> points, std::vector<double> masses);

struct AffineMap {
  double scale = 1.0;
  double shift = 0.0;
  double operator()(double y) const { return scale * y + shift; }
};

struct StandardizedLaw {
  DiscreteLaw law;
  AffineMap map;
};

DiscreteLaw apply_map(const DiscreteLaw& law, const AffineMap& map);

// Affine map onto the target's mean and variance; for the Erlang-C limit the fixed diffusion
// scaling sqrt(mu/lambda)(y - lambda/mu) is used instead.
StandardizedLaw standardize(const DiscreteLaw& law, const ContinuousTarget& target);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
};

Moments moments(const DiscreteLaw& law);
Moments moments(const SupportView& view);
double mean_abs(const DiscreteLaw& law);

struct ConditionReport {
  double score_mean = 0.0;         // E[s(X)]
  double identity_residual = 0.0;  // E[X s(X) + w(X)]
  double tolerance = 1e-8;
  bool pass = false;
  std::optional<double> mean_mismatch;
  std::optional<double> variance_mismatch;
};

ConditionReport check_conditions(const DiscreteLaw& law, const ContinuousTarget& target,
                                 const WeightFunction& weight, double tolerance = 1e-8);

// Var[Y] <= min(E[Y], l - E[Y]) for a law on {0, ..., l}; necessary for weights in [0, 1]
// against a Gaussian target.
bool gaussian_lattice_condition(const DiscreteLaw& integer_law);

}  // namespace stein1d
