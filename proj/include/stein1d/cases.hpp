#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stein1d/bespoke.hpp"
#include "stein1d/bounds.hpp"
#include "stein1d/discretes.hpp"
#include "stein1d/factors.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

struct ParamSpec {
  std::string name;
  std::string description;
  double example = 0.0;
};

struct FamilyInfo {
  DiscreteFamily family;
  std::vector<ParamSpec> params;
};

struct TargetInfo {
  TargetFamily family;
  std::vector<ParamSpec> params;
};

const std::vector<FamilyInfo>& discrete_catalog();
const std::vector<TargetInfo>& target_catalog();

// A worked comparison: a discrete family, the target it approximates, the weight, and the
// bound assembly used for it.
struct ApplicationInfo {
  std::string name;
  DiscreteFamily family;
  TargetFamily target;
  std::string weight;  // "stein_kernel", "one" or "mu"
  Theorem theorem;
  std::vector<ParamSpec> params;
  std::string summary;
};

const std::vector<ApplicationInfo>& applications();
const ApplicationInfo& application_info(const std::string& name);

struct Application {
  std::string name;
  ParamMap params;
  DiscreteLaw raw;         // law on its natural scale
  DiscreteLaw law;         // after the affine map onto the target scale
  AffineMap map;
  ContinuousTarget target;
  WeightFunction weight;
  Theorem theorem = Theorem::uniform;
  std::optional<std::string> closed_form;  // family key accepted by closed_form_weights
};

// Missing parameters take the catalog example values.
Application prepare_application(const std::string& name, const ParamMap& params,
                                double tail_tol = kDefaultTailTol);

// Closed-form weights laid out like the law (retained atoms, then the recorded tail).
WeightSequence closed_form_for(const Application& app);

SteinFactors factors_for(const Application& app);

BoundReport assess(const Application& app, const WeightSequence& weights);
BoundReport assess(const Application& app);

struct PublishedBound {
  double value = 0.0;
  // true: the printed number is an upper envelope of the assembled bound, not equal to it.
  bool envelope = false;
  std::string formula;
};

std::optional<PublishedBound> published_bound(const std::string& name, const ParamMap& params);

// Printed formulas, on their own.
double geometric_bound(double t, double lambda);
double bernoulli_laplace_bound(double n);
double nb_gamma_bound(double beta, double t);
double hypergeometric_bound(double N, double n, double r);
double polya_bound(double alpha, double beta, double m, double n);
double semicircle_bound(double n);
double builder_gamma_bound(double delta);
double erlang_envelope(double lambda, double mu);
double erlang_simple_bound(double lambda, double mu);  // 31 sqrt(mu/lambda)
double miw_bound(double n);
double miw_exact_bound(double n);                      // 2 eps^3 x_n / n
double moran_mesh(double a, double b, double n);
double moran_bound(double a, double b, double n);

// Polya chain back to Y/n: assembled bound plus the affine shift between the two scalings.
double polya_gs(double alpha, double beta, double m, double n, double assembled_bound);

}  // namespace stein1d
