#include "stein1d/bounds.hpp"

#include <cmath>

#include "stein1d/oracle.hpp"

namespace stein1d {

namespace {

struct MeshMoments {
  double first = 0.0;
  double second = 0.0;
  std::optional<double> regular;
  bool unit = false;
};

std::vector<double> all_weights(const DiscreteLaw& law, const WeightSequence& ws) {
  std::vector<double> pi = ws.values;
  pi.insert(pi.end(), ws.tail_values.begin(), ws.tail_values.end());
  if (pi.size() != full_view(law).size())
    fail(ErrorKind::invalid_parameter, "weights misaligned with the law (" +
                                           std::to_string(pi.size()) + " vs " +
                                           std::to_string(full_view(law).size()) + " atoms)");
  return pi;
}

MeshMoments mesh_moments(const DiscreteLaw& law, const WeightSequence& ws) {
  const SupportView v = full_view(law);
  const std::vector<double> pi = all_weights(law, ws);
  const std::size_t n = v.size();
  MeshMoments m;
  CompensatedSum e1, e2;
  for (std::size_t i = 0; i < n; ++i) {
    // The d- term at the first atom and the d+ term at the last are dropped.
    const double up = i + 1 < n ? v.points[i + 1] - v.points[i] : 0.0;
    const double down = i > 0 ? v.points[i] - v.points[i - 1] : 0.0;
    const double a = std::abs(pi[i]), b = std::abs(1.0 - pi[i]);
    e1.add(v.masses[i] * (a * up + b * down));
    e2.add(v.masses[i] * (a * up * up + b * down * down));
  }
  m.first = e1.value();
  m.second = e2.value();
  m.unit = within_unit_interval(pi);
  if (n >= 2) {
    const double d = v.points[1] - v.points[0];
    bool regular = true;
    for (std::size_t i = 2; i < n && regular; ++i)
      regular = std::abs((v.points[i] - v.points[i - 1]) - d) <= 1e-9 * d;
    if (regular) m.regular = d;
  }
  return m;
}

void require_finite_factor(double c, const char* name) {
  if (!(c >= 0.0) || !std::isfinite(c))
    fail(ErrorKind::invalid_parameter, std::string("factor ") + name + " must be finite and >= 0");
}

}  // namespace

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::uniform: return "uniform";
    case Theorem::combined: return "combined";
    case Theorem::refined_piecewise: return "refined_piecewise";
    case Theorem::clt: return "clt";
    case Theorem::regular_spacing: return "regular_spacing";
  }
  return "uniform";
}

double BoundTerms::sum() const {
  return first_order + second_order + truncation_slack + standardization_slack;
}

double affine_shift_bound(double b1, double c1, double b2, double c2, double abs_mean) {
  if (!(abs_mean >= 0.0)) fail(ErrorKind::invalid_parameter, "E|X| must be >= 0");
  return std::abs(b1 - b2) * abs_mean + std::abs(c1 - c2);
}

BoundReport wasserstein_bound(const DiscreteLaw& law, const ContinuousTarget& target,
                              const WeightFunction& weight, const WeightSequence& weights,
                              const SteinFactors& factors) {
  require_finite_factor(factors.c0, "C0");
  require_finite_factor(factors.c1, "C1");
  BoundReport r;
  const DiscreteLaw* certified = &law;
  const WeightSequence* ws = &weights;
  DiscreteLaw restandardized;
  WeightSequence rew;
  if (weights.condition_override) {
    const StandardizedLaw st = standardize(law, target);
    restandardized = st.law;
    rew = compute_weights(restandardized, target, weight);
    r.terms.standardization_slack = affine_shift_bound(1.0, 0.0, st.map.scale, st.map.shift,
                                                       mean_abs(law));
    r.approximate = true;
    certified = &restandardized;
    ws = &rew;
  }
  const MeshMoments m = mesh_moments(*certified, *ws);
  r.first_moment = m.first;
  r.second_moment = m.second;
  if (m.regular && m.unit) {
    r.theorem = Theorem::regular_spacing;
    r.mesh = m.regular;
    r.terms.first_order = factors.c0 * *m.regular;
    r.terms.second_order = factors.c1 * *m.regular * *m.regular;
  } else {
    r.theorem = Theorem::uniform;
    r.mesh = m.regular;
    r.terms.first_order = factors.c0 * m.first;
    r.terms.second_order = factors.c1 * m.second;
  }
  r.terms.truncation_slack = truncation_w1(*certified);
  r.bound = r.terms.sum();
  r.weight_source = ws->source;
  r.weights_in_unit_interval = m.unit;
  r.factors = factors;
  return r;
}

BoundReport wasserstein_bound_combined(const DiscreteLaw& law, const ContinuousTarget& target,
                                       const WeightFunction& weight,
                                       const WeightSequence& weights, double c_combined) {
  require_finite_factor(c_combined, "C");
  SteinFactors f;
  f.c0 = c_combined;
  f.c1 = 0.0;
  f.c_combined = c_combined;
  BoundReport r = wasserstein_bound(law, target, weight, weights, f);
  // Same assembly with a single constant; the regular-spacing shortcut is exact here too.
  r.theorem = Theorem::combined;
  return r;
}

BoundReport wasserstein_bound_refined(const DiscreteLaw& law, const ContinuousTarget& /*target*/,
                                      const WeightSequence& weights, const SteinFactors& factors) {
  if (!factors.piecewise_c0) fail(ErrorKind::invalid_parameter, "refined bound needs piecewise factors");
  const SupportView v = full_view(law);
  const std::vector<double> pi = all_weights(law, weights);
  const std::size_t n = v.size();
  const std::vector<double>& c0 = *factors.piecewise_c0;
  const std::vector<double> zeros(n + 1, 0.0);
  const std::vector<double>& c1 = factors.piecewise_c1 ? *factors.piecewise_c1 : zeros;
  if (c0.size() != n + 1 || c1.size() != n + 1)
    fail(ErrorKind::invalid_parameter, "piecewise factors misaligned with the law");
  CompensatedSum first, second;
  for (std::size_t i = 0; i < n; ++i) {
    const double up = i + 1 < n ? v.points[i + 1] - v.points[i] : 0.0;
    const double down = i > 0 ? v.points[i] - v.points[i - 1] : 0.0;
    const double a = std::abs(pi[i]), b = std::abs(1.0 - pi[i]);
    first.add(v.masses[i] * (c0[i + 1] * a * up + c0[i] * b * down));
    second.add(v.masses[i] * (c1[i + 1] * a * up * up + c1[i] * b * down * down));
  }
  BoundReport r;
  r.theorem = Theorem::refined_piecewise;
  r.terms.first_order = first.value();
  r.terms.second_order = second.value();
  r.terms.truncation_slack = truncation_w1(law);
  r.bound = r.terms.sum();
  const MeshMoments m = mesh_moments(law, weights);
  r.first_moment = m.first;
  r.second_moment = m.second;
  r.mesh = m.regular;
  r.weight_source = weights.source;
  r.weights_in_unit_interval = m.unit;
  r.factors = factors;
  return r;
}

BoundReport clt_bound(const DiscreteLaw& summand, double n) {
  if (!(n >= 1.0)) fail(ErrorKind::invalid_parameter, "clt bound needs n >= 1");
  const Moments mo = moments(summand);
  if (!(mo.variance > 0.0)) fail(ErrorKind::invalid_parameter, "summand must have positive variance");
  const double sigma = std::sqrt(mo.variance);
  const double e = clt_weights_expectation(summand);
  BoundReport r;
  r.theorem = Theorem::clt;
  r.first_moment = e;
  r.terms.first_order = e / (sigma * std::sqrt(n));
  r.bound = r.terms.sum();
  r.weight_source = WeightSource::recurrence;
  r.weights_in_unit_interval = std::abs(e - 1.0) <= 1e-12;
  const SupportView v = full_view(summand);
  CompensatedSum third;
  for (std::size_t i = 0; i < v.size(); ++i)
    third.add(v.masses[i] * std::pow(std::abs(v.points[i] - mo.mean), 3));
  r.comparison = 3.0 * third.value() / (sigma * sigma * sigma * std::sqrt(n));
  return r;
}

void attach_oracle(BoundReport& report, double w1) {
  report.oracle_w1 = w1;
  if (w1 > 0.0) report.ratio = report.bound / w1;
}

}  // namespace stein1d
