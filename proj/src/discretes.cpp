#include "stein1d/discretes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "stein1d/builder.hpp"

namespace stein1d {

namespace {

using boost::math::lgamma;

void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorKind::invalid_parameter, msg);
}

double positive_integer(const ParamMap& p, const std::string& key, const std::string& fam) {
  const double v = param(p, key);
  require(std::isfinite(v) && v >= 1.0 && v == std::floor(v),
          fam + ": parameter " + key + " must be a positive integer");
  return v;
}

double open_unit(const ParamMap& p, const std::string& key, const std::string& fam) {
  const double v = param(p, key);
  require(v > 0.0 && v < 1.0, fam + ": parameter " + key + " must lie in (0, 1)");
  return v;
}

double positive(const ParamMap& p, const std::string& key, const std::string& fam) {
  const double v = param(p, key);
  require(std::isfinite(v) && v > 0.0, fam + ": parameter " + key + " must be > 0");
  return v;
}

// Exponentiate log masses relative to their maximum and normalise.
std::vector<double> normalise_logs(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(logs.size());
  CompensatedSum s;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    p[i] = std::exp(logs[i] - top);
    s.add(p[i]);
  }
  const double total = s.value();
  for (double& v : p) v /= total;
  return p;
}

constexpr double kMassFloor = 1e-290;

DiscreteLaw finite_law(DiscreteFamily fam, ParamMap params, std::vector<double> points,
                       const std::vector<double>& logs) {
  DiscreteLaw law;
  law.family = fam;
  law.params = std::move(params);
  law.points = std::move(points);
  law.masses = normalise_logs(logs);
  // End atoms below kMassFloor would underflow in products of masses; they carry less than
  // 1e-280 in total and are dropped (the families here are unimodal, so only ends are affected).
  std::size_t lo = 0, hi = law.masses.size();
  while (lo < hi && law.masses[lo] < kMassFloor) ++lo;
  while (hi > lo && law.masses[hi - 1] < kMassFloor) --hi;
  for (std::size_t i = lo; i < hi; ++i)
    if (!(law.masses[i] > 0.0))
      fail(ErrorKind::numerical, to_string(fam) + ": interior atom with zero mass");
  if (lo > 0 || hi < law.masses.size()) {
    law.points = std::vector<double>(law.points.begin() + lo, law.points.begin() + hi);
    std::vector<double> kept(law.masses.begin() + lo, law.masses.begin() + hi);
    const double total = compensated_sum(kept);
    for (double& m : kept) m /= total;
    law.masses = std::move(kept);
  }
  return law;
}

// Countable support {0, 1, ...}: generate well past the cut, then split.
DiscreteLaw countable_law(DiscreteFamily fam, ParamMap params,
                          const std::function<double(double)>& log_mass, double tail_tol) {
  require(tail_tol > 0.0 && tail_tol <= 1e-6, "tail_tol must lie in (0, 1e-6]");
  std::vector<double> pts, logs;
  double top = -kInf;
  for (std::size_t i = 0;; ++i) {
    if (i >= kMaxAtoms)
      fail(ErrorKind::numerical, to_string(fam) + ": tail truncation needs more than " +
                                     std::to_string(kMaxAtoms) + " atoms");
    const double lp = log_mass(static_cast<double>(i));
    pts.push_back(static_cast<double>(i));
    logs.push_back(lp);
    top = std::max(top, lp);
    if (i >= 2 && lp < logs[i - 1] && lp < top + kTailExtensionLog) break;
  }
  return truncate_sequence(fam, std::move(params), std::move(pts), logs, tail_tol);
}

// log prod_{j=1}^{k} (2j+1)/(2j)
double log_odd_even_ratio(double k) { return lgamma(k + 1.5) - lgamma(1.5) - lgamma(k + 1.0); }

}  // namespace

DiscreteLaw truncate_sequence(DiscreteFamily family, ParamMap params, std::vector<double> points,
                              const std::vector<double>& log_masses, double tail_tol) {
  if (points.size() != log_masses.size() || points.empty())
    fail(ErrorKind::invalid_parameter, "points and log masses differ in length");
  std::vector<double> p = normalise_logs(log_masses);
  const std::size_t total = p.size();
  std::vector<double> tail_after(total, 0.0);  // sum_{j > i} p_j
  CompensatedSum acc;
  for (std::size_t i = total; i-- > 0;) {
    tail_after[i] = acc.value();
    acc.add(p[i]);
  }
  std::size_t cut = 0;
  while (cut + 1 < total && tail_after[cut] >= tail_tol) ++cut;

  DiscreteLaw law;
  law.family = family;
  law.params = std::move(params);
  CompensatedSum kept;
  for (std::size_t i = 0; i <= cut; ++i) kept.add(p[i]);
  const double kept_mass = kept.value();
  for (std::size_t i = 0; i <= cut; ++i) {
    law.points.push_back(points[i]);
    law.masses.push_back(p[i] / kept_mass);
  }
  Truncation tr;
  tr.cut_index = cut;
  tr.dropped_mass = tail_after[cut];
  tr.tail_tol = tail_tol;
  tr.tail_points.assign(points.begin() + static_cast<std::ptrdiff_t>(cut) + 1, points.end());
  tr.tail_masses.assign(p.begin() + static_cast<std::ptrdiff_t>(cut) + 1, p.end());
  law.truncation = std::move(tr);
  return law;
}

std::string to_string(DiscreteFamily f) {
  switch (f) {
    case DiscreteFamily::binomial: return "binomial";
    case DiscreteFamily::poisson: return "poisson";
    case DiscreteFamily::negative_binomial: return "negative_binomial";
    case DiscreteFamily::geometric: return "geometric";
    case DiscreteFamily::hypergeometric: return "hypergeometric";
    case DiscreteFamily::discrete_uniform: return "discrete_uniform";
    case DiscreteFamily::polya: return "polya";
    case DiscreteFamily::bernoulli_laplace: return "bernoulli_laplace";
    case DiscreteFamily::moran: return "moran";
    case DiscreteFamily::semicircle_fulman: return "semicircle_fulman";
    case DiscreteFamily::erlangC_stationary: return "erlangC_stationary";
    case DiscreteFamily::miw: return "miw";
    case DiscreteFamily::custom: return "custom";
  }
  return "custom";
}

DiscreteFamily discrete_family_from_string(const std::string& s) {
  for (int k = 0; k <= static_cast<int>(DiscreteFamily::custom); ++k) {
    auto f = static_cast<DiscreteFamily>(k);
    if (to_string(f) == s) return f;
  }
  fail(ErrorKind::invalid_parameter, "unknown discrete family '" + s + "'");
}

bool is_countable(DiscreteFamily f) {
  return f == DiscreteFamily::poisson || f == DiscreteFamily::negative_binomial ||
         f == DiscreteFamily::geometric || f == DiscreteFamily::erlangC_stationary;
}

SupportView full_view(const DiscreteLaw& law) {
  SupportView v;
  v.points = law.points;
  v.masses = law.masses;
  v.retained = law.size();
  if (law.truncation && !law.truncation->tail_points.empty()) {
    const double keep = 1.0 - law.truncation->dropped_mass;
    for (double& m : v.masses) m *= keep;
    v.points.insert(v.points.end(), law.truncation->tail_points.begin(),
                    law.truncation->tail_points.end());
    v.masses.insert(v.masses.end(), law.truncation->tail_masses.begin(),
                    law.truncation->tail_masses.end());
  }
  return v;
}

void validate_law(const DiscreteLaw& law) {
  if (law.points.empty()) fail(ErrorKind::invalid_parameter, "law has no atoms");
  if (law.points.size() != law.masses.size())
    fail(ErrorKind::invalid_parameter, "points and masses differ in length");
  for (std::size_t i = 0; i < law.size(); ++i) {
    if (!std::isfinite(law.points[i])) fail(ErrorKind::invalid_parameter, "non-finite atom");
    if (i > 0 && !(law.points[i] > law.points[i - 1]))
      fail(ErrorKind::invalid_parameter,
           "atoms must be strictly increasing (index " + std::to_string(i) + ")");
    if (!(law.masses[i] > 0.0))
      fail(ErrorKind::invalid_parameter,
           "masses must be strictly positive (index " + std::to_string(i) + ")");
  }
  const double total = compensated_sum(law.masses);
  if (std::abs(total - 1.0) > 1e-12)
    fail(ErrorKind::invalid_parameter, "masses sum to " + std::to_string(total));
}

DiscreteLaw make_custom_law(std::vector<double> points, std::vector<double> masses) {
  DiscreteLaw law;
  law.points = std::move(points);
  law.masses = std::move(masses);
  validate_law(law);
  return law;
}

DiscreteLaw make_discrete(DiscreteFamily family, const ParamMap& params, double tail_tol) {
  const std::string fam = to_string(family);
  switch (family) {
    case DiscreteFamily::binomial: {
      const double n = positive_integer(params, "n", fam);
      const double t = open_unit(params, "t", fam);
      std::vector<double> pts, logs;
      for (double i = 0; i <= n; ++i) {
        pts.push_back(i);
        logs.push_back(log_choose(n, i) + i * std::log(t) + (n - i) * std::log1p(-t));
      }
      return finite_law(family, {{"n", n}, {"t", t}}, pts, logs);
    }
    case DiscreteFamily::poisson: {
      const double lambda = positive(params, "lambda", fam);
      return countable_law(
          family, {{"lambda", lambda}},
          [lambda](double i) { return i * std::log(lambda) - lgamma(i + 1.0) - lambda; }, tail_tol);
    }
    case DiscreteFamily::negative_binomial: {
      const double n = positive(params, "n", fam);
      const double t = open_unit(params, "t", fam);
      return countable_law(
          family, {{"n", n}, {"t", t}},
          [n, t](double i) {
            return lgamma(n + i) - lgamma(n) - lgamma(i + 1.0) + n * std::log(t) +
                   i * std::log1p(-t);
          },
          tail_tol);
    }
    case DiscreteFamily::geometric: {
      const double t = open_unit(params, "t", fam);
      return countable_law(
          family, {{"t", t}}, [t](double i) { return std::log(t) + i * std::log1p(-t); },
          tail_tol);
    }
    case DiscreteFamily::hypergeometric: {
      const double big_n = positive_integer(params, "N", fam);
      const double n = positive_integer(params, "n", fam);
      const double r = positive_integer(params, "r", fam);
      require(r >= n, fam + ": requires r >= n");
      require(big_n > n + r, fam + ": requires N > n + r");
      std::vector<double> pts, logs;
      for (double i = 0; i <= n; ++i) {
        pts.push_back(i);
        logs.push_back(log_choose(r, i) + log_choose(big_n - r, n - i) - log_choose(big_n, n));
      }
      return finite_law(family, {{"N", big_n}, {"n", n}, {"r", r}}, pts, logs);
    }
    case DiscreteFamily::discrete_uniform: {
      const double n = positive_integer(params, "n", fam);
      std::vector<double> pts, logs;
      for (double i = 0; i <= n; ++i) {
        pts.push_back(i);
        logs.push_back(0.0);
      }
      return finite_law(family, {{"n", n}}, pts, logs);
    }
    case DiscreteFamily::polya: {
      const double al = positive(params, "alpha", fam);
      const double be = positive(params, "beta", fam);
      const double m = positive(params, "m", fam);
      const double n = positive_integer(params, "n", fam);
      const double big_a = al / m, big_b = be / m;
      std::vector<double> pts, logs;
      for (double i = 0; i <= n; ++i) {
        pts.push_back(i);
        logs.push_back(log_choose(n, i) + lgamma(i + big_a) + lgamma(n - i + big_b) -
                       lgamma(n + big_a + big_b));
      }
      return finite_law(family, {{"alpha", al}, {"beta", be}, {"m", m}, {"n", n}}, pts, logs);
    }
    case DiscreteFamily::bernoulli_laplace: {
      double l = param_or(params, "l", -1.0);
      if (l < 0.0) {
        const double n = positive_integer(params, "n", fam);
        require(std::fmod(n, 2.0) == 0.0, fam + ": n must be even (l = n/2)");
        l = n / 2.0;
      }
      require(l >= 1.0 && l == std::floor(l), fam + ": l must be a positive integer");
      std::vector<double> pts, logs;
      for (double i = 0; i <= l; ++i) {
        pts.push_back(i * (i + 1.0) / l);
        logs.push_back(log_choose(2.0 * l, l - i) + std::log(2.0 * i + 1.0) -
                       std::log(l + i + 1.0) - log_choose(2.0 * l, l));
      }
      return finite_law(family, {{"l", l}}, pts, logs);
    }
    case DiscreteFamily::moran: {
      const double a = positive(params, "a", fam);
      const double b = positive(params, "b", fam);
      const double n = positive_integer(params, "n", fam);
      require(2.0 * n > a + b, fam + ": requires 2n > a + b");
      const double big_a = 2.0 * n * a / (2.0 * n - a - b);
      const double big_b = 2.0 * n * (2.0 * n - a) / (2.0 * n - a - b);
      std::vector<double> pts, logs;
      for (double i = 0; i <= 2.0 * n; ++i) {
        pts.push_back(i);
        logs.push_back(lgamma(i + big_a) + lgamma(big_b - i) - lgamma(i + 1.0) -
                       lgamma(2.0 * n - i + 1.0));
      }
      return finite_law(family, {{"a", a}, {"b", b}, {"n", n}}, pts, logs);
    }
    case DiscreteFamily::semicircle_fulman: {
      const double n = positive_integer(params, "n", fam);
      require(n >= 3.0, fam + ": requires n >= 3");
      std::vector<double> pts, logs;
      for (double i = 1; i <= n - 1; ++i) {
        pts.push_back(i);
        logs.push_back(log_odd_even_ratio(i - 1.0) + log_odd_even_ratio(n - i - 1.0) -
                       log_choose(n, 2.0));
      }
      return finite_law(family, {{"n", n}}, pts, logs);
    }
    case DiscreteFamily::erlangC_stationary: {
      const double n = positive_integer(params, "n", fam);
      const double lambda = positive(params, "lambda", fam);
      const double mu = positive(params, "mu", fam);
      require(lambda < mu * n, fam + ": requires lambda < mu * n");
      const double log_rho = std::log(lambda / mu);
      return countable_law(
          family, {{"n", n}, {"lambda", lambda}, {"mu", mu}},
          [n, log_rho](double i) {
            if (i <= n) return i * log_rho - lgamma(i + 1.0);
            return i * log_rho - (i - n) * std::log(n) - lgamma(n + 1.0);
          },
          tail_tol);
    }
    case DiscreteFamily::miw: {
      const double n = positive_integer(params, "n", fam);
      require(n >= 3.0, fam + ": requires n >= 3");
      DiscreteLaw law;
      law.family = family;
      law.params = {{"n", n}};
      law.points = miw_points(static_cast<std::size_t>(n));
      law.masses.assign(law.points.size(), 1.0 / n);
      return law;
    }
    case DiscreteFamily::custom:
      fail(ErrorKind::invalid_parameter, "custom laws are built with make_custom_law");
  }
  fail(ErrorKind::invalid_parameter, "unknown family");
}

DiscreteLaw apply_map(const DiscreteLaw& law, const AffineMap& map) {
  if (!(map.scale > 0.0)) fail(ErrorKind::invalid_parameter, "affine map needs a positive scale");
  DiscreteLaw out = law;
  for (double& x : out.points) x = map(x);
  if (out.truncation)
    for (double& x : out.truncation->tail_points) x = map(x);
  return out;
}

StandardizedLaw standardize(const DiscreteLaw& law, const ContinuousTarget& target) {
  AffineMap map;
  if (target.family == TargetFamily::erlangC_limit) {
    const double lambda = param(target.params, "lambda");
    const double mu = param(target.params, "mu");
    map.scale = std::sqrt(mu / lambda);
    map.shift = -map.scale * lambda / mu;
  } else {
    if (!target.variance) fail(ErrorKind::domain, "target variance is not finite");
    const Moments mo = moments(law);
    if (!(mo.variance > 0.0)) fail(ErrorKind::domain, "cannot standardize a zero-variance law");
    map.scale = std::sqrt(*target.variance / mo.variance);
    map.shift = target.mean - map.scale * mo.mean;
    // Already standardized up to rounding: keep the atoms as given so that endpoint atoms stay
    // on the target support.
    if (std::abs(map.scale - 1.0) <= 1e-12 && std::abs(map.shift) <= 1e-12 * (1.0 + std::abs(mo.mean))) {
      map = AffineMap{};
    }
  }
  return {apply_map(law, map), map};
}

Moments moments(const SupportView& v) {
  CompensatedSum m1;
  for (std::size_t i = 0; i < v.size(); ++i) m1.add(v.masses[i] * v.points[i]);
  Moments out;
  out.mean = m1.value();
  CompensatedSum m2, m3;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v.points[i] - out.mean;
    m2.add(v.masses[i] * d * d);
    m3.add(v.masses[i] * d * d * d);
  }
  out.variance = m2.value();
  out.third_central = m3.value();
  return out;
}

Moments moments(const DiscreteLaw& law) { return moments(full_view(law)); }

double mean_abs(const DiscreteLaw& law) {
  const SupportView v = full_view(law);
  CompensatedSum s;
  for (std::size_t i = 0; i < v.size(); ++i) s.add(v.masses[i] * std::abs(v.points[i]));
  return s.value();
}

ConditionReport check_conditions(const DiscreteLaw& law, const ContinuousTarget& target,
                                 const WeightFunction& weight, double tolerance) {
  const SupportView v = full_view(law);
  CompensatedSum es, eid, scale_s, scale_id;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v.points[i];
    const double s = eval_score(target, weight, x);
    const double w = weight.w(x);
    es.add(v.masses[i] * s);
    eid.add(v.masses[i] * (x * s + w));
    scale_s.add(v.masses[i] * std::abs(s));
    scale_id.add(v.masses[i] * (std::abs(x * s) + std::abs(w)));
  }
  ConditionReport r;
  r.tolerance = tolerance;
  r.score_mean = es.value();
  r.identity_residual = eid.value();
  r.pass = std::abs(r.score_mean) <= tolerance * std::max(1.0, scale_s.value()) &&
           std::abs(r.identity_residual) <= tolerance * std::max(1.0, scale_id.value());
  if (weight.kind == WeightKind::stein_kernel && target.ip && target.variance) {
    const Moments mo = moments(v);
    r.mean_mismatch = mo.mean - target.mean;
    r.variance_mismatch = mo.variance - *target.variance;
  }
  return r;
}

bool gaussian_lattice_condition(const DiscreteLaw& integer_law) {
  const Moments mo = moments(integer_law);
  const double l = integer_law.points.back() - integer_law.points.front();
  const double mean = mo.mean - integer_law.points.front();
  return mo.variance <= std::min(mean, l - mean);
}

}  // namespace stein1d
