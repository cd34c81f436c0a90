#include "stein1d/bespoke.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace stein1d {

namespace {

struct Row {
  std::vector<double> x, p, w, s;
  std::size_t retained = 0;
  std::size_t size() const { return x.size(); }
  double gap(std::size_t i) const { return x[i] - x[i - 1]; }  // delta_i, i >= 1
};

Row tabulate(const SupportView& v, const ContinuousTarget& target, const WeightFunction& weight) {
  Row r;
  r.x = v.points;
  r.p = v.masses;
  r.retained = v.retained;
  for (double x : r.x) {
    r.w.push_back(weight.w(x));
    r.s.push_back(eval_score(target, weight, x));
  }
  return r;
}

// u_i = pi_i w_i p_i; returns pi with the conventions pi_0 = 1 and pi_l = 0 when w vanishes there.
std::vector<double> pi_from_u(const Row& r, const std::vector<double>& u) {
  const std::size_t n = r.size();
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = r.w[i] * r.p[i];
    if (g != 0.0) {
      pi[i] = u[i] / g;
    } else if (i == 0) {
      pi[i] = 1.0;
    } else if (i + 1 == n) {
      pi[i] = 0.0;
    } else {
      fail(ErrorKind::domain, "weight function vanishes at interior atom " + std::to_string(i));
    }
  }
  pi[0] = 1.0;
  return pi;
}

std::vector<double> forward_u(const Row& r, std::vector<double>* error) {
  const std::size_t n = r.size();
  std::vector<double> u(n);
  CompensatedSum acc, score, err;
  acc.add(r.w[0] * r.p[0]);
  score.add(r.s[0] * r.p[0]);
  err.add(std::abs(r.w[0] * r.p[0]));
  u[0] = acc.value();
  if (error) error->assign(n, 0.0), (*error)[0] = err.value();
  for (std::size_t i = 1; i < n; ++i) {
    const double g = r.w[i] * r.p[i];
    const double shift = r.gap(i) * score.value();
    acc.add(g);
    acc.add(-shift);
    u[i] = acc.value();
    err.add(std::abs(g) + std::abs(shift));
    if (error) (*error)[i] = err.value();
    score.add(r.s[i] * r.p[i]);
  }
  return u;
}

std::vector<double> backward_u(const Row& r, std::vector<double>* error) {
  const std::size_t n = r.size();
  std::vector<double> u(n, 0.0);
  error->assign(n, 0.0);
  CompensatedSum acc, score, err;
  for (std::size_t i = n - 1; i >= 1; --i) {
    score.add(r.s[i] * r.p[i]);  // C_i = sum_{j >= i} s_j p_j
    const double g = r.w[i] * r.p[i];
    const double shift = r.gap(i) * score.value();
    acc.add(-g);
    acc.add(-shift);
    err.add(std::abs(g) + std::abs(shift));
    u[i - 1] = acc.value();
    (*error)[i - 1] = err.value();
  }
  return u;
}

double row_defect(const Row& r, const std::vector<double>& pi, std::size_t j, std::size_t n) {
  const std::size_t l = n - 1;
  auto g = [&](std::size_t i) { return r.w[i] * r.p[i]; };
  CompensatedSum row;
  if (j >= 1) {
    row.add(g(j - 1) * pi[j - 1] / r.gap(j));
    row.add(g(j) * (1.0 - pi[j]) / r.gap(j));
  }
  if (j < l) {
    row.add(-g(j) * pi[j] / r.gap(j + 1));
    row.add(-g(j + 1) * (1.0 - pi[j + 1]) / r.gap(j + 1));
  }
  const double sp = r.s[j] * r.p[j];
  row.add(sp);
  return std::abs(row.value()) / std::max(1.0, std::abs(sp));
}

std::vector<double> joined(const WeightSequence& ws) {
  std::vector<double> pi = ws.values;
  pi.insert(pi.end(), ws.tail_values.begin(), ws.tail_values.end());
  return pi;
}

std::string condition_message(const ConditionReport& c) {
  std::ostringstream os;
  os.precision(6);
  os << "moment conditions fail: E[s(X)] = " << c.score_mean
     << ", E[X s(X) + w(X)] = " << c.identity_residual << " (tolerance " << c.tolerance << ")";
  if (c.mean_mismatch) os << "; mean mismatch " << *c.mean_mismatch;
  if (c.variance_mismatch) os << "; variance mismatch " << *c.variance_mismatch;
  return os.str();
}

}  // namespace

std::string to_string(WeightSource s) {
  switch (s) {
    case WeightSource::recurrence: return "recurrence";
    case WeightSource::closed_form: return "closed_form";
    case WeightSource::linear_solve: return "linear_solve";
    case WeightSource::clt_composition: return "clt_composition";
  }
  return "recurrence";
}

std::string to_string(RangeVerdict v) {
  switch (v) {
    case RangeVerdict::proved_in_unit_interval: return "proved_in_unit_interval";
    case RangeVerdict::proved_violation: return "proved_violation";
    case RangeVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool within_unit_interval(const std::vector<double>& values, double slack) {
  return std::all_of(values.begin(), values.end(),
                     [slack](double v) { return v >= -slack && v <= 1.0 + slack; });
}

WeightSequence compute_weights(const DiscreteLaw& law, const ContinuousTarget& target,
                               const WeightFunction& weight, bool allow_override) {
  validate_law(law);
  const ConditionReport cond = check_conditions(law, target, weight);
  if (!cond.pass && !allow_override) fail(ErrorKind::invalid_parameter, condition_message(cond));

  const SupportView view = full_view(law);
  const Row r = tabulate(view, target, weight);
  const std::size_t n = r.size();

  std::vector<double> ef, eb;
  std::vector<double> u = forward_u(r, &ef);
  if (cond.pass && n > 1) {
    // Each u_i has a prefix and a suffix representation; keep the one accumulated from
    // smaller terms so that cancellation in the tails does not swamp tiny masses.
    const std::vector<double> ub = backward_u(r, &eb);
    for (std::size_t i = 1; i < n; ++i)
      if (eb[i] < ef[i]) u[i] = ub[i];
  }
  const std::vector<double> pi = pi_from_u(r, u);

  WeightSequence ws;
  ws.values.assign(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(view.retained));
  ws.tail_values.assign(pi.begin() + static_cast<std::ptrdiff_t>(view.retained), pi.end());
  ws.source = WeightSource::recurrence;
  ws.condition_override = !cond.pass;
  ws.conditions = cond;
  ws.in_unit_interval = within_unit_interval(pi);
  ws.max_residual = residual(law, ws, target, weight);

  if (view.retained < n) {
    const std::size_t k = view.retained - 1;
    if (u[k] != 0.0) ws.edge_ratio = u[k + 1] / u[k];
    Row kept = tabulate(SupportView{law.points, law.masses, law.size()}, target, weight);
    ws.edge_defect = row_defect(kept, ws.values, k, law.size());
  }
  return ws;
}

double residual(const DiscreteLaw& law, const WeightSequence& weights,
                const ContinuousTarget& target, const WeightFunction& weight) {
  const SupportView view = full_view(law);
  const std::vector<double> pi = joined(weights);
  if (pi.size() != view.size())
    fail(ErrorKind::invalid_parameter,
         "weights have " + std::to_string(pi.size()) + " entries, law has " +
             std::to_string(view.size()) + " atoms including the recorded tail");
  const Row r = tabulate(view, target, weight);
  double worst = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) worst = std::max(worst, row_defect(r, pi, j, r.size()));
  return worst;
}

WeightSequence closed_form_weights(const std::string& family, const ParamMap& params,
                                   std::size_t count) {
  if (count == 0) fail(ErrorKind::invalid_parameter, "closed form needs count >= 1");
  std::vector<double> pi(count);
  auto fill = [&](auto&& f) {
    for (std::size_t k = 0; k < count; ++k) pi[k] = f(static_cast<double>(k));
  };
  auto finite_count = [&](double atoms) {
    if (static_cast<double>(count) != atoms)
      fail(ErrorKind::invalid_parameter, family + ": expected " +
                                             std::to_string(static_cast<long long>(atoms)) +
                                             " atoms, got " + std::to_string(count));
  };

  if (family == "binomial") {
    const double n = param(params, "n");
    finite_count(n + 1);
    fill([&](double i) { return (n - i) / n; });
  } else if (family == "poisson" || family == "erlangC_stationary") {
    fill([](double) { return 1.0; });
  } else if (family == "negative_binomial") {
    const double n = param(params, "n");
    fill([&](double i) { return 1.0 + i / n; });
  } else if (family == "geometric") {
    const double t = param(params, "t");
    const double c = std::sqrt(1.0 - t) - (1.0 - t);
    fill([&](double i) { return (1.0 + i) * c / (t * i + c); });
  } else if (family == "nb_gamma") {
    const double n = param(params, "n");
    const double beta = param(params, "beta");
    const double t = param(params, "t");
    const double c = std::sqrt(t * (beta + t)) - t;
    fill([&](double i) { return (n + i) * c / (beta * i + n * c); });
  } else if (family == "hypergeometric") {
    const double N = param(params, "N"), n = param(params, "n"), r = param(params, "r");
    finite_count(n + 1);
    fill([&](double i) {
      return (n - i) * (r - i) * (N * i + (N - n) * (N - r)) / (n * r * (N - n) * (N - r));
    });
  } else if (family == "discrete_uniform") {
    const double n = param(params, "n");
    finite_count(n + 1);
    fill([&](double i) { return (i + 1.0) * (n - i) * (n - 2.0 * (i - 1.0)) / (n * (n + 2.0)); });
  } else if (family == "bernoulli_laplace") {
    const double l = params.count("l") ? param(params, "l") : param(params, "n") / 2.0;
    finite_count(l + 1);
    fill([&](double i) { return (l - i) * (i + 1.0) / (l * (2.0 * i + 1.0)); });
  } else if (family == "polya") {
    const double A = param(params, "alpha") / param(params, "m");
    const double B = param(params, "beta") / param(params, "m");
    const double n = param(params, "n");
    finite_count(n + 1);
    const double S = std::sqrt(n * (A + B + n));
    const double k = B * (B + n - S) + A * (B - n + S);
    fill([&](double i) {
      return (i + A) * (n - i) * k / ((A * (n - i) + B * (S - i)) * (B * i + A * (i - n + S)));
    });
  } else if (family == "semicircle_fulman") {
    const double n = param(params, "n");
    finite_count(n - 1);
    fill([&](double k) {
      const double i = k + 1.0;
      return -(2.0 * i + 1.0) * (n - i - 1.0) / (4.0 * i * i - 4.0 * i * n + n + 2.0);
    });
  } else if (family == "miw") {
    const double n = param(params, "n");
    finite_count(n);
    fill([&](double k) { return 1.0 - k / (n - 1.0); });
  } else if (family == "moran") {
    fail(ErrorKind::unsupported, "moran: no closed form for the weights");
  } else {
    fail(ErrorKind::unsupported, family + ": no closed form for the weights");
  }

  WeightSequence ws;
  ws.values = std::move(pi);
  ws.source = WeightSource::closed_form;
  ws.in_unit_interval = within_unit_interval(ws.values);
  return ws;
}

SteinOperatorResult apply_stein_operator(const DiscreteLaw& law, const WeightSequence& weights,
                                         const WeightFunction& weight,
                                         const std::vector<double>& f_values) {
  const std::size_t n = law.size();
  if (weights.values.size() != n || f_values.size() != n)
    fail(ErrorKind::invalid_parameter, "operator inputs must align with the retained atoms");
  const auto& x = law.points;
  const auto& p = law.masses;
  const auto& pi = weights.values;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = weight.w(x[i]) * p[i];
  SteinOperatorResult out;
  out.values.resize(n);
  CompensatedSum e;
  for (std::size_t i = 0; i < n; ++i) {
    const double fwd = i + 1 < n ? (f_values[i + 1] - f_values[i]) / (x[i + 1] - x[i]) : 0.0;
    const double bwd = i > 0 ? (f_values[i] - f_values[i - 1]) / (x[i] - x[i - 1]) : 0.0;
    const double deriv = pi[i] * fwd + (1.0 - pi[i]) * bwd;
    double adj = 0.0;  // ((D^pi)^t g)_i
    if (i >= 1) adj += (g[i - 1] * pi[i - 1] + g[i] * (1.0 - pi[i])) / (x[i] - x[i - 1]);
    if (i + 1 < n) adj -= (g[i] * pi[i] + g[i + 1] * (1.0 - pi[i + 1])) / (x[i + 1] - x[i]);
    out.values[i] = weight.w(x[i]) * deriv - adj / p[i] * f_values[i];
    e.add(p[i] * out.values[i]);
  }
  out.expectation = e.value();
  return out;
}

namespace {

enum class Sign { neg, pos };

struct Block {
  Sign sign;
  bool nonempty;
};

// Whether the sequence splits into consecutive blocks of the given signs; entries within
// `tol` of zero fit either sign.
bool matches(const std::vector<double>& seq, const std::vector<Block>& blocks, double tol) {
  // reach[k][f]: the prefix read so far ends inside block k, which holds f > 0 entries.
  const std::size_t m = blocks.size();
  std::vector<std::array<bool, 2>> reach(m, {false, false});
  reach[0][0] = true;
  auto fits = [tol](double v, Sign s) { return s == Sign::neg ? v <= tol : v >= -tol; };
  for (double v : seq) {
    std::vector<std::array<bool, 2>> next(m, {false, false});
    for (std::size_t k = 0; k < m; ++k) {
      for (int f = 0; f < 2; ++f) {
        if (!reach[k][f]) continue;
        if (fits(v, blocks[k].sign)) next[k][1] = true;
        if (blocks[k].nonempty && f == 0) continue;
        for (std::size_t j = k + 1; j < m; ++j) {
          if (fits(v, blocks[j].sign)) next[j][1] = true;
          if (blocks[j].nonempty) break;
        }
      }
    }
    reach = std::move(next);
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (int f = 0; f < 2; ++f) {
      if (!reach[k][f] || (blocks[k].nonempty && f == 0)) continue;
      bool ok = true;
      for (std::size_t j = k + 1; j < m; ++j) ok = ok && !blocks[j].nonempty;
      if (ok) return true;
    }
  }
  return false;
}

double scale_of(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

RangeCheck check_range_sufficient(const DiscreteLaw& law, const ContinuousTarget& target,
                                  const WeightFunction& weight) {
  validate_law(law);
  if (law.truncation)
    fail(ErrorKind::unsupported, "range conditions need a finite support, law was truncated");
  RangeCheck out;
  const std::size_t n = law.size();
  if (n < 3) return out;
  const ConditionReport cond = check_conditions(law, target, weight);
  if (!cond.pass) return out;

  const Row r = tabulate(full_view(law), target, weight);
  const std::size_t l = n - 1;
  const double rel = 1e-12;
  auto d = [&](std::size_t i) { return r.gap(i); };
  auto g = [&](std::size_t i) { return r.p[i] * r.w[i]; };

  // Upper bound pi <= 1.
  std::vector<double> cu, du, cl, dl;
  {
    CompensatedSum sp;
    for (std::size_t i = 0; i < l; ++i) {
      sp.add(r.s[i] * r.p[i]);
      cu.push_back(g(i) - d(i + 1) * sp.value());
    }
    for (std::size_t i = 1; i < l; ++i) du.push_back(g(i) / d(i + 1) - g(i - 1) / d(i) - r.s[i] * r.p[i]);
  }
  {
    CompensatedSum sp;
    for (std::size_t i = 1; i <= l; ++i) {
      sp.add(r.s[i - 1] * r.p[i - 1]);
      cl.push_back(g(i) - d(i) * sp.value());
    }
    for (std::size_t i = 1; i < l; ++i) dl.push_back(g(i + 1) / d(i + 1) - g(i) / d(i) - r.s[i] * r.p[i]);
  }
  const double tcu = rel * std::max(scale_of(cu), 1e-300);
  const double tdu = rel * std::max(scale_of(du), 1e-300);
  const double tcl = rel * std::max(scale_of(cl), 1e-300);
  const double tdl = rel * std::max(scale_of(dl), 1e-300);
  auto le = [&](double a, double b) { return a <= b + rel * std::max(std::abs(a), std::abs(b)); };

  const bool left_end = le(r.w[0], d(1) * r.s[0]);
  const double upper_lhs = g(l - 1), upper_rhs = -d(l) * r.s[l] * r.p[l];
  if (matches(cu, {{Sign::neg, true}, {Sign::pos, false}}, tcu))
    out.upper_condition = 1;
  else if (left_end && le(upper_lhs, upper_rhs) &&
           matches(du, {{Sign::neg, false}, {Sign::pos, false}}, tdu))
    out.upper_condition = 2;
  else if (left_end && le(upper_rhs, upper_lhs) &&
           matches(du, {{Sign::neg, false}, {Sign::pos, false}, {Sign::neg, false}}, tdu))
    out.upper_condition = 3;

  const bool right_end = le(r.w[l], -d(l) * r.s[l]);
  const double lower_lhs = g(1), lower_rhs = d(1) * r.s[0] * r.p[0];
  if (matches(cl, {{Sign::pos, false}, {Sign::neg, true}}, tcl))
    out.lower_condition = 1;
  else if (right_end && le(lower_lhs, lower_rhs) &&
           matches(dl, {{Sign::neg, false}, {Sign::pos, false}}, tdl))
    out.lower_condition = 2;
  else if (right_end && le(lower_rhs, lower_lhs) &&
           matches(dl, {{Sign::pos, false}, {Sign::neg, false}, {Sign::pos, false}}, tdl))
    out.lower_condition = 3;

  out.sign_tests_prove = out.upper_condition > 0 && out.lower_condition > 0;

  const WeightSequence ws = compute_weights(law, target, weight);
  out.min_weight = *std::min_element(ws.values.begin(), ws.values.end());
  out.max_weight = *std::max_element(ws.values.begin(), ws.values.end());
  out.enumeration_violation = !within_unit_interval(ws.values);

  if (out.sign_tests_prove)
    out.verdict = RangeVerdict::proved_in_unit_interval;
  else if (out.enumeration_violation)
    out.verdict = RangeVerdict::proved_violation;
  return out;
}

std::pair<double, double> third_moment_identity(const DiscreteLaw& integer_law) {
  validate_law(integer_law);
  for (std::size_t i = 1; i < integer_law.size(); ++i)
    if (integer_law.points[i] - integer_law.points[i - 1] != 1.0)
      fail(ErrorKind::invalid_parameter, "third moment identity needs consecutive integer atoms");
  const ContinuousTarget z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const StandardizedLaw st = standardize(integer_law, z);
  const WeightSequence ws = compute_weights(st.law, z, stein_kernel_weight(z));
  const SupportView v = full_view(st.law);
  const std::vector<double> pi = joined(ws);
  CompensatedSum e;
  for (std::size_t i = 0; i < v.size(); ++i) e.add(v.masses[i] * pi[i]);
  const Moments mo = moments(integer_law);
  return {e.value(), 0.5 * (1.0 + mo.third_central / mo.variance)};
}

double clt_weights_expectation(const DiscreteLaw& summand) {
  const ContinuousTarget z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  const StandardizedLaw st = standardize(summand, z);
  const WeightSequence ws = compute_weights(st.law, z, stein_kernel_weight(z));
  const SupportView v = full_view(st.law);
  const std::vector<double> pi = joined(ws);
  CompensatedSum e;
  for (std::size_t i = 0; i < v.size(); ++i)
    e.add(v.masses[i] * (std::abs(pi[i]) + std::abs(1.0 - pi[i])));
  return e.value();
}

WeightSequence brute_force_weights(const DiscreteLaw& law, const ContinuousTarget& target,
                                   const WeightFunction& weight) {
  validate_law(law);
  const SupportView view = full_view(law);
  const Row r = tabulate(view, target, weight);
  const std::size_t n = r.size();
  constexpr std::size_t kMaxDense = 600;
  if (n > kMaxDense)
    fail(ErrorKind::unsupported, "dense solve limited to " + std::to_string(kMaxDense) + " atoms");
  if (n < 2) fail(ErrorKind::invalid_parameter, "linear solve needs at least two atoms");

  // The null direction of the homogeneous system is pi_i ~ 1/(w_i p_i), so the tails are as
  // ill-conditioned as the mass range. Both moment conditions hold only up to rounding in double
  // data; left alone, the defect lands on the far tail. The right-hand side s_j p_j is therefore
  // corrected by (k0 + k1 x_j)|s_j p_j| so that sum_j s_j p_j = 0 and
  // sum_j (x_j s_j + w_j) p_j = 0 hold exactly, and the system is solved in 100-digit arithmetic.
  // The last row is then implied by the others and is replaced by pi_0 = 1.
  using Big = boost::multiprecision::cpp_bin_float_100;
  using BigMatrix = Eigen::Matrix<Big, Eigen::Dynamic, Eigen::Dynamic>;
  using BigVector = Eigen::Matrix<Big, Eigen::Dynamic, 1>;
  const Eigen::Index N = static_cast<Eigen::Index>(n);
  // Positions rebuilt from the gaps the rows use, so that the telescoping is exact.
  std::vector<Big> xs(n), sp(n);
  xs[0] = view.points[0];
  for (std::size_t j = 1; j < n; ++j) xs[j] = xs[j - 1] + Big(r.gap(j));
  Big m0 = 0, m1 = 0, a00 = 0, a01 = 0, a11 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Big& x = xs[j];
    sp[j] = Big(r.s[j]) * Big(r.p[j]);
    const Big wgt = abs(sp[j]);
    m0 += sp[j];
    m1 += x * sp[j] + Big(r.w[j]) * Big(r.p[j]);
    a00 += wgt;
    a01 += wgt * x;
    a11 += wgt * x * x;
  }
  const Big det = a00 * a11 - a01 * a01;
  if (det > 0) {
    const Big k0 = (m0 * a11 - m1 * a01) / det;
    const Big k1 = (a00 * m1 - a01 * m0) / det;
    for (std::size_t j = 0; j < n; ++j) sp[j] -= (k0 + k1 * xs[j]) * abs(sp[j]);
  }
  BigMatrix a = BigMatrix::Zero(N, N);
  BigVector rhs = BigVector::Zero(N);
  auto g = [&](std::size_t i) { return Big(r.w[i]) * Big(r.p[i]); };
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Eigen::Index J = static_cast<Eigen::Index>(j);
    Big c = sp[j];
    if (j >= 1) {
      const Big d = r.gap(j);
      a(J, J - 1) += g(j - 1) / d;
      a(J, J) -= g(j) / d;
      c += g(j) / d;
    }
    const Big d = r.gap(j + 1);
    a(J, J) -= g(j) / d;
    a(J, J + 1) += g(j + 1) / d;
    c -= g(j + 1) / d;
    rhs(J) = -c;
  }
  a(N - 1, 0) = 1;
  rhs(N - 1) = 1;
  const BigVector big = a.partialPivLu().solve(rhs);
  Eigen::VectorXd sol(N);
  for (Eigen::Index i = 0; i < N; ++i) sol(i) = static_cast<double>(big(i));
  std::vector<double> pi(sol.data(), sol.data() + n);

  WeightSequence ws;
  ws.values.assign(pi.begin(), pi.begin() + static_cast<std::ptrdiff_t>(view.retained));
  ws.tail_values.assign(pi.begin() + static_cast<std::ptrdiff_t>(view.retained), pi.end());
  ws.source = WeightSource::linear_solve;
  ws.in_unit_interval = within_unit_interval(pi);
  ws.max_residual = residual(law, ws, target, weight);
  return ws;
}

CompositionResult clt_composition_weights(const std::vector<DiscreteLaw>& integer_summands) {
  if (integer_summands.empty()) fail(ErrorKind::invalid_parameter, "no summands");
  const ContinuousTarget z = make_target(TargetFamily::normal, {{"mu", 0.0}, {"sigma", 1.0}});
  struct Part {
    std::vector<long long> values;
    std::vector<double> masses, pi;
    double mean, var;
  };
  std::vector<Part> parts;
  double total_var = 0.0, total_mean = 0.0;
  std::size_t combos = 1;
  for (const DiscreteLaw& y : integer_summands) {
    validate_law(y);
    if (y.truncation) fail(ErrorKind::unsupported, "composition needs finite summands");
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y.points[i] != std::round(y.points[i]) || (i > 0 && y.points[i] - y.points[i - 1] != 1.0))
        fail(ErrorKind::invalid_parameter, "summands must live on consecutive integers");
    }
    Part part;
    const Moments mo = moments(y);
    part.mean = mo.mean;
    part.var = mo.variance;
    const StandardizedLaw st = standardize(y, z);
    part.pi = compute_weights(st.law, z, stein_kernel_weight(z)).values;
    for (double v : y.points) part.values.push_back(static_cast<long long>(v));
    part.masses = y.masses;
    total_var += part.var;
    total_mean += part.mean;
    combos *= y.size();
    if (combos > 50'000'000) fail(ErrorKind::unsupported, "composition enumeration too large");
    parts.push_back(std::move(part));
  }

  // Dynamic programming over partial sums: mass and mass-weighted sum of the mixture of weights.
  std::map<long long, std::pair<double, double>> acc = {{0, {1.0, 0.0}}};
  for (const Part& part : parts) {
    std::map<long long, std::pair<double, double>> next;
    const double share = part.var / total_var;
    for (const auto& [k, mw] : acc) {
      for (std::size_t i = 0; i < part.values.size(); ++i) {
        auto& slot = next[k + part.values[i]];
        const double m = mw.first * part.masses[i];
        slot.first += m;
        slot.second += mw.second * part.masses[i] + m * share * part.pi[i];
      }
    }
    acc = std::move(next);
  }

  const double s = std::sqrt(total_var);
  std::vector<double> pts, masses, pi;
  for (const auto& [k, mw] : acc) {
    pts.push_back((static_cast<double>(k) - total_mean) / s);
    masses.push_back(mw.first);
    pi.push_back(mw.second / mw.first);
  }
  const double mass_total = compensated_sum(masses);
  for (double& m : masses) m /= mass_total;

  CompositionResult out;
  out.law = make_custom_law(std::move(pts), std::move(masses));
  out.weights.values = std::move(pi);
  out.weights.source = WeightSource::clt_composition;
  out.weights.in_unit_interval = within_unit_interval(out.weights.values);
  out.weights.max_residual = residual(out.law, out.weights, z, stein_kernel_weight(z));
  return out;
}

}  // namespace stein1d
