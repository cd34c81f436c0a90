#include "stein1d/builder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stein1d {

namespace {

std::string at(std::size_t i) { return " at index " + std::to_string(i); }

}  // namespace

Grid uniform_grid(double start, double delta, std::size_t count) {
  if (!(delta > 0.0) || count < 2) fail(ErrorKind::invalid_parameter, "grid needs delta > 0, count >= 2");
  Grid g;
  for (std::size_t i = 0; i < count; ++i) g.points.push_back(start + delta * static_cast<double>(i));
  return g;
}

Grid unbounded_grid(double start, double delta) {
  if (!(delta > 0.0)) fail(ErrorKind::invalid_parameter, "grid needs delta > 0");
  Grid g;
  g.start = start;
  g.delta = delta;
  return g;
}

DiscreteLaw build_discrete(const ContinuousTarget& target, const WeightFunction& weight,
                           const Grid& grid, double tail_tol) {
  const bool unbounded = grid.infinite();
  if (unbounded && std::isfinite(target.b))
    fail(ErrorKind::invalid_parameter, "unbounded grid on a target with finite right end");
  if (!unbounded && grid.points.size() < 2)
    fail(ErrorKind::invalid_parameter, "grid needs at least two points");

  auto point = [&](std::size_t i) {
    return unbounded ? *grid.start + *grid.delta * static_cast<double>(i) : grid.points[i];
  };
  std::vector<double> xs, w, s, logp;
  auto push = [&](std::size_t i) {
    const double x = point(i);
    if (!target.in_closure(x)) fail(ErrorKind::invalid_parameter, "grid point outside support" + at(i));
    if (i > 0 && !(x > xs.back())) fail(ErrorKind::invalid_parameter, "grid not increasing" + at(i));
    xs.push_back(x);
    w.push_back(weight.w(x));
    s.push_back(eval_score(target, weight, x));
  };
  auto gap = [&](std::size_t i) { return xs[i] - xs[i - 1]; };

  push(0);
  push(1);
  logp.push_back(0.0);
  const double first = gap(1) * s[0] - w[0];
  if (!(first > 0.0))
    fail(ErrorKind::invalid_parameter, "infeasible grid: delta_1 s_0 - w_0 = " +
                                           std::to_string(first) + " must be > 0" + at(0));
  if (!(w[1] > 0.0)) fail(ErrorKind::invalid_parameter, "weight not positive" + at(1));
  logp.push_back(std::log(first) - std::log(w[1]));

  const std::size_t finite_count = unbounded ? 0 : grid.points.size();
  double top = std::max(logp[0], logp[1]);
  for (std::size_t i = 2;; ++i) {
    if (!unbounded && i >= finite_count) break;
    if (i >= kMaxAtoms)
      fail(ErrorKind::numerical, "builder masses are not summable within " +
                                     std::to_string(kMaxAtoms) + " atoms");
    push(i);
    const double lead = w[i - 1] + gap(i - 1) * s[i - 1];
    if (!(lead > 0.0))
      fail(ErrorKind::invalid_parameter, "infeasible grid: w_i + delta_i s_i = " +
                                             std::to_string(lead) + " must be > 0" + at(i - 1));
    if (!(w[i] > 0.0)) fail(ErrorKind::invalid_parameter, "weight not positive" + at(i));
    double lp;
    if (i == 2) {
      // p_2 w_2 delta_1 / delta_2 = (w_1 + delta_1 s_1) p_1 + w_0 p_0
      const double rhs = lead * std::exp(logp[1] - logp[0]) + w[0];
      lp = logp[0] + std::log(rhs) + std::log(gap(2) / (w[2] * gap(1)));
    } else {
      lp = logp[i - 1] + std::log(gap(i)) - std::log(w[i]) + std::log(lead / gap(i - 1));
    }
    logp.push_back(lp);
    top = std::max(top, lp);
    if (unbounded && lp < logp[i - 1] && lp < top + kTailExtensionLog) break;
  }

  if (!unbounded) {
    const std::size_t l = xs.size() - 1;
    const double end = w[l] + gap(l) * s[l];
    if (std::abs(end) > 1e-9 * std::max(1.0, std::abs(w[l])))
      fail(ErrorKind::invalid_parameter, "infeasible grid: w_l + delta_l s_l = " +
                                             std::to_string(end) + " must vanish" + at(l));
  }

  ParamMap params = {{"x0", xs[0]}};
  if (unbounded) params["delta"] = *grid.delta;
  if (!unbounded) {
    DiscreteLaw law;
    law.family = DiscreteFamily::custom;
    law.params = params;
    law.points = xs;
    const double ref = *std::max_element(logp.begin(), logp.end());
    CompensatedSum total;
    for (double lp : logp) total.add(std::exp(lp - ref));
    for (double lp : logp) law.masses.push_back(std::exp(lp - ref) / total.value());
    validate_law(law);
    return law;
  }
  return truncate_sequence(DiscreteFamily::custom, params, xs, logp, tail_tol);
}

IpGrid solve_ip_grid(const ContinuousTarget& target, std::optional<std::size_t> ell) {
  if (!target.ip) fail(ErrorKind::invalid_parameter, "grid solve needs a quadratic Stein kernel");
  if (!std::isfinite(target.a)) fail(ErrorKind::invalid_parameter, "grid solve needs a finite left end");
  const IpCoeffs c = *target.ip;
  const double a = target.a;
  const double m = target.mean;
  IpGrid out;
  if (std::isfinite(target.b)) {
    if (!ell || *ell < 1) fail(ErrorKind::invalid_parameter, "finite support needs ell >= 1");
    const double l = static_cast<double>(*ell);
    auto g = [&](double d) { return c(a + d * l) + d * (m - a - d * l); };
    out.delta = bisect(g, (m - a) / l, (target.b - a) / l);
    out.ell = ell;
    out.endpoint_residual = g(out.delta);
    if (!(a + out.delta * l < target.b))
      fail(ErrorKind::numerical, "solved grid reaches the right end of the support");
    return out;
  }
  if (c.alpha >= 1.0)
    fail(ErrorKind::invalid_parameter, "unbounded grid needs a quadratic coefficient below 1");
  // inf over x > mean of tau(x) / (x - mean)
  if (c.alpha <= 0.0) {
    out.delta = c.beta;
  } else {
    const double x = m + std::sqrt(m * m + (c.beta * m + c.gamma) / c.alpha);
    out.delta = 2.0 * c.alpha * x + c.beta;
  }
  if (!(out.delta > 0.0)) fail(ErrorKind::numerical, "no positive feasible mesh");
  return out;
}

std::vector<double> miw_points(std::size_t n) {
  if (n < 3) fail(ErrorKind::invalid_parameter, "miw: requires n >= 3");
  using real = long double;
  // Final partial sum for a given x_1, or +1 once a partial sum turns nonnegative early.
  auto shoot = [n](real x1, std::vector<real>* out) -> real {
    real x = x1, sum = x1;
    if (out) out->assign(1, x1);
    for (std::size_t i = 1; i < n; ++i) {
      if (sum >= 0) return 1;
      x -= 1 / sum;
      sum += x;
      if (out) out->push_back(x);
    }
    return sum;
  };
  real lo = -1;
  while (shoot(lo, nullptr) >= 0) {
    lo *= 2;
    if (lo < -1e6) fail(ErrorKind::numerical, "miw: no lower bracket found");
  }
  real hi = -1e-12L;
  if (shoot(hi, nullptr) < 0)
    fail(ErrorKind::numerical, "miw: bracket [" + std::to_string(static_cast<double>(lo)) + ", " +
                                   std::to_string(static_cast<double>(hi)) + "] has no sign change");
  for (int it = 0; it < 200; ++it) {
    const real mid = (lo + hi) / 2;
    if (!(mid > lo && mid < hi)) break;
    if (shoot(mid, nullptr) < 0)
      lo = mid;
    else
      hi = mid;
  }
  std::vector<real> xs;
  shoot(lo, &xs);
  if (xs.size() != n) fail(ErrorKind::numerical, "miw: shooting did not produce n points");
  // The configuration is symmetric; averaging with its mirror removes the residual drift.
  std::vector<double> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = static_cast<double>((xs[i] - xs[n - 1 - i]) / 2);
  CompensatedSum sum, sq, prefix;
  double gap_defect = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    prefix.add(pts[i]);
    gap_defect = std::max(gap_defect, std::abs((pts[i + 1] - pts[i]) * prefix.value() + 1.0));
  }
  if (gap_defect > 1e-8)
    fail(ErrorKind::numerical, "miw: gap recursion defect " + std::to_string(gap_defect));
  for (double x : pts) {
    sum.add(x);
    sq.add(x * x);
  }
  const double nn = static_cast<double>(n);
  if (std::abs(sum.value()) > 1e-12)
    fail(ErrorKind::numerical, "miw: sum of points " + std::to_string(sum.value()));
  if (std::abs(sq.value() / nn - (nn - 1.0) / nn) > 1e-9)
    fail(ErrorKind::numerical, "miw: second moment " + std::to_string(sq.value() / nn) +
                                   " differs from (n-1)/n");
  return pts;
}

}  // namespace stein1d
