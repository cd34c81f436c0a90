#include "stein1d/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace stein1d {

namespace {

// int_l^r |L - F_Z| for l < r (either may be infinite), the step level L constant.
void add_panel(const ContinuousTarget& t, double l, double r, double level, double tol,
               W1Result& out, CompensatedSum& acc) {
  if (!(r > l)) return;
  // Outside the support F_Z is 0 or 1 and the integrand is constant.
  if (l < t.a) {
    const double stop = std::min(r, t.a);
    if (level != 0.0) {
      if (!std::isfinite(stop - l)) fail(ErrorKind::domain, "W1 diverges: mass placed at infinity");
      acc.add(level * (stop - l));
    }
    l = stop;
    if (!(r > l)) return;
  }
  if (r > t.b) {
    const double start = std::max(l, t.b);
    if (level != 1.0) {
      if (!std::isfinite(r - start)) fail(ErrorKind::domain, "W1 diverges: mass placed at infinity");
      acc.add((1.0 - level) * (r - start));
    }
    r = start;
    if (!(r > l)) return;
  }
  // Crossing F_Z(c) = level inside (l, r).
  auto gap = [&](double z) { return t.cdf(z) - level; };
  double c = r;
  const double fl = std::isfinite(l) ? gap(l) : -level;
  const double fr = std::isfinite(r) ? gap(r) : 1.0 - level;
  if (fl < 0.0 && fr > 0.0) {
    double lo = l, hi = r;
    const double scale = t.variance ? std::sqrt(*t.variance) : 1.0;
    if (!std::isfinite(lo)) {
      lo = std::min(hi, t.mean) - scale;
      while (gap(lo) >= 0.0) lo -= 2.0 * (std::abs(lo) + scale);
    }
    if (!std::isfinite(hi)) {
      hi = std::max(lo, t.mean) + scale;
      while (gap(hi) <= 0.0) hi += 2.0 * (std::abs(hi) + scale);
    }
    c = bisect(gap, lo, hi, 1e-12 * std::max(1.0, std::abs(0.5 * (lo + hi))));
  } else if (fl >= 0.0) {
    c = l;
  }
  QuadOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = 0.0;
  opts.max_evals = 2'000'000;
  auto run = [&](double from, double to, double sign) {
    if (!(to > from)) return;
    QuadResult q;
    if (level == 0.0 && !std::isfinite(from)) {
      q = integrate([&](double z) { return t.cdf(z); }, from, to, opts);
    } else if (level == 1.0 && !std::isfinite(to)) {
      q = integrate([&](double z) { return t.sf(z); }, from, to, opts);
    } else {
      q = integrate([&](double z) { return sign * (t.cdf(z) - level); }, from, to, opts);
    }
    if (!q.converged)
      fail(ErrorKind::numerical, "W1 quadrature missed tolerance on [" + std::to_string(from) +
                                     ", " + std::to_string(to) + "]");
    acc.add(q.value);
    out.error_estimate += q.error;
    ++out.panels;
  };
  run(l, c, -1.0);
  run(c, r, 1.0);
}

}  // namespace

W1Result exact_w1(const DiscreteLaw& law, const ContinuousTarget& target, double tol) {
  validate_law(law);
  if (!(tol > 0.0)) fail(ErrorKind::invalid_parameter, "tolerance must be > 0");
  W1Result out;
  CompensatedSum acc, level;
  const std::size_t n = law.size();
  const double per_panel = tol / static_cast<double>(2 * (n + 1));
  add_panel(target, -kInf, law.points[0], 0.0, per_panel, out, acc);
  for (std::size_t i = 0; i < n; ++i) {
    level.add(law.masses[i]);
    const double lv = i + 1 == n ? 1.0 : std::min(1.0, level.value());
    const double r = i + 1 < n ? law.points[i + 1] : kInf;
    add_panel(target, law.points[i], r, lv, per_panel, out, acc);
  }
  out.value = acc.value();
  return out;
}

double w1_discrete(const std::vector<double>& xa, const std::vector<double>& pa,
                   const std::vector<double>& xb, const std::vector<double>& pb) {
  if (xa.size() != pa.size() || xb.size() != pb.size() || xa.empty() || xb.empty())
    fail(ErrorKind::invalid_parameter, "w1_discrete: malformed laws");
  std::size_t i = 0, j = 0;
  CompensatedSum fa, fb, total;
  double z = std::min(xa[0], xb[0]);
  while (i < xa.size() || j < xb.size()) {
    const double next = std::min(i < xa.size() ? xa[i] : kInf, j < xb.size() ? xb[j] : kInf);
    total.add(std::abs(fa.value() - fb.value()) * (next - z));
    z = next;
    while (i < xa.size() && xa[i] == next) fa.add(pa[i++]);
    while (j < xb.size() && xb[j] == next) fb.add(pb[j++]);
  }
  return total.value();
}

double truncation_w1(const DiscreteLaw& law) {
  if (!law.truncation || law.truncation->tail_points.empty()) return 0.0;
  const SupportView v = full_view(law);
  return w1_discrete(law.points, law.masses, v.points, v.masses);
}

double lipschitz_gap(const DiscreteLaw& law, const ContinuousTarget& target,
                     std::size_t probe_count) {
  validate_law(law);
  if (probe_count < 1) fail(ErrorKind::invalid_parameter, "probe_count must be >= 1");
  CompensatedSum mx;
  for (std::size_t i = 0; i < law.size(); ++i) mx.add(law.masses[i] * law.points[i]);
  double best = std::abs(mx.value() - target.mean);
  auto abs_moment = [&](double t) {  // E|Z - t|
    if (t <= target.a) return target.mean - t;
    if (t >= target.b) return t - target.mean;
    const auto [g1, g2] = gamma12(target, t);
    return g1 + g2;
  };
  const double lo = law.points.front(), hi = law.points.back();
  for (std::size_t k = 0; k < probe_count; ++k) {
    const double t = probe_count == 1 ? 0.5 * (lo + hi)
                                      : lo + (hi - lo) * static_cast<double>(k) /
                                                 static_cast<double>(probe_count - 1);
    CompensatedSum e;
    for (std::size_t i = 0; i < law.size(); ++i) e.add(law.masses[i] * std::abs(law.points[i] - t));
    best = std::max(best, std::abs(e.value() - abs_moment(t)));
  }
  return best;
}

double target_expectation(const ContinuousTarget& target, const TestFunction& h) {
  QuadOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  opts.max_evals = 2'000'000;
  const double split = target.mean;
  auto f = [&](double y) {
    const double q = target.density(y);
    return q == 0.0 ? 0.0 : h(y) * q;
  };
  return integrate_or_throw(f, target.a, split, opts) + integrate_or_throw(f, split, target.b, opts);
}

namespace {

double stein_integral(const ContinuousTarget& target, const TestFunction& h, double eh, double x) {
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-13;
  opts.max_evals = 2'000'000;
  auto f = [&](double y) {
    const double q = target.density(y);
    return q == 0.0 ? 0.0 : (h(y) - eh) * q;
  };
  if (target.cdf(x) <= 0.5) return integrate_or_throw(f, target.a, x, opts);
  return -integrate_or_throw(f, x, target.b, opts);
}

}  // namespace

SteinSolution solve_stein_equation(const ContinuousTarget& target, const WeightFunction& weight,
                                   const TestFunction& h, double x) {
  if (!target.in_interior(x)) fail(ErrorKind::domain, "x must lie inside the support");
  const double qw = target.density(x) * weight.w(x);
  if (!(qw > 1e-280)) {
    const double dist = std::min(x - target.a, target.b - x);
    fail(ErrorKind::domain, "q(x) w(x) = " + std::to_string(qw) + " too small for division at x = " +
                                std::to_string(x) + " (distance to support edge " +
                                std::to_string(dist) + ")");
  }
  SteinSolution s;
  s.target_mean_of_h = target_expectation(target, h);
  s.value = stein_integral(target, h, s.target_mean_of_h, x) / qw;
  return s;
}

double stein_ode_residual(const ContinuousTarget& target, const WeightFunction& weight,
                          const TestFunction& h, double x) {
  const double eh = target_expectation(target, h);
  auto f = [&](double y) {
    return stein_integral(target, h, eh, y) / (target.density(y) * weight.w(y));
  };
  double step = 1e-4 * std::max(1.0, std::abs(x));
  step = std::min({step, 0.25 * (x - target.a), 0.25 * (target.b - x)});
  const double d = (f(x + step) - f(x - step)) / (2.0 * step);
  return std::abs(weight.w(x) * d + eval_score(target, weight, x) * f(x) - (h(x) - eh));
}

double stein_solution_envelope(const ContinuousTarget& target, double x) {
  const auto [g1, g2] = gamma12(target, x);
  return (target.sf(x) * g1 + target.cdf(x) * g2) / (target.density(x) * target.stein_kernel(x));
}

}  // namespace stein1d
