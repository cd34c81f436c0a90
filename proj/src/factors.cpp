#include "stein1d/factors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stein1d {

namespace {

double require_param(const ContinuousTarget& t, const std::string& key) { return param(t.params, key); }

void append_chebyshev(double lo, double hi, std::size_t n, std::vector<double>& out) {
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    out.push_back(0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(theta));
  }
}

// Point where the density falls to e^-700 of its value at `from` (or the support end).
double density_cutoff(const ContinuousTarget& t, double from, double direction, double scale) {
  const double floor = t.log_density(from) - 700.0;
  auto below = [&](double x) { return !t.in_interior(x) || t.log_density(x) < floor; };
  double inside = from, step = scale;
  double x = from + direction * step;
  for (int it = 0; it < 200 && !below(x); ++it) {
    inside = x;
    step *= 1.5;
    x = from + direction * step;
  }
  if (!below(x)) return x;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + x);
    if (mid == inside || mid == x) break;
    (below(mid) ? x : inside) = mid;
  }
  return inside;
}

}  // namespace

std::string to_string(FactorProvenance p) {
  switch (p) {
    case FactorProvenance::closed_form: return "closed_form";
    case FactorProvenance::numeric_sup: return "numeric_sup";
    case FactorProvenance::literature_constant: return "literature_constant";
  }
  return "closed_form";
}

std::pair<double, double> beta_b0b1(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorKind::invalid_parameter, "beta constants need shapes > 0");
  const bool a_small = a <= 2.0;
  const bool b_small = b <= 2.0;
  const double s = a + b - 2.0;
  double b0, b1;
  if (a_small && b_small) {
    b0 = 4.0 * std::max(std::abs(a - 1.0), std::abs(b - 1.0));
    b1 = 4.0 * (1.0 + std::max(a, b) / (a + b));
  } else if (!a_small && b_small) {
    b0 = s * std::max((a - 1.0) / ((a - 2.0) * (a - 2.0)), std::abs(b - 1.0) / (b * b));
    const double m = std::min(a - 2.0, b);
    b1 = s * s / (m * m) + 2.0 * std::max(a / (a - 2.0), 1.0);
  } else if (a_small && !b_small) {
    b0 = s * std::max(std::abs(a - 1.0) / (a * a), (b - 1.0) / ((b - 2.0) * (b - 2.0)));
    const double m = std::min(a, b - 2.0);
    b1 = s * s / (m * m) + 2.0 * std::max(1.0, b / (b - 2.0));
  } else {
    b0 = s * std::max(1.0 / (a - 1.0), 1.0 / (b - 1.0));
    const double m = std::min(a - 1.0, b - 1.0);
    b1 = s * s / (m * m) + 2.0 * std::max(a / (a - 1.0), b / (b - 1.0));
  }
  return {b0, b1};
}

SteinFactors closed_form_factors(const ContinuousTarget& target, WeightKind weight_kind) {
  SteinFactors f;
  f.provenance = FactorProvenance::closed_form;
  const bool tau = weight_kind == WeightKind::stein_kernel;
  switch (target.family) {
    case TargetFamily::normal:
      // tau = sigma^2 is constant, so the kernel weight of a standard normal is the unit weight.
      if (weight_kind == WeightKind::constant_one ||
          (tau && require_param(target, "sigma") == 1.0)) {
        f.c0 = 1.0;
        f.c1 = 0.0;
        f.c_combined = 1.0;
        return f;
      }
      break;
    case TargetFamily::exponential:
      if (tau) {
        f.c0 = 1.5;
        f.c1 = 0.0;
        f.c_combined = 1.5;
        return f;
      }
      break;
    case TargetFamily::gamma:
      if (tau) {
        f.c0 = 2.0;
        f.c1 = 0.0;
        f.c_combined = 2.0;
        return f;
      }
      break;
    case TargetFamily::beta:
      if (tau) {
        const double al = require_param(target, "alpha");
        const double be = require_param(target, "beta");
        const auto [b0, b1] = beta_b0b1(al, be);
        const double general = 1.0 + (b0 + b1) / 2.0;
        if (al < 1.0 && be < 1.0) {
          f.tau_prime_fprime = 2.0 / (1.0 + std::min(al, be));
          f.c0 = 1.0 + 1.0 / (1.0 + std::min(al, be));
        } else {
          f.c0 = general;
        }
        f.c1 = (b0 + b1) / 3.0;
        f.c_combined = general;
        return f;
      }
      break;
    default:
      break;
  }
  fail(ErrorKind::unsupported, "no tabulated Stein factors for " + target.describe() +
                                   " with this weight; use the numeric path");
}

std::vector<double> sup_grid(const ContinuousTarget& t, const GridSpec& spec, GridInfo* info) {
  if (spec.interior_points < 2) fail(ErrorKind::invalid_parameter, "grid needs at least 2 points");
  const double scale = t.variance ? std::sqrt(*t.variance) : 1.0;
  const double lo = std::isfinite(t.a) ? t.a : density_cutoff(t, t.mean, -1.0, scale);
  const double hi = std::isfinite(t.b) ? t.b : density_cutoff(t, t.mean, 1.0, scale);
  std::vector<double> pts;
  append_chebyshev(lo, hi, spec.interior_points, pts);
  const double edge = spec.edge_min * scale;
  double closest = 0.0;
  auto refine = [&](double end, double dir) {
    const double reach = std::min(scale, 0.5 * (hi - lo));
    const double ratio = std::pow(10.0, -1.0 / static_cast<double>(spec.per_decade));
    for (double d = reach; d >= edge; d *= ratio) pts.push_back(end + dir * d);
    closest = closest == 0.0 ? edge : std::min(closest, edge);
  };
  if (std::isfinite(t.a)) refine(t.a, 1.0);
  if (std::isfinite(t.b)) refine(t.b, -1.0);
  std::erase_if(pts, [&](double x) { return !t.in_interior(x); });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (info) {
    info->points = pts.size();
    info->min_edge_distance = closest;
    info->lower = pts.front();
    info->upper = pts.back();
  }
  return pts;
}

namespace {

template <class F>
NumericSup grid_sup(const ContinuousTarget& t, const GridSpec& spec, F value_at,
                    const char* what) {
  NumericSup out;
  const std::vector<double> pts = sup_grid(t, spec, &out.grid);
  out.value = -kInf;
  for (double x : pts) {
    const double v = value_at(x);
    if (!std::isfinite(v))
      fail(ErrorKind::numerical, std::string(what) + " is not finite at x = " + std::to_string(x) +
                                     " (sup diverges on the grid)");
    if (v > out.value) {
      out.value = v;
      out.argmax = x;
    }
  }
  return out;
}

}  // namespace

NumericSup numeric_fprime_bound(const ContinuousTarget& target, const GridSpec& spec) {
  return grid_sup(
      target, spec,
      [&](double x) {
        const auto [g1, g2] = gamma12(target, x);
        const double tau = target.stein_kernel(x);
        return 2.0 * g1 * g2 / (target.density(x) * tau * tau);
      },
      "2 Gamma_1 Gamma_2 / (q tau^2)");
}

NumericSup fprime_tau_proxy_sup(const ContinuousTarget& target, const GridSpec& spec) {
  return grid_sup(
      target, spec,
      [&](double x) {
        const double g1 = gamma12(target, x).first;
        const double tau = target.stein_kernel(x);
        const double q = target.density(x);
        const double id = target.mean - x;
        const double sf = target.sf(x);
        const double a = id / tau + id * id * sf / (q * tau * tau) + sf / (q * tau);
        return std::abs(a) * g1 + std::abs(1.0 - a * g1) + 1.0;
      },
      "(f_h' tau)' bound");
}

SteinFactors numeric_factors(const ContinuousTarget& target, const WeightFunction& weight,
                             const GridSpec& spec) {
  GridInfo info;
  const std::vector<double> pts = sup_grid(target, spec, &info);
  double fp = 0.0, wfp = 0.0, fwp = 0.0, w2 = 0.0;
  for (double x : pts) {
    const auto [g1, g2] = gamma12(target, x);
    const double q = target.density(x);
    const double F = target.cdf(x), Fb = target.sf(x);
    const double w = weight.w(x);
    const double s = eval_score(target, weight, x);
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    double ds;
    if (target.in_interior(x - h) && target.in_interior(x + h))
      ds = (eval_score(target, weight, x + h) - eval_score(target, weight, x - h)) / (2.0 * h);
    else
      ds = (eval_score(target, weight, x + (target.in_interior(x + h) ? h : 0.0)) -
            eval_score(target, weight, x - (target.in_interior(x - h) ? h : 0.0))) / h;
    const double bfp = (1.0 / w + s * Fb / (q * w * w)) * g1 + (1.0 / w - s * F / (q * w * w)) * g2;
    const double bfwp = std::abs(s / w + s * s * Fb / (q * w * w) - ds * Fb / (w * q)) * g1 +
                        std::abs(s / w - s * s * F / (q * w * w) + ds * F / (w * q)) * g2 + 1.0;
    if (!std::isfinite(bfp) || !std::isfinite(bfwp))
      fail(ErrorKind::numerical, "factor bounds diverge at x = " + std::to_string(x));
    fp = std::max(fp, bfp);
    wfp = std::max(wfp, std::abs(weight.w_prime(x)) * bfp);
    fwp = std::max(fwp, bfwp);
    w2 = std::max(w2, std::abs(weight.w_second(x)));
  }
  SteinFactors f;
  f.provenance = FactorProvenance::numeric_sup;
  f.c0 = 0.5 * (wfp + fwp);
  f.c1 = fp * w2 / 6.0;
  f.c_combined = f.c0;
  if (f.c1 > 0.0) f.c_combined.reset();
  f.grid = info;
  return f;
}

SteinFactors piecewise_factors(const DiscreteLaw& law,
                               const std::function<double(double)>& fpp_bound,
                               const WeightFunction& weight, std::size_t samples) {
  if (!weight.constant)
    fail(ErrorKind::invalid_parameter, "piecewise factors need a constant weight");
  if (samples < 1) fail(ErrorKind::invalid_parameter, "piecewise factors need samples >= 1");
  const double w = *weight.constant;
  const SupportView v = full_view(law);
  const std::size_t n = v.size();
  std::vector<double> half(n + 1, 0.0), full(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double lo = v.points[i - 1], hi = v.points[i];
    double sup = 0.0;
    for (std::size_t k = 1; k <= samples; ++k) {
      const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples + 1);
      const double b = fpp_bound(x);
      if (!(b >= 0.0) || !std::isfinite(b))
        fail(ErrorKind::invalid_parameter, "f'' bound must be finite and nonnegative");
      sup = std::max(sup, b);
    }
    full[i] = sup * std::abs(w);
    half[i] = 0.5 * full[i];
  }
  SteinFactors f;
  f.provenance = FactorProvenance::literature_constant;
  f.c0 = *std::max_element(half.begin(), half.end());
  f.c1 = 0.0;
  f.piecewise_c0 = std::move(half);
  f.piecewise_c0_unhalved = std::move(full);
  f.piecewise_c1 = std::vector<double>(n + 1, 0.0);
  return f;
}

std::function<double(double)> erlang_fpp_bound(double n, double lambda, double mu) {
  if (!(lambda > 0.0 && mu > 0.0 && n >= 1.0 && lambda < mu * n))
    fail(ErrorKind::invalid_parameter, "erlang bound needs lambda, mu > 0 and lambda < mu n");
  const double xn = std::sqrt(mu / lambda) * (n - lambda / mu);
  return [xn, mu](double x) { return x <= xn ? (23.0 + 13.0 / xn) / mu : 2.0 / mu; };
}

}  // namespace stein1d
