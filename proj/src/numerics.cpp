#include "stein1d/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include <boost/math/special_functions/gamma.hpp>

namespace stein1d {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

double param(const ParamMap& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) fail(ErrorKind::invalid_parameter, "missing parameter '" + key + "'");
  return it->second;
}

double param_or(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

double compensated_sum(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

double to_unit(double x) {
  if (x == kInf) return 1.0;
  if (x == -kInf) return -1.0;
  return x / (1.0 + std::abs(x));
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::function<double(double)> g = f;
  double lo = a, hi = b;
  if (std::isinf(a) || std::isinf(b)) {
    g = [&f](double t) {
      const double d = 1.0 - std::abs(t);
      if (d <= 0.0) return 0.0;
      const double x = t / d;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    lo = to_unit(a);
    hi = to_unit(b);
  }

  std::priority_queue<Panel> heap;
  Panel first = gk15(g, lo, hi);
  out.evals = 15;
  heap.push(first);
  double total = first.value;
  double err = first.error;
  while (true) {
    const double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (err <= target) {
      out.converged = true;
      break;
    }
    if (out.evals + 30 > opts.max_evals) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel cannot be split further in double precision.
      out.converged = err <= 10.0 * target;
      break;
    }
    heap.pop();
    Panel left = gk15(g, worst.a, mid);
    Panel right = gk15(g, mid, worst.b);
    out.evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to remove drift from incremental updates.
  CompensatedSum s, e;
  while (!heap.empty()) {
    s.add(heap.top().value);
    e.add(heap.top().error);
    heap.pop();
  }
  out.value = sign * s.value();
  out.error = e.value();
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadOptions& opts) {
  QuadResult r = integrate(f, a, b, opts);
  if (!r.converged)
    fail(ErrorKind::numerical, "quadrature did not reach tolerance " +
                                   std::to_string(std::max(opts.abs_tol, opts.rel_tol)) +
                                   " within " + std::to_string(opts.max_evals) +
                                   " evaluations (estimated error " + std::to_string(r.error) +
                                   ")");
  return r.value;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol,
              int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    fail(ErrorKind::numerical, "bisection bracket [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "] has no sign change");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi) || hi - lo <= x_tol) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double log_choose(double n, double k) {
  using boost::math::lgamma;
  return lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace stein1d
