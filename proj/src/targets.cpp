#include "stein1d/targets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace stein1d {

namespace detail {

class TargetModel {
 public:
  virtual ~TargetModel() = default;
  virtual double log_pdf(double x) const = 0;
  virtual double dlog_pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double sf(double x) const = 0;
};

}  // namespace detail

namespace {

using detail::TargetModel;

class NormalModel final : public TargetModel {
 public:
  NormalModel(double mu, double sigma) : mu_(mu), sigma_(sigma) {}
  double log_pdf(double x) const override {
    const double z = (x - mu_) / sigma_;
    return -0.5 * z * z - std::log(sigma_ * std::sqrt(2.0 * std::numbers::pi));
  }
  double dlog_pdf(double x) const override { return -(x - mu_) / (sigma_ * sigma_); }
  double cdf(double x) const override { return normal_cdf((x - mu_) / sigma_); }
  double sf(double x) const override { return normal_sf((x - mu_) / sigma_); }

 private:
  double mu_, sigma_;
};

class ExponentialModel final : public TargetModel {
 public:
  explicit ExponentialModel(double lambda) : lambda_(lambda) {}
  double log_pdf(double x) const override { return std::log(lambda_) - lambda_ * x; }
  double dlog_pdf(double) const override { return -lambda_; }
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-lambda_ * x); }
  double sf(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-lambda_ * x); }

 private:
  double lambda_;
};

class GammaModel final : public TargetModel {
 public:
  GammaModel(double shape, double rate)
      : shape_(shape),
        rate_(rate),
        log_norm_(shape * std::log(rate) - boost::math::lgamma(shape)) {}
  double log_pdf(double x) const override {
    return log_norm_ + (shape_ - 1.0) * std::log(x) - rate_ * x;
  }
  double dlog_pdf(double x) const override { return (shape_ - 1.0) / x - rate_; }
  double cdf(double x) const override {
    return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape_, rate_ * x);
  }
  double sf(double x) const override {
    return x <= 0.0 ? 1.0 : boost::math::gamma_q(shape_, rate_ * x);
  }

 private:
  double shape_, rate_, log_norm_;
};

class BetaModel final : public TargetModel {
 public:
  BetaModel(double al, double be)
      : al_(al),
        be_(be),
        log_beta_(boost::math::lgamma(al) + boost::math::lgamma(be) -
                  boost::math::lgamma(al + be)) {}
  double log_pdf(double x) const override {
    return (al_ - 1.0) * std::log(x) + (be_ - 1.0) * std::log1p(-x) - log_beta_;
  }
  double dlog_pdf(double x) const override { return (al_ - 1.0) / x - (be_ - 1.0) / (1.0 - x); }
  double cdf(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(al_, be_, x);
  }
  double sf(double x) const override {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return boost::math::ibetac(al_, be_, x);
  }

 private:
  double al_, be_, log_beta_;
};

class StudentModel final : public TargetModel {
 public:
  explicit StudentModel(double nu)
      : nu_(nu),
        dist_(nu),
        log_norm_(boost::math::lgamma(0.5 * (nu + 1.0)) - boost::math::lgamma(0.5 * nu) -
                  0.5 * std::log(nu * std::numbers::pi)) {}
  double log_pdf(double x) const override {
    return log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_);
  }
  double dlog_pdf(double x) const override { return -(nu_ + 1.0) * x / (nu_ + x * x); }
  double cdf(double x) const override { return boost::math::cdf(dist_, x); }
  double sf(double x) const override { return boost::math::cdf(boost::math::complement(dist_, x)); }

 private:
  double nu_;
  boost::math::students_t_distribution<double> dist_;
  double log_norm_;
};

// Density proportional to exp(u(x)) with u(x) = -x^2/2 below k and kappa x + kappa^2/2 above,
// where kappa < 0 and k = -kappa.
class ErlangLimitModel final : public TargetModel {
 public:
  explicit ErlangLimitModel(double kappa) : kappa_(kappa), k_(-kappa) {
    QuadOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-14;
    const double z = integrate_or_throw([this](double x) { return std::exp(unnormalised(x)); },
                                        -kInf, kInf, opts);
    log_c_ = -std::log(z);
    c_ = 1.0 / z;
  }
  double unnormalised(double x) const {
    return x <= k_ ? -0.5 * x * x : kappa_ * x + 0.5 * kappa_ * kappa_;
  }
  double log_pdf(double x) const override { return log_c_ + unnormalised(x); }
  double dlog_pdf(double x) const override { return x <= k_ ? -x : kappa_; }
  double cdf(double x) const override {
    const double root2pi = std::sqrt(2.0 * std::numbers::pi);
    if (x <= k_) return c_ * root2pi * normal_cdf(x);
    return 1.0 - sf(x);
  }
  double sf(double x) const override {
    const double root2pi = std::sqrt(2.0 * std::numbers::pi);
    if (x <= k_)
      return c_ * (root2pi * (normal_cdf(k_) - normal_cdf(x)) +
                   std::exp(-0.5 * kappa_ * kappa_) / k_);
    return c_ * std::exp(kappa_ * x + 0.5 * kappa_ * kappa_) / k_;
  }
  double normaliser() const { return c_; }

 private:
  double kappa_, k_;
  double log_c_ = 0.0, c_ = 0.0;
};

class CustomModel final : public TargetModel {
 public:
  CustomModel(double a, double b, std::function<double(double)> log_q,
              std::function<double(double)> dlog_q)
      : a_(a), b_(b), log_q_(std::move(log_q)), dlog_q_(std::move(dlog_q)) {
    QuadOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-12;
    QuadResult z = integrate([this](double x) { return std::exp(log_q_(x)); }, a_, b_, opts);
    if (!z.converged || !std::isfinite(z.value) || z.value <= 0.0)
      fail(ErrorKind::invalid_parameter, "custom density is not normalisable on the support");
    log_z_ = std::log(z.value);
    QuadResult m = integrate([this](double x) { return x * std::exp(log_pdf(x)); }, a_, b_, opts);
    split_ = m.value;
  }
  double log_pdf(double x) const override { return log_q_(x) - log_z_; }
  double dlog_pdf(double x) const override { return dlog_q_(x); }
  double cdf(double x) const override {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    if (x <= split_) return mass(a_, x);
    return 1.0 - mass(x, b_);
  }
  double sf(double x) const override {
    if (x <= a_) return 1.0;
    if (x >= b_) return 0.0;
    if (x >= split_) return mass(x, b_);
    return 1.0 - mass(a_, x);
  }

 private:
  double mass(double lo, double hi) const {
    QuadOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-12;
    return integrate([this](double x) { return std::exp(log_pdf(x)); }, lo, hi, opts).value;
  }
  double a_, b_;
  std::function<double(double)> log_q_, dlog_q_;
  double log_z_ = 0.0;
  double split_ = 0.0;  // mean; cdf integrates from the nearer end
};

void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorKind::invalid_parameter, msg);
}

double checked_positive(const ParamMap& p, const std::string& key, const std::string& fam) {
  const double v = param(p, key);
  require(std::isfinite(v) && v > 0.0, fam + ": parameter " + key + " must be > 0");
  return v;
}

// Mean and variance of a density on (a, b) by quadrature.
std::pair<double, std::optional<double>> quadrature_moments(const ContinuousTarget& t) {
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-13;
  QuadResult m = integrate([&t](double x) { return x * t.density(x); }, t.a, t.b, opts);
  if (!m.converged || !std::isfinite(m.value))
    fail(ErrorKind::invalid_parameter, "target has no finite mean");
  const double mean = m.value;
  QuadResult v =
      integrate([&t, mean](double x) { return (x - mean) * (x - mean) * t.density(x); }, t.a,
                t.b, opts);
  std::optional<double> var;
  if (v.converged && std::isfinite(v.value)) var = v.value;
  return {mean, var};
}

}  // namespace

std::string to_string(TargetFamily f) {
  switch (f) {
    case TargetFamily::normal: return "normal";
    case TargetFamily::exponential: return "exponential";
    case TargetFamily::gamma: return "gamma";
    case TargetFamily::beta: return "beta";
    case TargetFamily::student: return "student";
    case TargetFamily::erlangC_limit: return "erlangC_limit";
    case TargetFamily::custom: return "custom";
  }
  return "custom";
}

TargetFamily target_family_from_string(const std::string& s) {
  for (auto f : {TargetFamily::normal, TargetFamily::exponential, TargetFamily::gamma,
                 TargetFamily::beta, TargetFamily::student, TargetFamily::erlangC_limit,
                 TargetFamily::custom})
    if (to_string(f) == s) return f;
  fail(ErrorKind::invalid_parameter, "unknown target family '" + s + "'");
}

double ContinuousTarget::log_density(double x) const {
  if (!in_interior(x)) return -kInf;
  return model->log_pdf(x);
}
double ContinuousTarget::density(double x) const {
  if (!in_interior(x)) return 0.0;
  return std::exp(model->log_pdf(x));
}
double ContinuousTarget::dlog_density(double x) const {
  if (!in_interior(x)) fail(ErrorKind::domain, "score evaluated outside the open support");
  return model->dlog_pdf(x);
}
double ContinuousTarget::cdf(double x) const {
  if (x <= a) return 0.0;
  if (x >= b) return 1.0;
  return model->cdf(x);
}
double ContinuousTarget::sf(double x) const {
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  return model->sf(x);
}

double ContinuousTarget::stein_kernel(double x) const {
  if (ip) {
    if (!in_closure(x)) fail(ErrorKind::domain, "Stein kernel evaluated outside the support");
    return (*ip)(x);
  }
  if (!in_interior(x)) fail(ErrorKind::domain, "Stein kernel evaluated outside the open support");
  QuadOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-12;
  const double m = mean;
  auto g = [this, m](double u) { return (u - m) * density(u); };
  // Integrate on the side where the integrand keeps one sign.
  const double integral = x <= m ? -integrate(g, a, x, opts).value : integrate(g, x, b, opts).value;
  return integral / density(x);
}

double ContinuousTarget::sd() const {
  if (!variance) fail(ErrorKind::domain, "target variance is not finite");
  return std::sqrt(*variance);
}

std::string ContinuousTarget::describe() const {
  std::ostringstream os;
  os << to_string(family) << '(';
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) os << ", ";
    os << k << '=' << v;
    first = false;
  }
  os << ')';
  return os.str();
}

ContinuousTarget make_target(TargetFamily family, const ParamMap& params) {
  ContinuousTarget t;
  t.family = family;
  t.params = params;
  switch (family) {
    case TargetFamily::normal: {
      const double mu = param_or(params, "mu", 0.0);
      const double sigma = param_or(params, "sigma", 1.0);
      require(std::isfinite(mu), "normal: mu must be finite");
      require(std::isfinite(sigma) && sigma > 0.0, "normal: sigma must be > 0");
      t.params = {{"mu", mu}, {"sigma", sigma}};
      t.model = std::make_shared<NormalModel>(mu, sigma);
      t.mean = mu;
      t.variance = sigma * sigma;
      t.ip = IpCoeffs{0.0, 0.0, sigma * sigma};
      break;
    }
    case TargetFamily::exponential: {
      const double lambda = checked_positive(params, "lambda", "exponential");
      t.model = std::make_shared<ExponentialModel>(lambda);
      t.a = 0.0;
      t.mean = 1.0 / lambda;
      t.variance = 1.0 / (lambda * lambda);
      t.ip = IpCoeffs{0.0, 1.0 / lambda, 0.0};
      break;
    }
    case TargetFamily::gamma: {
      const double shape = checked_positive(params, "alpha", "gamma");
      const double rate = checked_positive(params, "beta", "gamma");
      t.model = std::make_shared<GammaModel>(shape, rate);
      t.a = 0.0;
      t.mean = shape / rate;
      t.variance = shape / (rate * rate);
      t.ip = IpCoeffs{0.0, 1.0 / rate, 0.0};
      break;
    }
    case TargetFamily::beta: {
      const double al = checked_positive(params, "alpha", "beta");
      const double be = checked_positive(params, "beta", "beta");
      t.model = std::make_shared<BetaModel>(al, be);
      t.a = 0.0;
      t.b = 1.0;
      const double s = al + be;
      t.mean = al / s;
      t.variance = al * be / (s * s * (s + 1.0));
      t.ip = IpCoeffs{-1.0 / s, 1.0 / s, 0.0};
      break;
    }
    case TargetFamily::student: {
      const double nu = checked_positive(params, "nu", "student");
      require(nu > 1.0, "student: nu must be > 1 for a finite mean");
      t.model = std::make_shared<StudentModel>(nu);
      t.mean = 0.0;
      if (nu > 2.0) t.variance = nu / (nu - 2.0);
      t.ip = IpCoeffs{1.0 / (nu - 1.0), 0.0, nu / (nu - 1.0)};
      break;
    }
    case TargetFamily::erlangC_limit: {
      const double n = checked_positive(params, "n", "erlangC_limit");
      const double lambda = checked_positive(params, "lambda", "erlangC_limit");
      const double mu = checked_positive(params, "mu", "erlangC_limit");
      require(n == std::floor(n), "erlangC_limit: n must be a positive integer");
      require(lambda < mu * n, "erlangC_limit: requires lambda < mu * n");
      const double kappa = std::sqrt(mu / lambda) * (lambda / mu - n);
      t.model = std::make_shared<ErlangLimitModel>(kappa);
      auto [m, v] = quadrature_moments(t);
      t.mean = m;
      t.variance = v;
      t.params["kappa"] = kappa;
      t.params["normaliser"] =
          std::static_pointer_cast<const ErlangLimitModel>(t.model)->normaliser();
      break;
    }
    case TargetFamily::custom:
      fail(ErrorKind::invalid_parameter, "custom targets are built with make_custom_target");
  }
  return t;
}

ContinuousTarget make_custom_target(double a, double b, std::function<double(double)> log_q,
                                    std::function<double(double)> dlog_q) {
  if (!(a < b)) fail(ErrorKind::invalid_parameter, "custom target: need a < b");
  ContinuousTarget t;
  t.family = TargetFamily::custom;
  t.a = a;
  t.b = b;
  auto model = std::make_shared<CustomModel>(a, b, std::move(log_q), std::move(dlog_q));
  t.model = model;
  auto [m, v] = quadrature_moments(t);
  t.mean = m;
  t.variance = v;
  return t;
}

WeightFunction stein_kernel_weight(const ContinuousTarget& target) {
  WeightFunction wf;
  wf.kind = WeightKind::stein_kernel;
  if (target.ip) {
    const IpCoeffs c = *target.ip;
    wf.w = [c](double x) { return c(x); };
    wf.w_prime = [c](double x) { return 2.0 * c.alpha * x + c.beta; };
    wf.w_second = [c](double) { return 2.0 * c.alpha; };
    if (c.alpha == 0.0 && c.beta == 0.0) wf.constant = c.gamma;
    return wf;
  }
  // (q tau)' = (mean - x) q
  ContinuousTarget t = target;
  wf.w = [t](double x) { return t.stein_kernel(x); };
  wf.w_prime = [t](double x) { return (t.mean - x) - t.stein_kernel(x) * t.dlog_density(x); };
  wf.w_second = [t, wp = wf.w_prime](double x) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    return (wp(x + h) - wp(x - h)) / (2.0 * h);
  };
  return wf;
}

WeightFunction constant_weight(double c) {
  if (!(c > 0.0)) fail(ErrorKind::invalid_parameter, "constant weight must be > 0");
  WeightFunction wf;
  wf.kind = c == 1.0 ? WeightKind::constant_one : WeightKind::custom;
  wf.constant = c;
  wf.w = [c](double) { return c; };
  wf.w_prime = [](double) { return 0.0; };
  wf.w_second = [](double) { return 0.0; };
  return wf;
}

double eval_score(const ContinuousTarget& target, const WeightFunction& weight, double x) {
  if (weight.kind == WeightKind::stein_kernel) {
    if (!target.in_closure(x)) fail(ErrorKind::domain, "score evaluated outside the support");
    return target.mean - x;
  }
  if (!target.in_interior(x)) fail(ErrorKind::domain, "score evaluated outside the open support");
  return weight.w_prime(x) + weight.w(x) * target.dlog_density(x);
}

std::pair<double, double> gamma12(const ContinuousTarget& target, double x) {
  if (!target.in_interior(x)) fail(ErrorKind::domain, "gamma12 evaluated outside the open support");
  QuadOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-12;
  auto left = [&] {
    return integrate_or_throw([&target](double u) { return target.cdf(u); }, target.a, x, opts);
  };
  auto right = [&] {
    return integrate_or_throw([&target](double u) { return target.sf(u); }, x, target.b, opts);
  };
  if (!target.ip) return {left(), right()};
  if (target.family == TargetFamily::beta) {
    // int_0^d I_v(p, q) dv = d I_d(p, q) - p/(p+q) I_d(p+1, q); the right side uses the reflected
    // law on d = 1 - x, which is exact in floating point for x >= 1/2.
    const double al = param(target.params, "alpha"), be = param(target.params, "beta");
    auto partial = [](double p, double q, double d) {
      return d * boost::math::ibeta(p, q, d) - p / (p + q) * boost::math::ibeta(p + 1.0, q, d);
    };
    return {partial(al, be, x), partial(be, al, 1.0 - x)};
  }

  const double qt = target.density(x) * (*target.ip)(x);
  const double id_bar = target.mean - x;
  const double f = target.cdf(x);
  const double fbar = target.sf(x);
  double g1 = qt - id_bar * f;
  double g2 = qt + id_bar * fbar;
  // Closed forms lose digits where the two products nearly cancel (support edges, tails).
  constexpr double kCancel = 1e-3;
  if (std::abs(g1) < kCancel * std::max(std::abs(qt), std::abs(id_bar * f))) g1 = left();
  if (std::abs(g2) < kCancel * std::max(std::abs(qt), std::abs(id_bar * fbar))) g2 = right();
  return {g1, g2};
}

}  // namespace stein1d
