#include "stein1d/cases.hpp"

#include <cmath>

#include "stein1d/builder.hpp"

namespace stein1d {

const std::vector<FamilyInfo>& discrete_catalog() {
  static const std::vector<FamilyInfo> catalog = {
      {DiscreteFamily::binomial, {{"n", "number of trials", 20}, {"t", "success probability", 0.3}}},
      {DiscreteFamily::poisson, {{"lambda", "rate", 2}}},
      {DiscreteFamily::negative_binomial,
       {{"n", "number of successes (real > 0)", 5}, {"t", "success probability", 0.4}}},
      {DiscreteFamily::geometric, {{"t", "success probability; support 0, 1, ...", 0.75}}},
      {DiscreteFamily::hypergeometric,
       {{"N", "population size", 100}, {"n", "draws", 20}, {"r", "marked items (r >= n)", 30}}},
      {DiscreteFamily::discrete_uniform, {{"n", "support {0, ..., n}", 10}}},
      {DiscreteFamily::polya,
       {{"alpha", "initial white weight", 2},
        {"beta", "initial black weight", 3},
        {"m", "replacement count", 1},
        {"n", "draws", 40}}},
      {DiscreteFamily::bernoulli_laplace,
       {{"l", "half the number of balls; atoms i(i+1)/l, i = 0..l", 25}}},
      {DiscreteFamily::moran,
       {{"a", "mutation parameter a", 2}, {"b", "mutation parameter b", 3}, {"n", "support {0..2n}", 50}}},
      {DiscreteFamily::semicircle_fulman, {{"n", "support {1, ..., n-1}", 30}}},
      {DiscreteFamily::erlangC_stationary,
       {{"n", "servers", 5}, {"lambda", "arrival rate", 3}, {"mu", "service rate", 1}}},
      {DiscreteFamily::miw, {{"n", "number of worlds", 20}}},
  };
  return catalog;
}

const std::vector<TargetInfo>& target_catalog() {
  static const std::vector<TargetInfo> catalog = {
      {TargetFamily::normal, {{"mu", "mean", 0}, {"sigma", "standard deviation", 1}}},
      {TargetFamily::exponential, {{"lambda", "rate", 1}}},
      {TargetFamily::gamma, {{"alpha", "shape", 2}, {"beta", "rate", 1}}},
      {TargetFamily::beta, {{"alpha", "first shape", 2}, {"beta", "second shape", 2}}},
      {TargetFamily::student, {{"nu", "degrees of freedom (> 1)", 5}}},
      {TargetFamily::erlangC_limit,
       {{"n", "servers", 5}, {"lambda", "arrival rate", 3}, {"mu", "service rate", 1}}},
  };
  return catalog;
}

const std::vector<ApplicationInfo>& applications() {
  static const std::vector<ApplicationInfo> apps = [] {
    std::vector<ApplicationInfo> out;
    auto params_of = [](DiscreteFamily f) {
      for (const auto& info : discrete_catalog())
        if (info.family == f) return info.params;
      return std::vector<ParamSpec>{};
    };
    auto add = [&](std::string name, DiscreteFamily f, TargetFamily t, std::string w, Theorem th,
                   std::string summary, std::vector<ParamSpec> extra = {}) {
      std::vector<ParamSpec> ps = params_of(f);
      ps.insert(ps.end(), extra.begin(), extra.end());
      out.push_back({std::move(name), f, t, std::move(w), th, std::move(ps), std::move(summary)});
    };
    add("binomial", DiscreteFamily::binomial, TargetFamily::normal, "one", Theorem::uniform,
        "standardized binomial vs standard normal");
    add("poisson", DiscreteFamily::poisson, TargetFamily::normal, "one", Theorem::uniform,
        "standardized Poisson vs standard normal");
    add("negative_binomial", DiscreteFamily::negative_binomial, TargetFamily::normal, "one",
        Theorem::uniform, "standardized negative binomial vs standard normal");
    add("geometric", DiscreteFamily::geometric, TargetFamily::exponential, "stein_kernel",
        Theorem::uniform, "rescaled geometric vs exponential",
        {{"lambda", "exponential rate", 1}});
    add("hypergeometric", DiscreteFamily::hypergeometric, TargetFamily::normal, "one",
        Theorem::uniform, "standardized hypergeometric vs standard normal");
    add("discrete_uniform", DiscreteFamily::discrete_uniform, TargetFamily::normal, "one",
        Theorem::uniform, "standardized discrete uniform vs standard normal");
    add("polya", DiscreteFamily::polya, TargetFamily::beta, "stein_kernel", Theorem::combined,
        "Polya urn vs beta(alpha/m, beta/m)");
    add("bernoulli_laplace", DiscreteFamily::bernoulli_laplace, TargetFamily::exponential,
        "stein_kernel", Theorem::uniform, "Bernoulli-Laplace spectrum vs exponential(1)");
    add("moran", DiscreteFamily::moran, TargetFamily::beta, "stein_kernel", Theorem::combined,
        "two-allele Moran stationary law vs beta(a, b)");
    add("semicircle_fulman", DiscreteFamily::semicircle_fulman, TargetFamily::beta, "stein_kernel",
        Theorem::combined, "Fulman's semicircle law vs beta(3/2, 3/2)");
    add("erlangC_stationary", DiscreteFamily::erlangC_stationary, TargetFamily::erlangC_limit, "mu",
        Theorem::refined_piecewise, "Erlang-C queue length vs its diffusion limit");
    add("miw", DiscreteFamily::miw, TargetFamily::normal, "one", Theorem::uniform,
        "uniform law on the MIW point set vs standard normal");
    add("nb_gamma", DiscreteFamily::negative_binomial, TargetFamily::gamma, "stein_kernel",
        Theorem::uniform, "negative binomial vs gamma(n, beta)",
        {{"beta", "gamma rate", 1}});
    // nb_gamma reuses n from the negative binomial; its t is the gamma-side parameter.
    for (auto& ps : out.back().params)
      if (ps.name == "t") ps = {"t", "scale parameter; law success probability beta/(t+beta)", 2};
    return out;
  }();
  return apps;
}

const ApplicationInfo& application_info(const std::string& name) {
  for (const auto& a : applications())
    if (a.name == name) return a;
  fail(ErrorKind::invalid_parameter, "unknown application '" + name + "'");
}

Application prepare_application(const std::string& name, const ParamMap& given, double tail_tol) {
  const ApplicationInfo& info = application_info(name);
  Application app;
  app.name = name;
  app.theorem = info.theorem;
  for (const auto& ps : info.params) app.params[ps.name] = param_or(given, ps.name, ps.example);
  for (const auto& [k, v] : given)
    if (!app.params.count(k)) fail(ErrorKind::invalid_parameter, name + ": unknown parameter " + k);
  const ParamMap& p = app.params;

  ParamMap law_params = p;
  ParamMap target_params;
  switch (info.target) {
    case TargetFamily::normal:
      target_params = {{"mu", 0.0}, {"sigma", 1.0}};
      break;
    case TargetFamily::exponential:
      target_params = {{"lambda", param_or(p, "lambda", 1.0)}};
      if (name == "geometric") law_params.erase("lambda");
      break;
    case TargetFamily::gamma: {
      const double beta = param(p, "beta"), t = param(p, "t");
      target_params = {{"alpha", param(p, "n")}, {"beta", beta}};
      law_params = {{"n", param(p, "n")}, {"t", beta / (t + beta)}};
      break;
    }
    case TargetFamily::beta:
      if (name == "polya")
        target_params = {{"alpha", param(p, "alpha") / param(p, "m")},
                         {"beta", param(p, "beta") / param(p, "m")}};
      else if (name == "moran")
        target_params = {{"alpha", param(p, "a")}, {"beta", param(p, "b")}};
      else
        target_params = {{"alpha", 1.5}, {"beta", 1.5}};
      break;
    case TargetFamily::erlangC_limit:
      target_params = {{"n", param(p, "n")}, {"lambda", param(p, "lambda")}, {"mu", param(p, "mu")}};
      break;
    default:
      fail(ErrorKind::unsupported, "application target not wired");
  }
  app.target = make_target(info.target, target_params);
  app.raw = make_discrete(info.family, law_params, tail_tol);
  const StandardizedLaw st = standardize(app.raw, app.target);
  app.law = st.law;
  app.map = st.map;
  if (info.weight == "stein_kernel")
    app.weight = stein_kernel_weight(app.target);
  else if (info.weight == "mu")
    app.weight = constant_weight(param(p, "mu"));
  else
    app.weight = constant_weight(1.0);
  if (name != "moran") app.closed_form = name;
  return app;
}

WeightSequence closed_form_for(const Application& app) {
  if (!app.closed_form) fail(ErrorKind::unsupported, app.name + ": no closed form for the weights");
  ParamMap params = app.params;
  for (const auto& [k, v] : app.raw.params) params.emplace(k, v);
  const SupportView v = full_view(app.law);
  WeightSequence all = closed_form_weights(*app.closed_form, params, v.size());
  WeightSequence ws = all;
  ws.values.assign(all.values.begin(), all.values.begin() + static_cast<std::ptrdiff_t>(v.retained));
  ws.tail_values.assign(all.values.begin() + static_cast<std::ptrdiff_t>(v.retained), all.values.end());
  ws.max_residual = residual(app.law, ws, app.target, app.weight);
  return ws;
}

SteinFactors factors_for(const Application& app) {
  if (app.theorem == Theorem::refined_piecewise) {
    const auto& p = app.params;
    return piecewise_factors(app.law, erlang_fpp_bound(param(p, "n"), param(p, "lambda"), param(p, "mu")),
                             app.weight);
  }
  return closed_form_factors(app.target, app.weight.kind);
}

BoundReport assess(const Application& app, const WeightSequence& weights) {
  const SteinFactors f = factors_for(app);
  switch (app.theorem) {
    case Theorem::refined_piecewise:
      return wasserstein_bound_refined(app.law, app.target, weights, f);
    case Theorem::combined:
      return wasserstein_bound_combined(app.law, app.target, app.weight, weights, *f.c_combined);
    default:
      return wasserstein_bound(app.law, app.target, app.weight, weights, f);
  }
}

BoundReport assess(const Application& app) {
  return assess(app, compute_weights(app.law, app.target, app.weight));
}

double geometric_bound(double t, double lambda) { return 3.0 * t / (2.0 * lambda * std::sqrt(1.0 - t)); }

double bernoulli_laplace_bound(double n) { return 3.0 * std::sqrt(2.0) / std::sqrt(n) + 3.0 / n; }

double nb_gamma_bound(double beta, double t) { return 2.0 / std::sqrt(t * (beta + t)); }

double hypergeometric_bound(double N, double n, double r) {
  return std::sqrt(N * N * (N - 1.0) / (n * r * (N - n) * (N - r)));
}

double polya_bound(double alpha, double beta, double m, double n) {
  const double A = alpha / m, B = beta / m;
  const auto [b0, b1] = beta_b0b1(A, B);
  return (1.0 + (b0 + b1) / 2.0) / std::sqrt(n * (A + B + n));
}

double semicircle_bound(double n) { return 5.0 / std::sqrt(n * n - n - 2.0); }

double builder_gamma_bound(double delta) { return 2.0 * delta; }

double erlang_envelope(double lambda, double mu) {
  const double d = std::sqrt(mu / lambda);
  return 0.5 * d * (23.0 + 13.0 * (2.0 + d));
}

double erlang_simple_bound(double lambda, double mu) { return 31.0 * std::sqrt(mu / lambda); }

double miw_bound(double n) {
  return 4.0 * std::pow(n / (n - 1.0), 1.5) * std::sqrt(std::log(n)) / n;
}

double miw_exact_bound(double n) {
  const std::vector<double> x = miw_points(static_cast<std::size_t>(n));
  return 2.0 * std::pow(n / (n - 1.0), 1.5) * x.back() / n;
}

double moran_mesh(double a, double b, double n) {
  return std::sqrt(1.0 / (4.0 * n * n) - (a + b) / (8.0 * n * n * n * (a + b + 1.0)));
}

double moran_bound(double a, double b, double n) {
  const auto [b0, b1] = beta_b0b1(a, b);
  return (1.0 + (b0 + b1) / 2.0) * moran_mesh(a, b, n);
}

double polya_gs(double alpha, double beta, double m, double n, double assembled_bound) {
  const double A = alpha / m, B = beta / m;
  const double S = std::sqrt(n * (n + A + B));
  const double mean_y = n * A / (A + B);
  // X = Y/S + (A/(A+B))(1 - n/S) against Y/n, both affine images of Y >= 0.
  const double shift =
      affine_shift_bound(1.0 / S, A / (A + B) * (1.0 - n / S), 1.0 / n, 0.0, mean_y);
  return assembled_bound + shift;
}

std::optional<PublishedBound> published_bound(const std::string& name, const ParamMap& given) {
  const ApplicationInfo& info = application_info(name);
  ParamMap p;
  for (const auto& ps : info.params) p[ps.name] = param_or(given, ps.name, ps.example);
  if (name == "binomial") {
    const double n = p["n"], t = p["t"];
    return PublishedBound{1.0 / std::sqrt(n * t * (1.0 - t)), false, "1/sqrt(n t (1-t))"};
  }
  if (name == "poisson") return PublishedBound{1.0 / std::sqrt(p["lambda"]), false, "1/sqrt(lambda)"};
  if (name == "geometric")
    return PublishedBound{geometric_bound(p["t"], p["lambda"]), false, "3t/(2 lambda sqrt(1-t))"};
  if (name == "hypergeometric")
    return PublishedBound{hypergeometric_bound(p["N"], p["n"], p["r"]), false,
                          "sqrt(N^2 (N-1) / (n r (N-n) (N-r)))"};
  if (name == "polya")
    return PublishedBound{polya_bound(p["alpha"], p["beta"], p["m"], p["n"]), false,
                          "(1 + (b0+b1)/2) / sqrt(n (A+B+n))"};
  if (name == "bernoulli_laplace")
    return PublishedBound{bernoulli_laplace_bound(2.0 * p["l"]), true, "3 sqrt(2)/sqrt(n) + 3/n, n = 2l"};
  if (name == "moran")
    return PublishedBound{moran_bound(p["a"], p["b"], p["n"]), false, "(1 + (b0+b1)/2) delta_M"};
  if (name == "semicircle_fulman")
    return PublishedBound{semicircle_bound(p["n"]), false, "5 / sqrt(n^2 - n - 2)"};
  if (name == "erlangC_stationary")
    return PublishedBound{erlang_envelope(p["lambda"], p["mu"]), true,
                          "sqrt(mu/lambda) (23 + 13 (2 + sqrt(mu/lambda))) / 2"};
  if (name == "miw")
    return PublishedBound{miw_bound(p["n"]), true, "4 (n/(n-1))^(3/2) sqrt(ln n) / n"};
  if (name == "nb_gamma")
    return PublishedBound{nb_gamma_bound(p["beta"], p["t"]), false, "2 / sqrt(t (beta + t))"};
  return std::nullopt;
}

}  // namespace stein1d
