// stein1d command-line front end. Every command is deterministic given its flags.

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "stein1d/acceptance.hpp"
#include "stein1d/bespoke.hpp"
#include "stein1d/bounds.hpp"
#include "stein1d/builder.hpp"
#include "stein1d/cases.hpp"
#include "stein1d/factors.hpp"
#include "stein1d/io.hpp"
#include "stein1d/oracle.hpp"

using namespace stein1d;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

constexpr double kResidualTol = 1e-10;
constexpr double kWeightTol = 1e-9;
constexpr double kFormulaRelTol = 1e-9;
constexpr double kOracleTol = 1e-7;

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      fail(ErrorKind::invalid_parameter, "parameter '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty())
      fail(ErrorKind::invalid_parameter, "parameter " + key + ": '" + text + "' is not a number");
    out[key] = v;
  }
  return out;
}

// Writes to the named file, or stdout when the name is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) fail(ErrorKind::invalid_parameter, "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Json& doc, const std::string& path) {
  Output out(path);
  out.stream() << doc.dump(2) << '\n';
}

WeightFunction weight_from_flag(const std::string& flag, const ContinuousTarget& target) {
  if (flag == "kernel" || flag == "stein_kernel") return stein_kernel_weight(target);
  if (flag == "one") return constant_weight(1.0);
  std::size_t used = 0;
  double c = 0.0;
  try {
    c = std::stod(flag, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != flag.size()) fail(ErrorKind::invalid_parameter, "weight must be kernel, one or a number");
  return constant_weight(c);
}

double residual_limit(const DiscreteLaw& law) {
  return law.truncation ? 10.0 * law.truncation->tail_tol : kResidualTol;
}

Json published_json(const std::optional<PublishedBound>& pb) {
  if (!pb) return nullptr;
  return {{"value", pb->value}, {"envelope", pb->envelope}, {"formula", pb->formula}};
}

// ---- catalog ---------------------------------------------------------------------------------

struct CatalogArgs {
  std::string family;
  bool json = false;
};

std::string param_line(const std::vector<ParamSpec>& ps) {
  std::ostringstream s;
  for (std::size_t i = 0; i < ps.size(); ++i)
    s << (i ? ", " : "") << ps[i].name << " (" << ps[i].description << ", e.g. " << ps[i].example
      << ")";
  return s.str();
}

int cmd_catalog(const CatalogArgs& a) {
  const Json doc = catalog_json();
  if (!a.family.empty()) {
    for (const auto& key : {"discrete_families", "targets", "applications"})
      for (const auto& item : doc[key]) {
        const std::string name = item.contains("name") ? item["name"] : item["family"];
        if (name != a.family) continue;
        if (a.json) {
          std::cout << item.dump(2) << '\n';
        } else {
          std::cout << name << " [" << key << "]\n";
          for (const auto& p : item["params"])
            std::cout << "  " << p["name"].get<std::string>() << ": "
                      << p["description"].get<std::string>() << " (example "
                      << p["example"].get<double>() << ")\n";
        }
        return kExitOk;
      }
    fail(ErrorKind::invalid_parameter, "no family, target or application named '" + a.family + "'");
  }
  if (a.json) {
    std::cout << doc.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "discrete families (" << discrete_catalog().size() << ")\n";
  for (const auto& f : discrete_catalog())
    std::cout << "  " << to_string(f.family) << ": " << param_line(f.params) << '\n';
  std::cout << "targets (" << target_catalog().size() << ")\n";
  for (const auto& t : target_catalog())
    std::cout << "  " << to_string(t.family) << ": " << param_line(t.params) << '\n';
  std::cout << "applications (" << applications().size() << ")\n";
  for (const auto& app : applications())
    std::cout << "  " << app.name << ": " << app.summary << " [weight " << app.weight << ", "
              << to_string(app.theorem) << "]\n";
  return kExitOk;
}

// ---- weights ---------------------------------------------------------------------------------

struct WeightsArgs {
  std::string name;
  std::vector<std::string> params;
  std::string target;
  std::vector<std::string> target_params;
  std::string weight;
  bool allow_override = false;
  bool json = false;
  bool check = false;
  std::string out;
  double tail_tol = kDefaultTailTol;
};

int cmd_weights(const WeightsArgs& a) {
  Application app = prepare_application(a.name, parse_params(a.params), a.tail_tol);
  if (!a.target.empty()) {
    app.target = make_target(target_family_from_string(a.target), parse_params(a.target_params));
    const StandardizedLaw st = standardize(app.raw, app.target);
    app.law = st.law;
    app.map = st.map;
    app.closed_form.reset();
    app.weight = app.target.family == TargetFamily::normal ? constant_weight(1.0)
                                                           : stein_kernel_weight(app.target);
  }
  if (!a.weight.empty()) {
    app.weight = weight_from_flag(a.weight, app.target);
    app.closed_form.reset();
  }
  const WeightSequence ws = compute_weights(app.law, app.target, app.weight, a.allow_override);

  std::optional<double> cf_diff;
  if (app.closed_form) {
    try {
      const WeightSequence cf = closed_form_for(app);
      double d = 0.0;
      for (std::size_t i = 0; i < ws.values.size(); ++i)
        d = std::max(d, std::abs(ws.values[i] - cf.values[i]));
      cf_diff = d;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::unsupported) throw;
    }
  }
  std::optional<RangeCheck> range;
  if (!app.law.truncation && !ws.condition_override)
    range = check_range_sufficient(app.law, app.target, app.weight);

  bool ok = true;
  std::vector<std::string> problems;
  if (a.check) {
    if (!(ws.max_residual <= residual_limit(app.law))) {
      ok = false;
      problems.push_back("residual " + csv_number(ws.max_residual));
    }
    if (cf_diff && !(*cf_diff <= kWeightTol)) {
      ok = false;
      problems.push_back("closed form differs by " + csv_number(*cf_diff));
    }
  }

  if (a.json) {
    Json doc;
    doc["application"] = app.name;
    doc["params"] = to_json(app.params);
    doc["target"] = to_json(app.target);
    doc["map"] = {{"scale", app.map.scale}, {"shift", app.map.shift}};
    doc["law"] = to_json(app.law);
    doc["weights"] = to_json(ws);
    doc["closed_form_max_diff"] = cf_diff ? Json(*cf_diff) : Json(nullptr);
    doc["range"] = range ? to_json(*range) : Json(nullptr);
    if (a.check) doc["check"] = {{"pass", ok}, {"problems", problems}};
    emit_json(doc, a.out);
  } else {
    Output out(a.out);
    write_weights_csv(out.stream(), app.law, ws);
    std::cerr << "residual " << ws.max_residual << ", in [0,1]: "
              << (ws.in_unit_interval ? "yes" : "no");
    if (cf_diff) std::cerr << ", closed-form max diff " << *cf_diff;
    if (range) std::cerr << ", range verdict " << to_string(range->verdict);
    if (ws.condition_override) std::cerr << ", moment conditions overridden";
    std::cerr << '\n';
    for (const auto& p : problems) std::cerr << "check failed: " << p << '\n';
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// ---- bound -----------------------------------------------------------------------------------

struct BoundArgs {
  std::string name;
  std::vector<std::string> params;
  std::string theorem = "auto";
  bool oracle = false;
  bool json = false;
  bool check = false;
  std::string out;
  double tail_tol = kDefaultTailTol;
};

struct BoundOutcome {
  Application app;
  BoundReport report;
  std::optional<PublishedBound> published;
  std::optional<double> polya_gs_value;
  bool ok = true;
  std::vector<std::string> problems;
};

BoundOutcome evaluate_bound(const std::string& name, const ParamMap& params,
                            const std::string& theorem, bool with_oracle, double tail_tol) {
  BoundOutcome o;
  o.app = prepare_application(name, params, tail_tol);
  if (theorem == "clt") {
    if (name != "binomial")
      fail(ErrorKind::unsupported, "the clt bound is wired for binomial sums of Bernoulli summands");
    const double n = param(o.app.params, "n"), t = param(o.app.params, "t");
    o.report = clt_bound(make_discrete(DiscreteFamily::binomial, {{"n", 1.0}, {"t", t}}), n);
  } else if (theorem == "auto") {
    o.report = assess(o.app);
  } else {
    fail(ErrorKind::invalid_parameter, "theorem must be auto or clt");
  }
  if (with_oracle) attach_oracle(o.report, exact_w1(o.app.law, o.app.target).value);
  o.published = published_bound(name, o.app.params);
  if (name == "polya") {
    const auto& p = o.app.params;
    o.polya_gs_value = polya_gs(p.at("alpha"), p.at("beta"), p.at("m"), p.at("n"), o.report.bound);
  }

  if (o.published) {
    const double assembled = o.report.bound - o.report.terms.truncation_slack;
    const double v = o.published->value;
    const bool good = o.published->envelope
                          ? assembled <= v * (1.0 + kFormulaRelTol)
                          : std::abs(assembled - v) <= kFormulaRelTol * std::abs(v);
    if (!good) {
      o.ok = false;
      o.problems.push_back("assembled bound " + csv_number(assembled) + " vs printed " +
                           csv_number(v));
    }
  }
  if (o.report.oracle_w1 && !(*o.report.oracle_w1 <= o.report.bound + kOracleTol)) {
    o.ok = false;
    o.problems.push_back("oracle " + csv_number(*o.report.oracle_w1) + " exceeds bound");
  }
  return o;
}

int cmd_bound(const BoundArgs& a) {
  const BoundOutcome o =
      evaluate_bound(a.name, parse_params(a.params), a.theorem, a.oracle, a.tail_tol);
  if (a.json) {
    Json doc;
    doc["application"] = o.app.name;
    doc["params"] = to_json(o.app.params);
    doc["target"] = to_json(o.app.target);
    doc["report"] = to_json(o.report);
    doc["published"] = published_json(o.published);
    if (o.polya_gs_value) doc["polya_gs"] = *o.polya_gs_value;
    if (a.check) doc["check"] = {{"pass", o.ok}, {"problems", o.problems}};
    emit_json(doc, a.out);
  } else {
    Output out(a.out);
    std::ostream& s = out.stream();
    s.precision(10);
    s << o.app.name << " vs " << o.app.target.describe() << '\n';
    s << "  bound      " << o.report.bound << "  [" << to_string(o.report.theorem) << "]\n";
    s << "  terms      first " << o.report.terms.first_order << ", second "
      << o.report.terms.second_order << ", truncation " << o.report.terms.truncation_slack
      << ", standardization " << o.report.terms.standardization_slack << '\n';
    if (o.published)
      s << "  printed    " << o.published->value << (o.published->envelope ? " (envelope) " : " ")
        << o.published->formula << '\n';
    if (o.polya_gs_value) s << "  polya GS   " << *o.polya_gs_value << '\n';
    if (o.report.comparison) s << "  classical  " << *o.report.comparison << '\n';
    if (o.report.oracle_w1)
      s << "  oracle W1  " << *o.report.oracle_w1 << "  ratio " << o.report.ratio.value_or(NAN)
        << '\n';
    for (const auto& p : o.problems) s << "  check failed: " << p << '\n';
  }
  return (!a.check || o.ok) ? kExitOk : kExitCheckFailed;
}

// ---- build -----------------------------------------------------------------------------------

struct BuildArgs {
  std::string target;
  std::vector<std::string> params;
  std::optional<double> delta;
  std::optional<std::size_t> ell;
  std::optional<double> start;
  std::optional<std::size_t> count;
  std::string weight;
  bool oracle = false;
  bool json = false;
  bool check = false;
  std::string out;
  std::string law_out;
  double tail_tol = kDefaultTailTol;
};

struct BuildOutcome {
  ContinuousTarget target;
  DiscreteLaw law;
  double delta = 0.0;
  std::optional<IpGrid> solved;
  BoundReport report;
};

BuildOutcome evaluate_build(const std::string& target_name, const ParamMap& tp,
                            std::optional<double> delta, std::optional<std::size_t> ell,
                            std::optional<double> start, std::optional<std::size_t> count,
                            const std::string& weight_flag, bool with_oracle, double tail_tol) {
  BuildOutcome o;
  o.target = make_target(target_family_from_string(target_name), tp);
  const WeightFunction w = weight_flag.empty() ? stein_kernel_weight(o.target)
                                               : weight_from_flag(weight_flag, o.target);
  Grid grid;
  if (ell) {
    if (delta) fail(ErrorKind::invalid_parameter, "give either --delta or --ell, not both");
    o.solved = solve_ip_grid(o.target, ell);
    o.delta = o.solved->delta;
    grid = uniform_grid(o.target.a, o.delta, *ell + 1);
  } else {
    if (!delta) fail(ErrorKind::invalid_parameter, "build needs --delta or --ell");
    o.delta = *delta;
    const double x0 = start ? *start : o.target.a;
    if (!std::isfinite(x0)) fail(ErrorKind::invalid_parameter, "unbounded left end: pass --start");
    if (count)
      grid = uniform_grid(x0, o.delta, *count);
    else
      grid = unbounded_grid(x0, o.delta);
  }
  o.law = build_discrete(o.target, w, grid, tail_tol);
  const WeightSequence ws = compute_weights(o.law, o.target, w);
  SteinFactors f;
  try {
    f = closed_form_factors(o.target, w.kind);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::unsupported) throw;
    f = numeric_factors(o.target, w);
  }
  o.report = wasserstein_bound(o.law, o.target, w, ws, f);
  if (with_oracle) attach_oracle(o.report, exact_w1(o.law, o.target).value);
  return o;
}

int cmd_build(const BuildArgs& a) {
  const BuildOutcome o = evaluate_build(a.target, parse_params(a.params), a.delta, a.ell, a.start,
                                        a.count, a.weight, a.oracle, a.tail_tol);
  bool ok = true;
  if (a.check && o.report.oracle_w1) ok = *o.report.oracle_w1 <= o.report.bound + kOracleTol;
  if (!a.law_out.empty()) {
    Output lo(a.law_out);
    if (a.law_out.size() >= 4 && a.law_out.substr(a.law_out.size() - 4) == ".csv")
      write_law_csv(lo.stream(), o.law);
    else
      lo.stream() << to_json(o.law).dump(2) << '\n';
  }
  if (a.json) {
    Json doc;
    doc["target"] = to_json(o.target);
    doc["delta"] = o.delta;
    if (o.solved)
      doc["solved_grid"] = {{"delta", o.solved->delta},
                            {"ell", o.solved->ell ? Json(*o.solved->ell) : Json(nullptr)},
                            {"endpoint_residual", o.solved->endpoint_residual}};
    doc["atoms"] = o.law.size();
    if (a.law_out.empty()) doc["law"] = to_json(o.law);
    doc["report"] = to_json(o.report);
    if (a.check) doc["check"] = {{"pass", ok}};
    emit_json(doc, a.out);
  } else {
    Output out(a.out);
    std::ostream& s = out.stream();
    s.precision(10);
    s << "built law for " << o.target.describe() << ": " << o.law.size() << " atoms, delta "
      << o.delta << '\n';
    if (o.solved) s << "  endpoint residual " << o.solved->endpoint_residual << '\n';
    s << "  bound      " << o.report.bound << "  [" << to_string(o.report.theorem) << "]\n";
    if (o.report.oracle_w1) s << "  oracle W1  " << *o.report.oracle_w1 << '\n';
    if (!ok) s << "  check failed: oracle exceeds bound\n";
  }
  return ok ? kExitOk : kExitCheckFailed;
}

// ---- oracle ----------------------------------------------------------------------------------

struct OracleArgs {
  std::string name;
  std::vector<std::string> params;
  std::string law_file;
  std::string target;
  std::vector<std::string> target_params;
  double tol = 1e-8;
  std::size_t probes = 200;
  bool json = false;
  std::string out;
};

int cmd_oracle(const OracleArgs& a) {
  DiscreteLaw law;
  ContinuousTarget target;
  if (!a.law_file.empty()) {
    if (a.target.empty()) fail(ErrorKind::invalid_parameter, "--law needs --target");
    std::ifstream in(a.law_file);
    if (!in) fail(ErrorKind::invalid_parameter, "cannot read " + a.law_file);
    law = law_from_json(Json::parse(in));
    target = make_target(target_family_from_string(a.target), parse_params(a.target_params));
  } else {
    if (a.name.empty()) fail(ErrorKind::invalid_parameter, "give an application or --law");
    const Application app = prepare_application(a.name, parse_params(a.params));
    law = app.law;
    target = app.target;
  }
  const W1Result w = exact_w1(law, target, a.tol);
  const double gap = lipschitz_gap(law, target, a.probes);
  const double slack = truncation_w1(law);
  if (a.json) {
    Json doc;
    doc["target"] = to_json(target);
    doc["atoms"] = law.size();
    doc["exact_w1"] = w.value;
    doc["error_estimate"] = w.error_estimate;
    doc["panels"] = w.panels;
    doc["lipschitz_gap"] = gap;
    doc["truncation_w1"] = slack;
    emit_json(doc, a.out);
  } else {
    Output out(a.out);
    std::ostream& s = out.stream();
    s.precision(12);
    s << "exact W1      " << w.value << "  (error estimate " << w.error_estimate << ", " << w.panels
      << " panels)\n";
    s << "lipschitz gap " << gap << '\n';
    if (slack > 0.0) s << "truncation    " << slack << '\n';
  }
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------------------------

std::vector<double> grid_values(const Json& spec, const std::string& key) {
  if (spec.is_array()) return spec.get<std::vector<double>>();
  if (spec.is_object() && spec.contains("log_space")) {
    const auto ls = spec["log_space"].get<std::vector<double>>();
    if (ls.size() != 3 || !(ls[0] > 0.0) || !(ls[1] >= ls[0]) || ls[2] < 1)
      fail(ErrorKind::invalid_parameter, "grid " + key + ": log_space needs [lo > 0, hi, count]");
    const bool integer = spec.value("integer", false);
    const auto count = static_cast<std::size_t>(ls[2]);
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      double v = std::exp(std::log(ls[0]) + f * (std::log(ls[1]) - std::log(ls[0])));
      if (integer) v = std::round(v);
      if (out.empty() || v != out.back()) out.push_back(v);
    }
    return out;
  }
  fail(ErrorKind::invalid_parameter, "grid " + key + ": expected an array or {log_space: [...]}");
}

struct SweepPoint {
  ParamMap grid;
  std::vector<std::string> cells;
  std::string error;
};

int cmd_sweep(const std::string& spec_file, unsigned jobs, const std::string& out_override) {
  std::ifstream in(spec_file);
  if (!in) fail(ErrorKind::invalid_parameter, "cannot read " + spec_file);
  const Json spec = Json::parse(in);
  const std::string command = spec.value("command", std::string("bound"));
  const Json fixed = spec.value("fixed", Json::object());
  const bool oracle = spec.value("oracle", false);
  const std::string out_path = !out_override.empty() ? out_override : spec.value("output", std::string());
  ParamMap base;
  for (auto it = fixed.begin(); it != fixed.end(); ++it) base[it.key()] = it.value().get<double>();

  std::vector<std::string> keys;
  std::vector<std::vector<double>> values;
  for (auto it = spec.at("grid").begin(); it != spec.at("grid").end(); ++it) {
    keys.push_back(it.key());
    values.push_back(grid_values(it.value(), it.key()));
  }
  std::vector<SweepPoint> points(1);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::vector<SweepPoint> next;
    for (const auto& p : points)
      for (double v : values[k]) {
        SweepPoint q = p;
        q.grid[keys[k]] = v;
        next.push_back(q);
      }
    points = std::move(next);
  }

  std::optional<std::pair<std::string, double>> scale;
  if (spec.contains("scale"))
    scale = {spec["scale"].at("param").get<std::string>(), spec["scale"].at("power").get<double>()};
  const bool want_gs = spec.value("polya_gs", false);

  std::vector<std::string> header = keys;
  for (const auto& h : bound_csv_header()) header.push_back(h);
  if (scale) header.push_back("scaled_bound");
  if (want_gs) {
    header.push_back("polya_gs");
    header.push_back("n_polya_gs");
  }
  header.push_back("runtime_s");
  header.push_back("error");

  auto run_point = [&](SweepPoint& pt) {
    const auto start = std::chrono::steady_clock::now();
    ParamMap p = base;
    for (const auto& [k, v] : pt.grid) p[k] = v;
    BoundReport r;
    try {
      if (command == "bound" || command == "clt") {
        const std::string app = spec.at("application").get<std::string>();
        const BoundOutcome o = evaluate_bound(app, p, command == "clt" ? "clt" : "auto", oracle,
                                              kDefaultTailTol);
        r = o.report;
      } else if (command == "build") {
        ParamMap tp = p;
        const std::optional<double> delta =
            tp.count("delta") ? std::optional<double>(tp.at("delta")) : std::nullopt;
        std::optional<std::size_t> ell;
        if (tp.count("ell")) ell = static_cast<std::size_t>(tp.at("ell"));
        tp.erase("delta");
        tp.erase("ell");
        r = evaluate_build(spec.at("target").get<std::string>(), tp, delta, ell, std::nullopt,
                           std::nullopt, spec.value("weight", std::string()), oracle,
                           kDefaultTailTol)
                .report;
      } else {
        fail(ErrorKind::invalid_parameter, "sweep command must be bound, clt or build");
      }
      pt.cells = bound_csv_row(r);
      if (scale) pt.cells.push_back(csv_number(std::pow(p.at(scale->first), scale->second) * r.bound));
      if (want_gs) {
        const double gs = polya_gs(p.at("alpha"), p.at("beta"), p.at("m"), p.at("n"), r.bound);
        pt.cells.push_back(csv_number(gs));
        pt.cells.push_back(csv_number(p.at("n") * gs));
      }
    } catch (const std::exception& e) {
      pt.error = e.what();
      pt.cells.assign(bound_csv_header().size() + (scale ? 1 : 0) + (want_gs ? 2 : 0), "");
    }
    pt.cells.push_back(csv_number(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()));
    pt.cells.push_back(pt.error);
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) run_point(points[i]);
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Output out(out_path);
  CsvWriter w(out.stream());
  w.row(header);
  bool any_error = false;
  for (const auto& pt : points) {
    std::vector<std::string> row;
    for (const auto& k : keys) row.push_back(csv_number(pt.grid.at(k)));
    row.insert(row.end(), pt.cells.begin(), pt.cells.end());
    w.row(row);
    any_error = any_error || !pt.error.empty();
  }
  return any_error ? kExitError : kExitOk;
}

// ---- check -----------------------------------------------------------------------------------

int cmd_check(std::vector<int> ids, bool json) {
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  const std::vector<CriterionResult> results = run_criteria(ids);
  bool all = true;
  Json doc = Json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    if (json)
      doc.push_back({{"id", r.id},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"seconds", r.seconds},
                     {"detail", r.detail}});
    else
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << ' ' << r.name << " (" << r.seconds
                << " s): " << r.detail << '\n';
  }
  if (json) std::cout << doc.dump(2) << '\n';
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bespoke-derivative Stein weights and certified Wasserstein-1 bounds"};
  app.require_subcommand(1);

  CatalogArgs cat;
  auto* c_cat = app.add_subcommand("catalog", "list families, targets and applications");
  c_cat->add_option("--family", cat.family, "show one family, target or application");
  c_cat->add_flag("--json", cat.json, "JSON output");

  WeightsArgs wa;
  auto* c_w = app.add_subcommand("weights", "bespoke weights (i, x, p, pi) for an application");
  c_w->add_option("name", wa.name, "application name (see catalog)")->required();
  c_w->add_option("-p,--param", wa.params, "law parameter key=value");
  c_w->add_option("--target", wa.target, "override the target family");
  c_w->add_option("-t,--target-param", wa.target_params, "target parameter key=value");
  c_w->add_option("--weight", wa.weight, "kernel, one or a positive constant");
  c_w->add_flag("--override", wa.allow_override, "proceed when the moment conditions fail");
  c_w->add_option("--tail-tol", wa.tail_tol, "tail mass left out of countable supports");
  c_w->add_flag("--json", wa.json, "JSON instead of CSV");
  c_w->add_flag("--check", wa.check, "exit 1 unless residual and closed-form checks pass");
  c_w->add_option("-o,--out", wa.out, "output file");

  BoundArgs ba;
  auto* c_b = app.add_subcommand("bound", "assembled Wasserstein-1 bound for an application");
  c_b->add_option("name", ba.name, "application name (see catalog)")->required();
  c_b->add_option("-p,--param", ba.params, "parameter key=value");
  c_b->add_option("--theorem", ba.theorem, "auto or clt")->check(CLI::IsMember({"auto", "clt"}));
  c_b->add_flag("--oracle", ba.oracle, "also compute the exact W1 by quadrature");
  c_b->add_option("--tail-tol", ba.tail_tol, "tail mass left out of countable supports");
  c_b->add_flag("--json", ba.json, "JSON output");
  c_b->add_flag("--check", ba.check, "exit 1 unless printed formula and oracle checks pass");
  c_b->add_option("-o,--out", ba.out, "output file");

  BuildArgs bu;
  double build_delta = 0.0, build_start = 0.0;
  std::size_t build_ell = 0, build_count = 0;
  auto* c_bu = app.add_subcommand("build", "discrete law with degenerate weights on a grid");
  c_bu->add_option("target", bu.target, "target family")->required();
  c_bu->add_option("-p,--param", bu.params, "target parameter key=value");
  auto* o_delta = c_bu->add_option("--delta", build_delta, "mesh");
  auto* o_ell = c_bu->add_option("--ell", build_ell, "number of intervals; solves for the mesh");
  auto* o_start = c_bu->add_option("--start", build_start, "first grid point (default: left end)");
  auto* o_count = c_bu->add_option("--count", build_count, "finite grid with this many points");
  c_bu->add_option("--weight", bu.weight, "kernel (default), one or a positive constant");
  c_bu->add_flag("--oracle", bu.oracle, "also compute the exact W1");
  c_bu->add_option("--tail-tol", bu.tail_tol, "tail mass left out of unbounded grids");
  c_bu->add_flag("--json", bu.json, "JSON output");
  c_bu->add_flag("--check", bu.check, "exit 1 if the oracle exceeds the bound");
  c_bu->add_option("-o,--out", bu.out, "report output file");
  c_bu->add_option("--law-out", bu.law_out, "write the law (.json or .csv)");

  OracleArgs oa;
  auto* c_o = app.add_subcommand("oracle", "exact W1 by quadrature and a Lipschitz lower bound");
  c_o->add_option("name", oa.name, "application name");
  c_o->add_option("-p,--param", oa.params, "parameter key=value");
  c_o->add_option("--law", oa.law_file, "law JSON document instead of an application");
  c_o->add_option("--target", oa.target, "target family (with --law)");
  c_o->add_option("-t,--target-param", oa.target_params, "target parameter key=value");
  c_o->add_option("--tol", oa.tol, "quadrature tolerance");
  c_o->add_option("--probes", oa.probes, "number of |x - t| probes");
  c_o->add_flag("--json", oa.json, "JSON output");
  c_o->add_option("-o,--out", oa.out, "output file");

  std::string sweep_spec, sweep_out;
  unsigned sweep_jobs = 1;
  auto* c_s = app.add_subcommand("sweep", "CSV table over a parameter grid from a JSON spec");
  c_s->add_option("spec", sweep_spec, "sweep specification (JSON)")->required();
  c_s->add_option("-j,--jobs", sweep_jobs, "parallel workers")->check(CLI::PositiveNumber);
  c_s->add_option("-o,--out", sweep_out, "output CSV (overrides the spec)");

  std::vector<int> check_ids;
  bool check_json = false;
  auto* c_c = app.add_subcommand("check", "run acceptance criteria (all, or the listed ids)");
  c_c->add_option("ids", check_ids, "criterion numbers 1-12")->check(CLI::Range(1, kCriterionCount));
  c_c->add_flag("--json", check_json, "JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_cat->parsed()) return cmd_catalog(cat);
    if (c_w->parsed()) return cmd_weights(wa);
    if (c_b->parsed()) return cmd_bound(ba);
    if (c_bu->parsed()) {
      if (o_delta->count()) bu.delta = build_delta;
      if (o_ell->count()) bu.ell = build_ell;
      if (o_start->count()) bu.start = build_start;
      if (o_count->count()) bu.count = build_count;
      return cmd_build(bu);
    }
    if (c_o->parsed()) return cmd_oracle(oa);
    if (c_s->parsed()) return cmd_sweep(sweep_spec, sweep_jobs, sweep_out);
    if (c_c->parsed()) return cmd_check(check_ids, check_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
