#include "stein1d/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace stein1d {

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
Json optional_number(const std::optional<T>& x) {
  return x ? number_or_null(*x) : Json(nullptr);
}

Json vector_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number_or_null(x));
  return a;
}

Json params_schema(const std::vector<ParamSpec>& ps) {
  Json a = Json::array();
  for (const auto& p : ps)
    a.push_back({{"name", p.name}, {"description", p.description}, {"example", p.example}});
  return a;
}

std::string type_of(const Json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool type_matches(const Json& v, const std::string& t) {
  const std::string actual = type_of(v);
  return actual == t || (t == "number" && actual == "integer");
}

void validate_into(const Json& doc, const Json& schema, const std::string& path,
                   std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const Json& t = schema["type"];
    bool ok = false;
    if (t.is_array()) {
      for (const auto& alt : t) ok = ok || type_matches(doc, alt.get<std::string>());
    } else {
      ok = type_matches(doc, t.get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": expected " + t.dump() + ", got " + type_of(doc));
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == doc;
    if (!found) errors.push_back(path + ": value " + doc.dump() + " not in enum");
  }
  if (schema.contains("minimum") && doc.is_number() &&
      doc.get<double>() < schema["minimum"].get<double>())
    errors.push_back(path + ": below minimum");
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!doc.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key '" + key.get<std::string>() + "'");
    const Json props = schema.value("properties", Json::object());
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (props.contains(it.key())) {
        validate_into(it.value(), props[it.key()], path + "/" + it.key(), errors);
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"].is_boolean() &&
                 !schema["additionalProperties"].get<bool>()) {
        errors.push_back(path + ": unexpected key '" + it.key() + "'");
      }
    }
  }
  if (doc.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < doc.size(); ++i)
      validate_into(doc[i], schema["items"], path + "/" + std::to_string(i), errors);
}

}  // namespace

Json to_json(const ParamMap& params) {
  Json o = Json::object();
  for (const auto& [k, v] : params) o[k] = v;
  return o;
}

Json to_json(const DiscreteLaw& law) {
  Json o;
  o["family"] = to_string(law.family);
  o["params"] = to_json(law.params);
  o["points"] = vector_json(law.points);
  o["masses"] = vector_json(law.masses);
  if (law.truncation) {
    const Truncation& t = *law.truncation;
    o["truncation"] = {{"cut_index", t.cut_index},
                       {"dropped_mass", t.dropped_mass},
                       {"tail_tol", t.tail_tol},
                       {"tail_points", vector_json(t.tail_points)},
                       {"tail_masses", vector_json(t.tail_masses)}};
  } else {
    o["truncation"] = nullptr;
  }
  return o;
}

DiscreteLaw law_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::invalid_parameter, "law document must be an object");
  const DiscreteFamily family =
      discrete_family_from_string(doc.value("family", std::string("custom")));
  ParamMap params;
  if (doc.contains("params"))
    for (auto it = doc["params"].begin(); it != doc["params"].end(); ++it)
      params[it.key()] = it.value().get<double>();
  if (!doc.contains("points")) {
    if (family == DiscreteFamily::custom)
      fail(ErrorKind::invalid_parameter, "custom law document needs points and masses");
    return make_discrete(family, params);
  }
  DiscreteLaw law;
  law.family = family;
  law.params = params;
  law.points = doc.at("points").get<std::vector<double>>();
  law.masses = doc.at("masses").get<std::vector<double>>();
  if (doc.contains("truncation") && !doc["truncation"].is_null()) {
    const Json& t = doc["truncation"];
    Truncation tr;
    tr.cut_index = t.at("cut_index").get<std::size_t>();
    tr.dropped_mass = t.at("dropped_mass").get<double>();
    tr.tail_tol = t.value("tail_tol", kDefaultTailTol);
    tr.tail_points = t.value("tail_points", std::vector<double>{});
    tr.tail_masses = t.value("tail_masses", std::vector<double>{});
    law.truncation = tr;
  }
  validate_law(law);
  return law;
}

Json to_json(const ContinuousTarget& t) {
  Json o;
  o["family"] = to_string(t.family);
  o["params"] = to_json(t.params);
  o["support"] = {number_or_null(t.a), number_or_null(t.b)};
  o["mean"] = t.mean;
  o["variance"] = optional_number(t.variance);
  if (t.ip)
    o["ip_coeffs"] = {{"alpha", t.ip->alpha}, {"beta", t.ip->beta}, {"gamma", t.ip->gamma}};
  else
    o["ip_coeffs"] = nullptr;
  return o;
}

Json to_json(const ConditionReport& c) {
  Json o;
  o["score_mean"] = c.score_mean;
  o["identity_residual"] = c.identity_residual;
  o["tolerance"] = c.tolerance;
  o["pass"] = c.pass;
  o["mean_mismatch"] = optional_number(c.mean_mismatch);
  o["variance_mismatch"] = optional_number(c.variance_mismatch);
  return o;
}

Json to_json(const WeightSequence& ws) {
  Json o;
  o["source"] = to_string(ws.source);
  o["values"] = vector_json(ws.values);
  o["tail_values"] = vector_json(ws.tail_values);
  o["in_unit_interval"] = ws.in_unit_interval;
  o["max_residual"] = number_or_null(ws.max_residual);
  o["condition_override"] = ws.condition_override;
  o["conditions"] = ws.conditions ? to_json(*ws.conditions) : Json(nullptr);
  o["edge_ratio"] = optional_number(ws.edge_ratio);
  o["edge_defect"] = optional_number(ws.edge_defect);
  return o;
}

Json to_json(const GridInfo& g) {
  return {{"points", g.points},
          {"min_edge_distance", g.min_edge_distance},
          {"lower", g.lower},
          {"upper", g.upper}};
}

Json to_json(const SteinFactors& f) {
  Json o;
  o["provenance"] = to_string(f.provenance);
  o["c0"] = number_or_null(f.c0);
  o["c1"] = number_or_null(f.c1);
  o["c_combined"] = optional_number(f.c_combined);
  o["tau_prime_fprime"] = optional_number(f.tau_prime_fprime);
  o["piecewise_c0"] = f.piecewise_c0 ? vector_json(*f.piecewise_c0) : Json(nullptr);
  o["piecewise_c1"] = f.piecewise_c1 ? vector_json(*f.piecewise_c1) : Json(nullptr);
  o["piecewise_c0_unhalved"] =
      f.piecewise_c0_unhalved ? vector_json(*f.piecewise_c0_unhalved) : Json(nullptr);
  o["grid"] = f.grid ? to_json(*f.grid) : Json(nullptr);
  return o;
}

Json to_json(const BoundReport& r) {
  Json o;
  o["bound"] = number_or_null(r.bound);
  o["theorem"] = to_string(r.theorem);
  o["terms"] = {{"first_order", r.terms.first_order},
                {"second_order", r.terms.second_order},
                {"truncation_slack", r.terms.truncation_slack},
                {"standardization_slack", r.terms.standardization_slack}};
  o["approximate"] = r.approximate;
  o["mesh"] = optional_number(r.mesh);
  o["first_moment"] = r.first_moment;
  o["second_moment"] = r.second_moment;
  o["weight_source"] = to_string(r.weight_source);
  o["weights_in_unit_interval"] = r.weights_in_unit_interval;
  o["oracle_w1"] = optional_number(r.oracle_w1);
  o["ratio"] = optional_number(r.ratio);
  o["comparison"] = optional_number(r.comparison);
  if (r.factors) {
    // Per-interval arrays can be long; the report keeps the scalars.
    Json f = to_json(*r.factors);
    f.erase("piecewise_c0");
    f.erase("piecewise_c1");
    f.erase("piecewise_c0_unhalved");
    o["factors"] = f;
  } else {
    o["factors"] = nullptr;
  }
  return o;
}

Json to_json(const RangeCheck& r) {
  return {{"verdict", to_string(r.verdict)},
          {"upper_condition", r.upper_condition},
          {"lower_condition", r.lower_condition},
          {"sign_tests_prove", r.sign_tests_prove},
          {"enumeration_violation", r.enumeration_violation},
          {"min_weight", r.min_weight},
          {"max_weight", r.max_weight}};
}

Json catalog_json() {
  Json o;
  Json fams = Json::array();
  for (const auto& f : discrete_catalog())
    fams.push_back({{"family", to_string(f.family)},
                    {"countable", is_countable(f.family)},
                    {"params", params_schema(f.params)}});
  Json targets = Json::array();
  for (const auto& t : target_catalog())
    targets.push_back({{"family", to_string(t.family)}, {"params", params_schema(t.params)}});
  Json apps = Json::array();
  for (const auto& a : applications())
    apps.push_back({{"name", a.name},
                    {"family", to_string(a.family)},
                    {"target", to_string(a.target)},
                    {"weight", a.weight},
                    {"theorem", to_string(a.theorem)},
                    {"params", params_schema(a.params)},
                    {"summary", a.summary}});
  o["discrete_families"] = fams;
  o["targets"] = targets;
  o["applications"] = apps;
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << "\r\n";
}

void write_law_csv(std::ostream& out, const DiscreteLaw& law) {
  CsvWriter w(out);
  w.row({"point", "mass"});
  for (std::size_t i = 0; i < law.size(); ++i)
    w.row({csv_number(law.points[i]), csv_number(law.masses[i])});
}

void write_weights_csv(std::ostream& out, const DiscreteLaw& law, const WeightSequence& ws) {
  const SupportView v = full_view(law);
  if (ws.values.size() + ws.tail_values.size() != v.size())
    fail(ErrorKind::invalid_parameter, "weights misaligned with the law");
  CsvWriter w(out);
  w.row({"i", "x", "p", "pi", "tail"});
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool tail = i >= ws.values.size();
    const double pi = tail ? ws.tail_values[i - ws.values.size()] : ws.values[i];
    w.row({std::to_string(i), csv_number(v.points[i]), csv_number(v.masses[i]), csv_number(pi),
           tail ? "1" : "0"});
  }
}

std::vector<std::string> bound_csv_header() {
  return {"bound",      "theorem",       "first_order", "second_order", "truncation_slack",
          "standardization_slack", "approximate", "mesh", "oracle_w1", "ratio"};
}

std::vector<std::string> bound_csv_row(const BoundReport& r) {
  auto opt = [](const std::optional<double>& x) { return x ? csv_number(*x) : std::string(); };
  return {csv_number(r.bound),
          to_string(r.theorem),
          csv_number(r.terms.first_order),
          csv_number(r.terms.second_order),
          csv_number(r.terms.truncation_slack),
          csv_number(r.terms.standardization_slack),
          r.approximate ? "true" : "false",
          opt(r.mesh),
          opt(r.oracle_w1),
          opt(r.ratio)};
}

std::vector<std::string> validate_schema(const Json& doc, const Json& schema) {
  std::vector<std::string> errors;
  validate_into(doc, schema, "", errors);
  return errors;
}

}  // namespace stein1d
