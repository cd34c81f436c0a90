#include <doctest.h>

#include <fstream>
#include <sstream>

#include "stein1d/bespoke.hpp"
#include "stein1d/cases.hpp"
#include "stein1d/io.hpp"

using namespace stein1d;

namespace {
Json load_schema(const std::string& name) {
  std::ifstream in(std::string(STEIN1D_SCHEMA_DIR) + "/" + name);
  REQUIRE(in.good());
  return Json::parse(in);
}
}  // namespace

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_number(0.1) == "0.10000000000000001");
}

TEST_CASE("law json round trip") {
  const auto law = make_discrete(DiscreteFamily::binomial, {{"n", 6.0}, {"t", 0.4}});
  const auto back = law_from_json(Json::parse(to_json(law).dump()));
  CHECK(back.points == law.points);
  CHECK(back.masses == law.masses);
  const auto custom = make_custom_law({0.0, 0.5, 2.0}, {0.2, 0.3, 0.5});
  const auto back2 = law_from_json(to_json(custom));
  CHECK(back2.points == custom.points);
}

TEST_CASE("documents validate against their schemas") {
  const auto app = prepare_application("poisson", {{"lambda", 3.0}});
  const auto ws = compute_weights(app.law, app.target, app.weight);
  CHECK(validate_schema(to_json(app.law), load_schema("law.schema.json")).empty());
  CHECK(validate_schema(to_json(ws), load_schema("weights.schema.json")).empty());
  CHECK(validate_schema(to_json(assess(app)), load_schema("bound_report.schema.json")).empty());
  CHECK(validate_schema(to_json(factors_for(app)), load_schema("factors.schema.json")).empty());
  CHECK(validate_schema(catalog_json(), load_schema("catalog.schema.json")).empty());
  const auto bin = prepare_application("binomial", {{"n", 10.0}, {"t", 0.3}});
  const auto rc = check_range_sufficient(bin.law, bin.target, bin.weight);
  CHECK(validate_schema(to_json(rc), load_schema("range_check.schema.json")).empty());
}

TEST_CASE("schema validation reports problems") {
  const Json schema = {{"type", "object"},
                       {"required", {"x"}},
                       {"properties", {{"x", {{"type", "number"}, {"minimum", 0}}}}}};
  CHECK(validate_schema({{"x", 1.5}}, schema).empty());
  CHECK_FALSE(validate_schema({{"x", -1}}, schema).empty());
  CHECK_FALSE(validate_schema({{"y", 1}}, schema).empty());
  CHECK_FALSE(validate_schema({{"x", "one"}}, schema).empty());
}

TEST_CASE("weights csv has one row per atom") {
  const auto app = prepare_application("binomial", {{"n", 4.0}, {"t", 0.3}});
  const auto ws = compute_weights(app.law, app.target, app.weight);
  std::ostringstream out;
  write_weights_csv(out, app.law, ws);
  const std::string s = out.str();
  CHECK(s.rfind("i,x,p,pi,tail\r\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 6);
}
