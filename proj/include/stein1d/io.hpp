#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "stein1d/bespoke.hpp"
#include "stein1d/bounds.hpp"
#include "stein1d/cases.hpp"
#include "stein1d/discretes.hpp"
#include "stein1d/factors.hpp"
#include "stein1d/targets.hpp"

namespace stein1d {

using Json = nlohmann::ordered_json;

Json to_json(const ParamMap& params);
Json to_json(const DiscreteLaw& law);
DiscreteLaw law_from_json(const Json& doc);
Json to_json(const ContinuousTarget& target);
Json to_json(const ConditionReport& c);
Json to_json(const WeightSequence& ws);
Json to_json(const GridInfo& g);
Json to_json(const SteinFactors& f);
Json to_json(const BoundReport& r);
Json to_json(const RangeCheck& r);
Json catalog_json();

// RFC 4180: fields containing a comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_field(const std::string& s);
std::string csv_number(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

// point,mass
void write_law_csv(std::ostream& out, const DiscreteLaw& law);
// i,x,p,pi over retained atoms then the recorded tail (tail rows flagged).
void write_weights_csv(std::ostream& out, const DiscreteLaw& law, const WeightSequence& ws);

std::vector<std::string> bound_csv_header();
std::vector<std::string> bound_csv_row(const BoundReport& r);

// Subset of JSON Schema: type, required, properties, items, enum, minimum,
// additionalProperties (boolean). Returns one message per violation, empty when valid.
std::vector<std::string> validate_schema(const Json& doc, const Json& schema);

}  // namespace stein1d
