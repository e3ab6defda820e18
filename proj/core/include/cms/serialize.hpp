#pragma once
// JSON and CSV forms of measures, tables and reports. Rationals are written
// as "p/q" strings and enclosures as {"lo", "hi"}; no float appears in a
// certificate field.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cms/densusp.hpp"
#include "cms/entropy.hpp"
#include "cms/escape.hpp"
#include "cms/flow.hpp"
#include "cms/limits.hpp"
#include "cms/metric.hpp"
#include "cms/roof.hpp"
#include "cms/test_function.hpp"

namespace cms {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const Interval& v);
Json to_json(const Word& w);
Json to_json(const PeriodicMeasure& mu);
Json to_json(const ConvexCombination& nu);
Json to_json(const CylinderFunction& f);
Json to_json(const MeasureLike& m);
Json to_json(const DistanceBracket& d);
Json to_json(const InvarianceReport& r);
Json to_json(const FProbe& p);
Json to_json(const StructureReport& r);
Json to_json(const LimitReport& r);
Json to_json(const EscapeResult& r);
Json to_json(const EntropyReport& r);
Json to_json(const ClassRReport& r);
Json to_json(const C0Report& r);
Json to_json(const FlowMeasure& nu);
Json to_json(const FlowLimitReport& r);
Json to_json(const FlowEscapeResult& r);
Json to_json(const DensuspResult& r);

Rational rational_from_json(const Json& j);
Word word_from_json(const Json& j);
/// {"kind": "combination", "terms": [{"weight": "1/2", "orbit": [1, 2]}, ...]}
ConvexCombination combination_from_json(const Json& j, const ShiftSpec& spec);
/// {"kind": "cylinder_function", "depth_caps": [{"depth": d, "cap": c}, ...],
///  "entries": [[[word...], "num", "den"], ...]}
CylinderFunction cylinder_function_from_json(const Json& j);
MeasureLike measure_from_json(const Json& j, const ShiftSpec& spec);

/// "w1:(word);w2:(word);..." or a bare "(word)" of weight 1.
ConvexCombination parse_combination(std::string_view text, const ShiftSpec& spec);
/// An inline combination, or "@path" to a JSON measure file.
MeasureLike resolve_measure(std::string_view reference, const ShiftSpec& spec);

/// Rounded to `digits` decimals, half away from zero. For display only.
std::string decimal_string(const Rational& q, unsigned digits = 12);

/// Columns n, cylinder, numerator, denominator, decimal_display_only. The
/// cylinder cell is space separated.
void write_trace_csv(std::ostream& out, const std::vector<CylinderTrace>& traces);
/// One column per named sequence: rows (n, name, numerator, denominator, decimal).
void write_series_csv(std::ostream& out, const std::vector<std::string>& names,
                      const std::vector<std::vector<Rational>>& series);

}  // namespace cms
