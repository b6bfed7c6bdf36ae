#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "okunfit/breakdetect.hpp"
#include "okunfit/model.hpp"
#include "okunfit/sources.hpp"

namespace okunfit::report {

using Json = nlohmann::ordered_json;

/// {segments: [{start, end, a, b}], anchors: [{year, u}]}
Json to_json(const okun::PiecewiseOkun& model);

/// Reads the segments and anchors of a model file. Throws ParseError on
/// missing or mistyped fields and ContractError on an invalid model.
okun::PiecewiseOkun model_from_json(const Json& j);

Json to_json(const okun::FitStatistics& s);

/// Model, statistics, exclusions, warnings and the residual series inline.
Json to_json(const okun::FitReport& r);

Json to_json(const std::vector<breaks::BreakCandidate>& candidates);
Json to_json(const breaks::InflationBridge& bridge);
Json to_json(const sources::SourceComparison& c);

Json series_json(const ts::AnnualSeries& s);

}  // namespace okunfit::report
