#include "okunfit/report.hpp"

#include "okunfit/error.hpp"

namespace okunfit::report {

namespace {

template <typename T>
T required(const Json& obj, const char* key, const char* ctx) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(std::string(ctx) + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string(ctx) + ": field '" + key + "' has the wrong type");
    }
}

}  // namespace

Json to_json(const okun::PiecewiseOkun& model) {
    Json segs = Json::array();
    for (const auto& s : model.segments()) {
        segs.push_back(Json{{"start", s.start_year}, {"end", s.end_year}, {"a", s.a}, {"b", s.b}});
    }
    Json anchors = Json::array();
    for (const auto& a : model.anchors()) anchors.push_back(Json{{"year", a.year}, {"u", a.u}});
    return Json{{"segments", segs}, {"anchors", anchors}};
}

okun::PiecewiseOkun model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
        throw ParseError("model: 'segments' array missing");
    }
    if (!j.contains("anchors") || !j["anchors"].is_array()) throw ParseError("model: 'anchors' array missing");
    std::vector<okun::SegmentSpec> segs;
    for (const auto& s : j["segments"]) {
        segs.push_back({required<int>(s, "start", "model segment"), required<int>(s, "end", "model segment"),
                        required<double>(s, "b", "model segment"), required<double>(s, "a", "model segment")});
    }
    std::vector<okun::Anchor> anchors;
    for (const auto& a : j["anchors"]) {
        anchors.push_back({required<int>(a, "year", "model anchor"), required<double>(a, "u", "model anchor")});
    }
    return okun::PiecewiseOkun(std::move(segs), std::move(anchors));
}

Json to_json(const okun::FitStatistics& s) {
    return Json{{"n", s.n},
                {"residual_sigma", s.residual_sigma},
                {"r_squared", s.r_squared},
                {"regression_line", Json{{"slope", s.slope}, {"intercept", s.intercept}}},
                {"r_squared_direct", s.r_squared_direct},
                {"rms", s.rms},
                {"mean_u", s.mean_u}};
}

Json to_json(const okun::FitReport& r) {
    Json residuals = Json::array();
    for (const auto& p : r.residuals.points()) {
        residuals.push_back(Json{{"year", p.year},
                                 {"measured", r.measured.at(p.year)},
                                 {"predicted", r.predicted.at(p.year)},
                                 {"residual", p.value}});
    }
    Json j;
    j["model"] = to_json(r.model);
    j["anchor_mode"] = std::string(okun::to_string(r.anchor_mode));
    j["break_years"] = r.model.break_years();
    j["statistics"] = to_json(r.stats);
    j["excluded_years"] = r.excluded_years;
    j["warnings"] = r.model.warnings();
    j["residuals"] = residuals;
    return j;
}

Json to_json(const std::vector<breaks::BreakCandidate>& candidates) {
    Json out = Json::array();
    for (const auto& c : candidates) {
        out.push_back(Json{{"year", c.year}, {"score", c.score}, {"slope_change", c.slope_change}});
    }
    return out;
}

Json to_json(const breaks::InflationBridge& bridge) {
    Json segs = Json::array();
    for (const auto& s : bridge.segments) {
        segs.push_back(Json{{"start", s.start_year}, {"end", s.end_year}, {"scale", s.scale}});
    }
    Json dummies = Json::array();
    for (const auto& d : bridge.dummies) dummies.push_back(Json{{"year", d.year}, {"offset", d.offset}});
    return Json{{"segments", segs},
                {"dummies", dummies},
                {"rms", bridge.rms},
                {"scale_chain", breaks::scale_chain(bridge)},
                {"step_factors", breaks::step_factors(bridge)}};
}

Json to_json(const sources::SourceComparison& c) {
    Json pairs = Json::array();
    for (const auto& p : c.pairs) {
        pairs.push_back(Json{{"a", p.a},
                             {"b", p.b},
                             {"max_div", p.max_div},
                             {"year_of_max", p.year_of_max},
                             {"trend_from", p.trend_from},
                             {"trend_slope", p.trend_slope},
                             {"trend_r2", p.trend_r2},
                             {"flag", std::string(sources::to_string(p.flag))}});
    }
    return Json{{"ref_year", c.ref_year}, {"pairs", pairs}};
}

Json series_json(const ts::AnnualSeries& s) {
    Json out = Json::array();
    for (const auto& p : s.points()) out.push_back(Json{{"year", p.year}, {"value", p.value}});
    return out;
}

}  // namespace okunfit::report
