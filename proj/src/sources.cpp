#include "okunfit/sources.hpp"

#include <cmath>

#include "okunfit/error.hpp"
#include "okunfit/stats.hpp"

namespace okunfit::sources {

std::string_view to_string(DivergenceFlag f) noexcept {
    switch (f) {
        case DivergenceFlag::ok: return "ok";
        case DivergenceFlag::warn: return "warn";
        case DivergenceFlag::alert: return "alert";
    }
    return "ok";
}

namespace {

PairDrift drift(const LabelledSeries& a, const LabelledSeries& b, const CompareOptions& opt) {
    const auto& trend_from = opt.trend_from;
    auto [x, y] = ts::align(a.series, b.series);
    std::vector<ts::YearValue> pts;
    PairDrift d{a.label, b.label, ts::AnnualSeries({}, {}), 0.0, 0, 0, 0.0, 0.0, 0.0, DivergenceFlag::ok};
    std::vector<double> ty, tr;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const int year = x.points()[i].year;
        const double r = x.points()[i].value / y.points()[i].value;
        pts.push_back({year, r});
        const double div = std::abs(r - 1.0);
        if (div > d.max_div) {
            d.max_div = div;
            d.year_of_max = year;
        }
        if (!trend_from || year >= *trend_from) {
            ty.push_back(year);
            tr.push_back(r);
        }
    }
    if (d.year_of_max == 0) d.year_of_max = pts.front().year;
    if (ty.size() < 2) {
        throw ContractError("ratio " + a.label + "/" + b.label + " has fewer than two years to fit a trend");
    }
    d.trend_from = static_cast<int>(ty.front());
    const auto line = stats::ols_line(ty, tr);
    d.trend_slope = line.slope;
    d.trend_intercept = line.intercept;
    d.trend_r2 = line.r_squared;
    d.flag = d.max_div > opt.alert  ? DivergenceFlag::alert
             : d.max_div > opt.warn ? DivergenceFlag::warn
                                    : DivergenceFlag::ok;
    ts::SeriesInfo info{a.series.info().country, ts::Variable::real_gdp_pc, ts::Unit::index_level,
                        a.label + "/" + b.label};
    d.ratio = ts::AnnualSeries(std::move(info), std::move(pts));
    return d;
}

}  // namespace

SourceComparison compare(std::span<const LabelledSeries> series, int ref_year, const CompareOptions& options) {
    if (series.size() < 2) throw ContractError("compare needs at least two series");
    if (!(options.warn >= 0.0) || !(options.alert >= options.warn)) {
        throw ContractError("divergence thresholds must satisfy 0 <= warn <= alert");
    }
    SourceComparison out;
    out.ref_year = ref_year;
    for (const auto& s : series) {
        if (!s.series.contains(ref_year)) {
            throw MissingYearError("series '" + s.label + "' has no value for reference year " +
                                   std::to_string(ref_year));
        }
        out.normalized.push_back({s.label, ts::normalize(s.series, ref_year)});
    }
    for (std::size_t i = 0; i < out.normalized.size(); ++i) {
        for (std::size_t j = i + 1; j < out.normalized.size(); ++j) {
            out.pairs.push_back(drift(out.normalized[i], out.normalized[j], options));
        }
    }
    return out;
}

double total_growth_factor(const ts::AnnualSeries& s, int from_year, int to_year) {
    const double from = s.at(from_year);
    const double to = s.at(to_year);
    if (!(from > 0.0)) throw DomainError("growth factor needs a positive starting value");
    return to / from;
}

}  // namespace okunfit::sources
