#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "okunfit/model.hpp"
#include "okunfit/timeseries.hpp"

namespace support {

using namespace okunfit;

inline std::string data_dir() { return OKUNFIT_DATA_DIR; }

inline ts::SeriesInfo gdp_info() { return {"Test", ts::Variable::real_gdp_pc, ts::Unit::currency_per_capita, "gen"}; }
inline ts::SeriesInfo u_info() { return {"Test", ts::Variable::unemployment_rate, ts::Unit::percent_points, "gen"}; }
inline ts::SeriesInfo index_info() { return {"Test", ts::Variable::cpi_index, ts::Unit::index_level, "gen"}; }
inline ts::SeriesInfo diff_info() { return {"Test", ts::Variable::inflation_rate, ts::Unit::index_difference, "gen"}; }

inline ts::AnnualSeries series(ts::SeriesInfo info, int first_year, const std::vector<double>& values,
                               ts::DomainCheck check = ts::DomainCheck::enforce) {
    std::vector<ts::YearValue> pts;
    for (std::size_t i = 0; i < values.size(); ++i) pts.push_back({first_year + static_cast<int>(i), values[i]});
    return ts::AnnualSeries(std::move(info), std::move(pts), check);
}

/// dlnG for years first_year+1 .. first_year+n-1 drawn from N(mean, sd).
inline ts::GrowthSeries random_growth(std::mt19937_64& rng, int first_year, int n, double mean = 2.0,
                                      double sd = 2.2) {
    std::normal_distribution<double> d(mean, sd);
    std::vector<ts::YearValue> pts;
    for (int i = 1; i < n; ++i) pts.push_back({first_year + i, d(rng)});
    ts::SeriesInfo info = gdp_info();
    info.unit = ts::Unit::percent_per_year;
    return ts::GrowthSeries(info, std::move(pts));
}

inline ts::GrowthSeries growth_from(int first_year, const std::vector<double>& g) {
    std::vector<ts::YearValue> pts;
    for (std::size_t i = 0; i < g.size(); ++i) pts.push_back({first_year + 1 + static_cast<int>(i), g[i]});
    ts::SeriesInfo info = gdp_info();
    info.unit = ts::Unit::percent_per_year;
    return ts::GrowthSeries(info, std::move(pts));
}

/// Model with the given segment starts over [first, last]; the path is carried
/// continuously across breaks (the chained convention), so both anchor modes
/// reproduce it exactly.
inline okun::PiecewiseOkun continuous_model(int first, int last, const std::vector<int>& breaks,
                                            const std::vector<std::pair<double, double>>& ba, double u0,
                                            const ts::GrowthSeries& g) {
    std::vector<okun::SegmentSpec> segs;
    std::vector<okun::Anchor> anchors;
    std::vector<int> starts{first};
    starts.insert(starts.end(), breaks.begin(), breaks.end());
    double anchor = u0;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const int s = starts[k];
        const int e = k + 1 < starts.size() ? starts[k + 1] - 1 : last;
        segs.push_back({s, e, ba[k].first, ba[k].second});
        anchors.push_back({s, anchor});
        double x1 = 0.0;
        for (int t = s + 1; t <= e + 1 && t <= last; ++t) x1 += g.at(t);
        anchor = anchor + ba[k].first * x1 + ba[k].second * (e + 1 - s);
    }
    return okun::PiecewiseOkun(std::move(segs), std::move(anchors));
}

}  // namespace support
