#include <cmath>
#include <random>
#include <string>

#include "okunfit/error.hpp"
#include "okunfit/model.hpp"

namespace okunfit::okun {

ts::QuarterlySeries predict_quarterly(const PiecewiseOkun& model, const ts::QuarterlySeries& quarterly_growth,
                                      double u_start) {
    if (quarterly_growth.size() == 0) throw ContractError("predict_quarterly: no growth quarters");
    if (!std::isfinite(u_start)) throw ContractError("predict_quarterly: non-finite starting rate");
    const auto& seg = model.segments().back();
    const auto pts = quarterly_growth.points();
    std::vector<ts::QuarterValue> out;
    out.push_back({pts.front().quarter.prev(), u_start});
    double u = u_start;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0 && pts[i].quarter != pts[i - 1].quarter.next()) {
            throw GapError("predict_quarterly: missing quarter after " + pts[i - 1].quarter.to_string());
        }
        u += seg.b * pts[i].value + seg.a / 4.0;
        out.push_back({pts[i].quarter, u});
    }
    ts::SeriesInfo info{quarterly_growth.info().country, ts::Variable::unemployment_rate,
                        ts::Unit::percent_points, "model"};
    return ts::QuarterlySeries(std::move(info), std::move(out), ts::DomainCheck::skip);
}

double implied_quarterly_growth(const SegmentSpec& segment, double u_prev, double u_target) {
    if (segment.b == 0.0) throw ConstraintError("implied growth is undefined for b = 0");
    return (u_target - u_prev - segment.a / 4.0) / segment.b;
}

ts::AnnualSeries synthesize(const PiecewiseOkun& model, const ts::GrowthSeries& growth, double noise_sigma,
                            std::uint64_t seed) {
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw ContractError("noise sigma must be finite and >= 0");
    }
    const auto clean = predict(model, growth);
    if (noise_sigma == 0.0) return clean;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    std::vector<ts::YearValue> pts;
    pts.reserve(clean.size());
    for (const auto& p : clean.points()) pts.push_back({p.year, p.value + noise(rng)});
    ts::SeriesInfo info = clean.info();
    info.source = "synthetic";
    return ts::AnnualSeries(std::move(info), std::move(pts), ts::DomainCheck::skip);
}

}  // namespace okunfit::okun
