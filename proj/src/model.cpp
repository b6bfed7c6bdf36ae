#include "okunfit/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "okunfit/error.hpp"
#include "model_detail.hpp"
#include "okunfit/stats.hpp"

namespace okunfit::okun {

std::string_view to_string(AnchorMode m) noexcept {
    return m == AnchorMode::measured ? "measured" : "chained";
}

AnchorMode parse_anchor_mode(std::string_view text) {
    if (text == "measured") return AnchorMode::measured;
    if (text == "chained") return AnchorMode::chained;
    throw ContractError("unknown anchor mode '" + std::string(text) + "' (expected measured or chained)");
}

PiecewiseOkun::PiecewiseOkun(std::vector<SegmentSpec> segments, std::vector<Anchor> anchors)
    : segments_(std::move(segments)), anchors_(std::move(anchors)) {
    if (segments_.empty()) throw ContractError("model has no segments");
    if (anchors_.size() != segments_.size()) {
        throw ContractError("model needs one anchor per segment, got " + std::to_string(anchors_.size()) +
                            " for " + std::to_string(segments_.size()));
    }
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (s.start_year >= s.end_year) {
            throw ContractError("segment " + std::to_string(s.start_year) + "-" + std::to_string(s.end_year) +
                                " must span at least two years");
        }
        if (k > 0 && s.start_year != segments_[k - 1].end_year + 1) {
            throw ContractError("segments are not contiguous at " + std::to_string(s.start_year));
        }
        if (anchors_[k].year != s.start_year) {
            throw ContractError("anchor year " + std::to_string(anchors_[k].year) +
                                " does not match segment start " + std::to_string(s.start_year));
        }
        if (!std::isfinite(s.a) || !std::isfinite(s.b) || !std::isfinite(anchors_[k].u)) {
            throw ContractError("non-finite model coefficient");
        }
    }
}

std::vector<int> PiecewiseOkun::break_years() const {
    std::vector<int> out;
    for (std::size_t k = 1; k < segments_.size(); ++k) out.push_back(segments_[k].start_year);
    return out;
}

std::vector<std::string> PiecewiseOkun::warnings() const {
    std::vector<std::string> out;
    for (const auto& s : segments_) {
        if (s.b >= 0.0) {
            out.push_back("segment " + std::to_string(s.start_year) + "-" + std::to_string(s.end_year) +
                          ": b >= 0 contradicts Okun's sign convention");
        }
    }
    return out;
}

ts::AnnualSeries predict(const PiecewiseOkun& model, const ts::GrowthSeries& growth) {
    std::vector<ts::YearValue> pts;
    pts.reserve(static_cast<std::size_t>(model.last_year() - model.first_year() + 1));
    for (std::size_t k = 0; k < model.segments().size(); ++k) {
        const auto& seg = model.segments()[k];
        double x1 = 0.0;
        const double anchor = model.anchors()[k].u;
        pts.push_back({seg.start_year, anchor});
        for (int t = seg.start_year + 1; t <= seg.end_year; ++t) {
            x1 += growth.at(t);
            pts.push_back({t, anchor + seg.b * x1 + seg.a * (t - seg.start_year)});
        }
    }
    ts::SeriesInfo info{growth.base().country, ts::Variable::unemployment_rate, ts::Unit::percent_points,
                        "model"};
    return ts::AnnualSeries(std::move(info), std::move(pts), ts::DomainCheck::skip);
}

namespace detail {

Solution2 solve_normal_equations(double s11, double s12, double s22, double r1, double r2) {
    // Eigenvalues of the symmetric 2x2 give the 2-norm condition number.
    const double half_trace = 0.5 * (s11 + s22);
    const double det = s11 * s22 - s12 * s12;
    const double disc = std::sqrt(std::max(half_trace * half_trace - det, 0.0));
    const double lmax = half_trace + disc;
    const double lmin = half_trace - disc;
    if (!(lmax > 0.0) || !(lmin > 0.0) || lmax / lmin > kMaxCondition || !std::isfinite(lmax / lmin)) {
        throw SingularFitError("segment regressors are (nearly) collinear; condition estimate exceeds 1e10");
    }
    // Gaussian elimination with partial pivoting on the first column.
    double m00 = s11, m01 = s12, m10 = s12, m11 = s22, v0 = r1, v1 = r2;
    if (std::abs(m10) > std::abs(m00)) {
        std::swap(m00, m10);
        std::swap(m01, m11);
        std::swap(v0, v1);
    }
    const double f = m10 / m00;
    const double u11 = m11 - f * m01;
    const double w1 = v1 - f * v0;
    Solution2 s;
    s.a = w1 / u11;
    s.b = (v0 - m01 * s.a) / m00;
    return s;
}

SpanLayout layout_span(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                       std::span<const int> break_years, int min_segment) {
    if (u.size() < 2) throw ContractError("fit needs at least two years of unemployment data");
    if (!u.contiguous()) {
        const auto g = u.gaps().front();
        throw GapError("unemployment series has a gap between " + std::to_string(g.first) + " and " +
                       std::to_string(g.second) + "; fits cannot integrate across gaps");
    }
    if (min_segment < 2) throw ContractError("min_segment must be >= 2");
    SpanLayout lay;
    lay.first_year = u.first_year();
    lay.n = static_cast<int>(u.size());
    lay.u = u.values();
    lay.g.assign(static_cast<std::size_t>(lay.n), 0.0);
    for (int i = 1; i < lay.n; ++i) lay.g[static_cast<std::size_t>(i)] = growth.at(lay.first_year + i);
    lay.starts.push_back(0);
    for (int year : break_years) {
        const int p = year - lay.first_year;
        if (p <= 0 || p >= lay.n) {
            throw ContractError("break " + std::to_string(year) + " is not strictly inside " +
                                std::to_string(lay.first_year) + "-" + std::to_string(u.last_year()));
        }
        if (p <= lay.starts.back()) throw ContractError("break years must be strictly increasing");
        lay.starts.push_back(p);
    }
    for (std::size_t k = 0; k < lay.starts.size(); ++k) {
        const int len = lay.segment_end(k) - lay.starts[k] + 1;
        if (len < min_segment) {
            throw ConstraintError("segment starting " + std::to_string(lay.first_year + lay.starts[k]) + " has " +
                                  std::to_string(len) + " years, below min_segment " +
                                  std::to_string(min_segment));
        }
    }
    return lay;
}

Solution2 fit_measured_segment(const SpanLayout& lay, int s, int e) {
    double x1 = 0.0, s11 = 0.0, s12 = 0.0, s22 = 0.0, r1 = 0.0, r2 = 0.0;
    const double anchor = lay.u[static_cast<std::size_t>(s)];
    for (int t = s + 1; t <= e; ++t) {
        x1 += lay.g[static_cast<std::size_t>(t)];
        const double x2 = t - s;
        const double y = lay.u[static_cast<std::size_t>(t)] - anchor;
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        r1 += x1 * y;
        r2 += x2 * y;
    }
    return solve_normal_equations(s11, s12, s22, r1, r2);
}

double measured_segment_sse(const SpanLayout& lay, int s, int e, const Solution2& c) {
    double x1 = 0.0, sse = 0.0;
    const double anchor = lay.u[static_cast<std::size_t>(s)];
    for (int t = s + 1; t <= e; ++t) {
        x1 += lay.g[static_cast<std::size_t>(t)];
        const double r = lay.u[static_cast<std::size_t>(t)] - (anchor + c.b * x1 + c.a * (t - s));
        sse += r * r;
    }
    return sse;
}

std::vector<Solution2> fit_chained_joint(const SpanLayout& lay) {
    const int k_count = static_cast<int>(lay.starts.size());
    const int n = lay.n;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, 2 * k_count);
    Eigen::VectorXd y(n);
    // Increment j belongs to segment k when starts[k] < j <= starts[k+1], the
    // last segment running to the end of the span.
    for (int k = 0; k < k_count; ++k) {
        const int lo = lay.starts[static_cast<std::size_t>(k)];
        const int hi = k + 1 < k_count ? lay.starts[static_cast<std::size_t>(k) + 1] : n - 1;
        double cg = 0.0, cn = 0.0;
        for (int t = 0; t < n; ++t) {
            if (t > lo && t <= hi) {
                cg += lay.g[static_cast<std::size_t>(t)];
                cn += 1.0;
            }
            x(t, 2 * k) = cg;
            x(t, 2 * k + 1) = cn;
        }
    }
    for (int t = 0; t < n; ++t) y(t) = lay.u[static_cast<std::size_t>(t)] - lay.u[0];
    // Same degeneracy rule as the per-segment solve: condition of X'X.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x.transpose() * x, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > kMaxCondition) {
        throw SingularFitError("chained fit: regressors are (nearly) collinear; condition estimate exceeds 1e10");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::VectorXd beta = qr.solve(y);
    std::vector<Solution2> out;
    for (int k = 0; k < k_count; ++k) out.push_back({beta(2 * k), beta(2 * k + 1)});
    return out;
}

PiecewiseOkun assemble(const SpanLayout& lay, const std::vector<Solution2>& coef, AnchorMode mode) {
    std::vector<SegmentSpec> segs;
    std::vector<Anchor> anchors;
    double chained_anchor = lay.u[0];
    for (std::size_t k = 0; k < lay.starts.size(); ++k) {
        const int s = lay.starts[k];
        const int e = lay.segment_end(k);
        segs.push_back({lay.first_year + s, lay.first_year + e, coef[k].b, coef[k].a});
        const double anchor = mode == AnchorMode::measured ? lay.u[static_cast<std::size_t>(s)] : chained_anchor;
        anchors.push_back({lay.first_year + s, anchor});
        if (k + 1 < lay.starts.size()) {
            // Carry the path through the next segment's first year.
            double x1 = 0.0;
            for (int t = s + 1; t <= e + 1; ++t) x1 += lay.g[static_cast<std::size_t>(t)];
            chained_anchor = anchor + coef[k].b * x1 + coef[k].a * (e + 1 - s);
        }
    }
    return PiecewiseOkun(std::move(segs), std::move(anchors));
}

}  // namespace detail

PiecewiseOkun fit_segments(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           std::span<const int> break_years, AnchorMode mode, int min_segment) {
    const auto lay = detail::layout_span(u, growth, break_years, min_segment);
    std::vector<detail::Solution2> coef;
    if (mode == AnchorMode::measured) {
        for (std::size_t k = 0; k < lay.starts.size(); ++k) {
            coef.push_back(detail::fit_measured_segment(lay, lay.starts[k], lay.segment_end(k)));
        }
    } else {
        coef = detail::fit_chained_joint(lay);
    }
    return detail::assemble(lay, coef, mode);
}

namespace {

FitStatistics statistics(std::span<const double> measured, std::span<const double> predicted) {
    if (measured.size() < 3) throw ContractError("evaluate needs at least 3 aligned points");
    std::vector<double> resid(measured.size());
    for (std::size_t i = 0; i < measured.size(); ++i) resid[i] = measured[i] - predicted[i];
    FitStatistics st;
    st.n = static_cast<int>(measured.size());
    st.residual_sigma = stats::population_sd(resid);
    st.rms = stats::rms(resid);
    st.mean_u = stats::mean(measured);
    const auto line = stats::ols_line(predicted, measured);
    st.slope = line.slope;
    st.intercept = line.intercept;
    st.r_squared = line.r_squared;
    double sst = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        sst += (measured[i] - st.mean_u) * (measured[i] - st.mean_u);
        sse += resid[i] * resid[i];
    }
    st.r_squared_direct = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
    return st;
}

}  // namespace

Evaluation evaluate(const ts::AnnualSeries& measured, const ts::AnnualSeries& predicted) {
    auto [m, p] = ts::align(measured, predicted);
    const auto mv = m.values();
    const auto pv = p.values();
    std::vector<ts::YearValue> pts;
    for (std::size_t i = 0; i < mv.size(); ++i) pts.push_back({m.points()[i].year, mv[i] - pv[i]});
    ts::SeriesInfo info{measured.info().country, ts::Variable::unemployment_rate, ts::Unit::percent_points,
                        "residual"};
    FitStatistics st = statistics(mv, pv);
    return Evaluation{ts::AnnualSeries(std::move(info), std::move(pts), ts::DomainCheck::skip), st};
}

FitReport make_report(PiecewiseOkun model, const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                      AnchorMode mode) {
    auto predicted = predict(model, growth);
    auto measured = u.slice(model.first_year(), model.last_year());
    auto ev = evaluate(measured, predicted);
    return FitReport{std::move(model), mode, std::move(measured), std::move(predicted), std::move(ev.residuals),
                     ev.stats, {}};
}

FitReport exclude_years(const FitReport& report, std::span<const int> years) {
    std::set<int> excluded(report.excluded_years.begin(), report.excluded_years.end());
    for (int y : years) {
        if (!report.residuals.contains(y)) {
            throw MissingYearError("cannot exclude " + std::to_string(y) + ": not in the fitted span");
        }
        excluded.insert(y);
    }
    const auto total = report.residuals.size();
    if (static_cast<double>(excluded.size()) > kMaxExcludedFraction * static_cast<double>(total)) {
        throw RefusedError("refusing to exclude " + std::to_string(excluded.size()) + " of " +
                           std::to_string(total) + " years (limit is 20%)");
    }
    std::vector<double> mv, pv;
    for (const auto& p : report.measured.points()) {
        if (excluded.count(p.year)) continue;
        if (auto pred = report.predicted.find(p.year)) {
            mv.push_back(p.value);
            pv.push_back(*pred);
        }
    }
    FitReport out = report;
    out.stats = statistics(mv, pv);
    out.excluded_years.assign(excluded.begin(), excluded.end());
    return out;
}

}  // namespace okunfit::okun
