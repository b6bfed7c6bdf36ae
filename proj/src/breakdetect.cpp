#include "okunfit/breakdetect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "okunfit/error.hpp"
#include "okunfit/stats.hpp"

namespace okunfit::breaks {

namespace {

constexpr int kMaxHingeBreaks = 6;

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxHingeBreaks + 2,
                                  kMaxHingeBreaks + 2>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxHingeBreaks + 2, 1>;

void require_contiguous(const ts::AnnualSeries& y, const char* what) {
    if (y.empty()) throw ContractError(std::string(what) + ": empty series");
    if (!y.contiguous()) {
        const auto g = y.gaps().front();
        throw GapError(std::string(what) + ": series has a gap between " + std::to_string(g.first) +
                       " and " + std::to_string(g.second));
    }
}

void check_search_shape(int n, int n_breaks, int min_segment) {
    if (n_breaks < 0) throw ContractError("number of breaks must be >= 0");
    if (min_segment < 3) throw ConstraintError("min_segment must be >= 3, got " + std::to_string(min_segment));
    if (n_breaks > kMaxHingeBreaks) {
        throw ContractError("hinge search supports at most " + std::to_string(kMaxHingeBreaks) + " breaks");
    }
    if (n < (n_breaks + 1) * min_segment) {
        throw ConstraintError("series of " + std::to_string(n) + " points cannot hold " +
                              std::to_string(n_breaks + 1) + " segments of at least " +
                              std::to_string(min_segment) + " points");
    }
}

// Suffix sums over positions i = 0..n-1 of the centred curve. With them the
// Gram matrix of the basis {1, i, (i - p1)+, ...} is assembled in O(k^2).
struct SuffixSums {
    std::vector<double> s0, s1, s2, sy, siy;
    double yy = 0.0;

    explicit SuffixSums(std::span<const double> y) {
        const std::size_t n = y.size();
        s0.assign(n + 1, 0.0);
        s1.assign(n + 1, 0.0);
        s2.assign(n + 1, 0.0);
        sy.assign(n + 1, 0.0);
        siy.assign(n + 1, 0.0);
        const double ybar = stats::mean(y);
        for (std::size_t j = n; j-- > 0;) {
            const double i = static_cast<double>(j);
            const double yc = y[j] - ybar;
            s0[j] = s0[j + 1] + 1.0;
            s1[j] = s1[j + 1] + i;
            s2[j] = s2[j + 1] + i * i;
            sy[j] = sy[j + 1] + yc;
            siy[j] = siy[j + 1] + i * yc;
            yy += yc * yc;
        }
    }

    double sse(std::span<const int> p) const {
        const int m = static_cast<int>(p.size()) + 2;
        SmallMatrix g(m, m);
        SmallVector r(m);
        g(0, 0) = s0[0];
        g(0, 1) = g(1, 0) = s1[0];
        g(1, 1) = s2[0];
        r(0) = sy[0];
        r(1) = siy[0];
        for (int a = 0; a < m - 2; ++a) {
            const auto pa = static_cast<std::size_t>(p[a]);
            const double da = p[a];
            g(0, a + 2) = g(a + 2, 0) = s1[pa] - da * s0[pa];
            g(1, a + 2) = g(a + 2, 1) = s2[pa] - da * s1[pa];
            r(a + 2) = siy[pa] - da * sy[pa];
            for (int b = a; b < m - 2; ++b) {
                const double db = p[b];
                const auto q = static_cast<std::size_t>(std::max(p[a], p[b]));
                g(a + 2, b + 2) = g(b + 2, a + 2) = s2[q] - (da + db) * s1[q] + da * db * s0[q];
            }
        }
        Eigen::LDLT<SmallMatrix> ldlt(g);
        if (ldlt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
        const SmallVector beta = ldlt.solve(r);
        // Quadratic in the solve error, so a slightly inexact beta costs little.
        const double sse = yy - 2.0 * beta.dot(r) + beta.dot(g * beta);
        return std::max(sse, 0.0);
    }
};

std::vector<int> interior_positions(int n) {
    std::vector<int> all(static_cast<std::size_t>(std::max(n - 1, 0)));
    std::iota(all.begin(), all.end(), 1);
    return all;
}

std::vector<int> to_years(const ts::AnnualSeries& y, std::span<const int> positions) {
    std::vector<int> years;
    years.reserve(positions.size());
    for (int p : positions) years.push_back(y.first_year() + p);
    return years;
}

}  // namespace

ts::AnnualSeries difference_curve(const ts::AnnualSeries& cpi_cum, const ts::AnnualSeries& dgdp_cum) {
    auto [c, d] = ts::align(cpi_cum, dgdp_cum);
    std::vector<ts::YearValue> pts;
    pts.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        pts.push_back({c.points()[i].year, c.points()[i].value - d.points()[i].value});
    }
    ts::SeriesInfo info{cpi_cum.info().country, ts::Variable::inflation_rate, ts::Unit::index_difference,
                        cpi_cum.info().source + "-" + dgdp_cum.info().source};
    return ts::AnnualSeries(std::move(info), std::move(pts), ts::DomainCheck::skip);
}

HingeFit hinge_fit(const ts::AnnualSeries& y, std::span<const int> break_years) {
    require_contiguous(y, "hinge_fit");
    const int n = static_cast<int>(y.size());
    std::vector<int> positions;
    for (int year : break_years) {
        const int p = year - y.first_year();
        if (p <= 0 || p >= n) {
            throw ContractError("hinge_fit: break " + std::to_string(year) + " not strictly inside the span");
        }
        if (!positions.empty() && p <= positions.back()) {
            throw ContractError("hinge_fit: break years must be strictly increasing");
        }
        positions.push_back(p);
    }
    const int m = static_cast<int>(positions.size()) + 2;
    if (n < m) throw ConstraintError("hinge_fit: fewer points than parameters");

    Eigen::MatrixXd x(n, m);
    Eigen::VectorXd v(n);
    const auto values = y.values();
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = i;
        for (int a = 0; a < m - 2; ++a) x(i, a + 2) = std::max(0, i - positions[static_cast<std::size_t>(a)]);
        v(i) = values[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < m) throw SingularFitError("hinge_fit: design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(v);
    const Eigen::VectorXd fitted = x * beta;

    HingeFit fit;
    fit.break_years.assign(break_years.begin(), break_years.end());
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.fitted.assign(fitted.data(), fitted.data() + fitted.size());
    fit.rms = std::sqrt((v - fitted).squaredNorm() / n);
    return fit;
}

HingeFit best_hinge_fit(const ts::AnnualSeries& y, int n_breaks, int min_segment, Backend backend) {
    if (backend == Backend::reference) return detail::best_hinge_fit_reference(y, n_breaks, min_segment);
    require_contiguous(y, "best_hinge_fit");
    const int n = static_cast<int>(y.size());
    check_search_shape(n, n_breaks, min_segment);

    const auto allowed = interior_positions(n);
    const Placements placements = enumerate_placements(allowed, n_breaks, n, min_segment);
    if (placements.count() == 0) throw ConstraintError("best_hinge_fit: no admissible placement");

    const auto values = y.values();
    const SuffixSums sums(values);
    std::vector<double> rms(placements.count());
    const auto count = static_cast<std::ptrdiff_t>(placements.count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
        rms[static_cast<std::size_t>(j)] = std::sqrt(sums.sse(placements.at(static_cast<std::size_t>(j))) / n);
    }
    const std::size_t best = select_best(rms);
    if (best == npos) throw SingularFitError("best_hinge_fit: every placement is singular");
    return hinge_fit(y, to_years(y, placements.at(best)));
}

std::vector<BreakCandidate> candidate_breaks(const ts::AnnualSeries& diff, int max_breaks, int min_segment,
                                             const CandidateOptions& options) {
    require_contiguous(diff, "candidate_breaks");
    const int n = static_cast<int>(diff.size());
    check_search_shape(n, max_breaks, min_segment);

    const auto values = diff.values();
    const double perfect = 1e-6 * stats::population_sd(values);

    HingeFit accepted = best_hinge_fit(diff, 0, min_segment, options.backend);
    for (int k = 1; k <= max_breaks; ++k) {
        if (accepted.rms <= perfect) break;
        HingeFit next = best_hinge_fit(diff, k, min_segment, options.backend);
        if ((accepted.rms - next.rms) >= options.min_relative_improvement * accepted.rms) {
            accepted = std::move(next);
        }
    }

    std::vector<BreakCandidate> out;
    const auto& years = accepted.break_years;
    for (std::size_t a = 0; a < years.size(); ++a) {
        std::vector<int> without;
        for (std::size_t b = 0; b < years.size(); ++b) {
            if (b != a) without.push_back(years[b]);
        }
        const double rms_without = hinge_fit(diff, without).rms;
        out.push_back({years[a], accepted.coefficients[a + 2], std::max(0.0, rms_without - accepted.rms)});
    }
    return out;  // break years come out of the search already sorted
}

InflationBridge bridge_fit(const ts::AnnualSeries& cpi_cum, const ts::AnnualSeries& dgdp_cum,
                           std::span<const int> break_years, std::span<const int> dummy_years) {
    auto [c, d] = ts::align(cpi_cum, dgdp_cum);
    const auto years = c.years();
    const int first = years.front();
    const int last = years.back();

    std::vector<int> starts{first};
    for (int b : break_years) {
        if (b <= first || b > last) {
            throw ContractError("bridge_fit: break " + std::to_string(b) + " outside (" +
                                std::to_string(first) + ", " + std::to_string(last) + "]");
        }
        if (b <= starts.back()) throw ContractError("bridge_fit: break years must be strictly increasing");
        starts.push_back(b);
    }
    std::set<int> dummies;
    for (int y : dummy_years) {
        if (!c.contains(y)) {
            throw MissingYearError("bridge_fit: dummy year " + std::to_string(y) + " not in the common span");
        }
        if (!dummies.insert(y).second) throw ContractError("bridge_fit: dummy year listed twice");
    }

    InflationBridge bridge;
    double sse = 0.0;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const int s = starts[k];
        const int e = k + 1 < starts.size() ? starts[k + 1] - 1 : last;
        double scd = 0.0, sdd = 0.0;
        int used = 0, present = 0;
        for (std::size_t i = 0; i < years.size(); ++i) {
            if (years[i] < s || years[i] > e) continue;
            ++present;
            if (dummies.count(years[i])) continue;
            const double cv = c.points()[i].value, dv = d.points()[i].value;
            scd += cv * dv;
            sdd += dv * dv;
            ++used;
        }
        if (present <= 1) {
            throw ConstraintError("bridge_fit: segment " + std::to_string(s) + "-" + std::to_string(e) +
                                  " holds " + std::to_string(present) + " year(s)");
        }
        if (used == 0 || !(sdd > 0.0)) {
            throw ConstraintError("bridge_fit: segment " + std::to_string(s) + "-" + std::to_string(e) +
                                  " has no usable years outside dummies");
        }
        const double scale = scd / sdd;
        if (!(scale > 0.0)) {
            throw ConstraintError("bridge_fit: non-positive scale in segment starting " + std::to_string(s));
        }
        bridge.segments.push_back({s, e, scale});
        for (std::size_t i = 0; i < years.size(); ++i) {
            if (years[i] < s || years[i] > e) continue;
            const double resid = c.points()[i].value - scale * d.points()[i].value;
            if (dummies.count(years[i])) {
                bridge.dummies.push_back({years[i], resid});
            } else {
                sse += resid * resid;
            }
        }
    }
    bridge.rms = std::sqrt(sse / static_cast<double>(years.size()));
    return bridge;
}

std::vector<double> bridge_fitted(const InflationBridge& bridge, const ts::AnnualSeries& dgdp_cum) {
    std::vector<double> out;
    out.reserve(dgdp_cum.size());
    for (const auto& p : dgdp_cum.points()) {
        double scale = std::numeric_limits<double>::quiet_NaN();
        for (const auto& seg : bridge.segments) {
            if (p.year >= seg.start_year && p.year <= seg.end_year) scale = seg.scale;
        }
        double v = scale * p.value;
        for (const auto& dm : bridge.dummies) {
            if (dm.year == p.year) v += dm.offset;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> scale_chain(const InflationBridge& bridge) {
    std::vector<double> chain;
    if (bridge.segments.empty()) return chain;
    const double s0 = bridge.segments.front().scale;
    for (const auto& seg : bridge.segments) chain.push_back(seg.scale / s0);
    return chain;
}

std::vector<double> step_factors(const InflationBridge& bridge) {
    std::vector<double> steps;
    for (std::size_t k = 1; k < bridge.segments.size(); ++k) {
        steps.push_back(bridge.segments[k].scale / bridge.segments[k - 1].scale);
    }
    return steps;
}

std::vector<int> detect_dummy_years(const ts::AnnualSeries& cpi_cum, const ts::AnnualSeries& dgdp_cum,
                                    std::span<const int> break_years, double threshold) {
    if (!(threshold > 0.0)) throw ContractError("detect_dummy_years: threshold must be positive");
    const InflationBridge bridge = bridge_fit(cpi_cum, dgdp_cum, break_years);
    auto [c, d] = ts::align(cpi_cum, dgdp_cum);
    const auto fitted = bridge_fitted(bridge, d);
    std::vector<double> resid(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) resid[i] = c.points()[i].value - fitted[i];
    const double sd = stats::population_sd(resid);
    const double mu = stats::mean(resid);
    std::vector<int> out;
    if (!(sd > 0.0)) return out;
    for (std::size_t i = 0; i < resid.size(); ++i) {
        if (std::abs(resid[i] - mu) > threshold * sd) out.push_back(c.points()[i].year);
    }
    return out;
}

}  // namespace okunfit::breaks
