// Parallel break search. Measured anchors make segments independent, so the
// SSE of every possible segment is tabulated once and a placement costs a few
// additions. Chained fits couple all segments; there the normal equations of
// a placement are assembled from prefix sums in O(K^2).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "model_detail.hpp"
#include "okunfit/error.hpp"
#include "okunfit/model.hpp"

namespace okunfit::okun {

namespace {

constexpr int kMaxChainedSegments = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();

using ChainMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxChainedSegments,
                                  2 * kMaxChainedSegments>;
using ChainVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxChainedSegments, 1>;

class MeasuredTable {
public:
    MeasuredTable(const detail::SpanLayout& lay, std::span<const int> allowed, int min_segment)
        : n_(lay.n), sse_(static_cast<std::size_t>(lay.n) * static_cast<std::size_t>(lay.n), kInf) {
        std::vector<int> starts{0};
        starts.insert(starts.end(), allowed.begin(), allowed.end());
        std::vector<char> is_end(static_cast<std::size_t>(n_), 0);
        is_end[static_cast<std::size_t>(n_ - 1)] = 1;
        for (int p : allowed) is_end[static_cast<std::size_t>(p - 1)] = 1;

        const auto count = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const int s = starts[static_cast<std::size_t>(i)];
            for (int e = s + min_segment - 1; e < n_; ++e) {
                if (!is_end[static_cast<std::size_t>(e)]) continue;
                double v = kInf;
                try {
                    const auto c = detail::fit_measured_segment(lay, s, e);
                    v = detail::measured_segment_sse(lay, s, e, c);
                } catch (const SingularFitError&) {
                }
                sse_[index(s, e)] = v;
            }
        }
    }

    double placement_sse(std::span<const int> p) const {
        double total = 0.0;
        int s = 0;
        for (int b : p) {
            total += sse_[index(s, b - 1)];
            s = b;
        }
        return total + sse_[index(s, n_ - 1)];
    }

private:
    std::size_t index(int s, int e) const {
        return static_cast<std::size_t>(s) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(e);
    }

    int n_;
    std::vector<double> sse_;
};

// Column (k, phi) of the chained design is the running sum of phi(j) over the
// increments j of segment k. Summation by parts turns every Gram entry into
// sums of phi(j) psi(j') w(max(j, j')) with w(j) = n - j, which prefix sums
// deliver in constant time.
class ChainedSums {
public:
    explicit ChainedSums(const detail::SpanLayout& lay) : n_(lay.n) {
        const auto n = static_cast<std::size_t>(n_);
        for (auto* v : {&pg_, &p1_, &bg_, &b1_, &rgg_, &rg1_, &r11_, &qgg_, &qg1_, &q1g_, &q11_, &yg_, &y1_}) {
            v->assign(n, 0.0);
        }
        std::vector<double> y(n), ysuf(n + 1, 0.0);
        for (std::size_t t = 0; t < n; ++t) y[t] = lay.u[t] - lay.u[0];
        for (std::size_t t = n; t-- > 0;) ysuf[t] = ysuf[t + 1] + y[t];
        for (double v : y) yy_ += v * v;

        for (std::size_t j = 1; j < n; ++j) {
            const double g = lay.g[j];
            const double w = static_cast<double>(n - j);
            pg_[j] = pg_[j - 1] + g;
            p1_[j] = p1_[j - 1] + 1.0;
            bg_[j] = bg_[j - 1] + g * w;
            b1_[j] = b1_[j - 1] + w;
            rgg_[j] = rgg_[j - 1] + g * g * w;
            rg1_[j] = rg1_[j - 1] + g * w;
            r11_[j] = r11_[j - 1] + w;
            // q_psi_phi: sum of psi(j) w(j) P_phi(j - 1)
            qgg_[j] = qgg_[j - 1] + g * w * pg_[j - 1];
            qg1_[j] = qg1_[j - 1] + g * w * p1_[j - 1];
            q1g_[j] = q1g_[j - 1] + w * pg_[j - 1];
            q11_[j] = q11_[j - 1] + w * p1_[j - 1];
            yg_[j] = yg_[j - 1] + g * ysuf[j];
            y1_[j] = y1_[j - 1] + ysuf[j];
        }
    }

    double placement_sse(std::span<const int> p) const {
        const int k_count = static_cast<int>(p.size()) + 1;
        std::array<int, kMaxChainedSegments + 1> edge{};
        edge[0] = 0;
        for (int k = 1; k < k_count; ++k) edge[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k) - 1];
        edge[static_cast<std::size_t>(k_count)] = n_ - 1;

        const int m = 2 * k_count;
        ChainMatrix gm(m, m);
        ChainVector r(m);
        for (int k = 0; k < k_count; ++k) {
            const auto lo = static_cast<std::size_t>(edge[static_cast<std::size_t>(k)]);
            const auto hi = static_cast<std::size_t>(edge[static_cast<std::size_t>(k) + 1]);
            const double ag = pg_[hi] - pg_[lo], a1 = p1_[hi] - p1_[lo];
            const double bg = bg_[hi] - bg_[lo], b1 = b1_[hi] - b1_[lo];
            // Within-segment blocks.
            const double tgg = 2.0 * (qgg_[hi] - qgg_[lo] - pg_[lo] * bg) + (rgg_[hi] - rgg_[lo]);
            const double tg1 = (qg1_[hi] - qg1_[lo] - p1_[lo] * bg) + (q1g_[hi] - q1g_[lo] - pg_[lo] * b1) +
                               (rg1_[hi] - rg1_[lo]);
            const double t11 = 2.0 * (q11_[hi] - q11_[lo] - p1_[lo] * b1) + (r11_[hi] - r11_[lo]);
            gm(2 * k, 2 * k) = tgg;
            gm(2 * k, 2 * k + 1) = gm(2 * k + 1, 2 * k) = tg1;
            gm(2 * k + 1, 2 * k + 1) = t11;
            r(2 * k) = yg_[hi] - yg_[lo];
            r(2 * k + 1) = y1_[hi] - y1_[lo];
            // Later segments see this one's columns as constants ag, a1.
            for (int l = k + 1; l < k_count; ++l) {
                const auto lo2 = static_cast<std::size_t>(edge[static_cast<std::size_t>(l)]);
                const auto hi2 = static_cast<std::size_t>(edge[static_cast<std::size_t>(l) + 1]);
                const double bg2 = bg_[hi2] - bg_[lo2], b12 = b1_[hi2] - b1_[lo2];
                gm(2 * k, 2 * l) = gm(2 * l, 2 * k) = ag * bg2;
                gm(2 * k, 2 * l + 1) = gm(2 * l + 1, 2 * k) = ag * b12;
                gm(2 * k + 1, 2 * l) = gm(2 * l, 2 * k + 1) = a1 * bg2;
                gm(2 * k + 1, 2 * l + 1) = gm(2 * l + 1, 2 * k + 1) = a1 * b12;
            }
        }
        const Eigen::SelfAdjointEigenSolver<ChainMatrix> eig(gm, Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues().minCoeff();
        const double lmax = eig.eigenvalues().maxCoeff();
        if (!(lmin > 0.0) || lmax / lmin > detail::kMaxCondition) return kInf;
        const Eigen::LDLT<ChainMatrix> ldlt(gm);
        const ChainVector beta = ldlt.solve(r);
        // Quadratic in the solve error around the optimum.
        const double sse = yy_ - 2.0 * beta.dot(r) + beta.dot(gm * beta);
        return std::max(sse, 0.0);
    }

private:
    int n_;
    double yy_ = 0.0;
    std::vector<double> pg_, p1_, bg_, b1_, rgg_, rg1_, r11_, qgg_, qg1_, q1g_, q11_, yg_, y1_;
};

}  // namespace

std::vector<int> admissible_break_years(int first_year, int last_year, const SearchOptions& options) {
    std::set<int> years;
    if (options.candidates.empty()) {
        for (int y = first_year + 1; y <= last_year; ++y) years.insert(y);
    } else {
        for (int c : options.candidates) {
            for (int y = c - options.search_radius; y <= c + options.search_radius; ++y) {
                if (y > first_year && y <= last_year) years.insert(y);
            }
        }
    }
    return {years.begin(), years.end()};
}

namespace detail {

SearchSetup prepare_search(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           const SearchOptions& options) {
    if (options.n_breaks < 0) throw ContractError("n_breaks must be >= 0");
    if (options.min_segment < 3) {
        throw ConstraintError("min_segment must be >= 3, got " + std::to_string(options.min_segment));
    }
    if (options.search_radius < 0) throw ContractError("search_radius must be >= 0");
    if (options.anchor_mode == AnchorMode::chained && options.n_breaks + 1 > kMaxChainedSegments) {
        throw ContractError("chained search supports at most " + std::to_string(kMaxChainedSegments - 1) +
                            " breaks");
    }
    SearchSetup setup{layout_span(u, growth, {}, options.min_segment), {}};
    const auto& lay = setup.layout;
    std::vector<int> allowed;
    for (int y : admissible_break_years(lay.first_year, lay.first_year + lay.n - 1, options)) {
        allowed.push_back(y - lay.first_year);
    }
    setup.placements = enumerate_placements(allowed, options.n_breaks, lay.n, options.min_segment);
    if (setup.placements.count() == 0) {
        throw ConstraintError("no admissible placement of " + std::to_string(options.n_breaks) +
                              " break(s) with min_segment " + std::to_string(options.min_segment));
    }
    return setup;
}

SearchResult finish_search(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           const SearchOptions& options, const SearchSetup& setup,
                           std::span<const double> rms) {
    const std::size_t best = select_best(rms);
    if (best == npos) throw ConstraintError("every admissible placement is singular");
    std::vector<int> years;
    for (int p : setup.placements.at(best)) years.push_back(setup.layout.first_year + p);
    auto model = fit_segments(u, growth, years, options.anchor_mode, options.min_segment);
    SearchResult result{make_report(std::move(model), u, growth, options.anchor_mode), rms[best],
                        setup.placements.count()};
    return result;
}

}  // namespace detail

SearchResult search_breaks(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           const SearchOptions& options) {
    if (options.backend == Backend::reference) return detail::search_breaks_reference(u, growth, options);
    const auto setup = detail::prepare_search(u, growth, options);
    const auto& lay = setup.layout;
    const auto& placements = setup.placements;
    std::vector<double> rms(placements.count(), kInf);
    const auto count = static_cast<std::ptrdiff_t>(placements.count());
    const double n = lay.n;

    if (options.anchor_mode == AnchorMode::measured) {
        std::vector<int> allowed;
        for (int y : admissible_break_years(lay.first_year, lay.first_year + lay.n - 1, options)) {
            allowed.push_back(y - lay.first_year);
        }
        const MeasuredTable table(lay, allowed, options.min_segment);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < count; ++j) {
            const auto i = static_cast<std::size_t>(j);
            rms[i] = std::sqrt(table.placement_sse(placements.at(i)) / n);
        }
    } else {
        const ChainedSums sums(lay);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < count; ++j) {
            const auto i = static_cast<std::size_t>(j);
            rms[i] = std::sqrt(sums.placement_sse(placements.at(i)) / n);
        }
    }
    return detail::finish_search(u, growth, options, setup, rms);
}

}  // namespace okunfit::okun
