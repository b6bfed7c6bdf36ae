#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "okunfit/placement.hpp"
#include "okunfit/timeseries.hpp"

namespace okunfit::okun {

/// du = a + b dlnG over the inclusive years [start_year, end_year].
struct SegmentSpec {
    int start_year = 0;
    int end_year = 0;
    double b = 0.0;  ///< pp of unemployment per percent of growth
    double a = 0.0;  ///< pp per year
};

struct Anchor {
    int year = 0;
    double u = 0.0;
};

/// measured: every segment restarts from the observed rate at its first year
/// and is fitted on its own. chained: segment k+1 starts where segment k's
/// path lands after the break year's increment, and all coefficients are
/// fitted jointly so the predicted path is continuous.
enum class AnchorMode { measured, chained };

std::string_view to_string(AnchorMode m) noexcept;
AnchorMode parse_anchor_mode(std::string_view text);

class PiecewiseOkun {
public:
    /// Throws ContractError unless segments are contiguous, each spans at
    /// least two years, and there is one anchor per segment start.
    PiecewiseOkun(std::vector<SegmentSpec> segments, std::vector<Anchor> anchors);

    const std::vector<SegmentSpec>& segments() const noexcept { return segments_; }
    const std::vector<Anchor>& anchors() const noexcept { return anchors_; }
    int first_year() const noexcept { return segments_.front().start_year; }
    int last_year() const noexcept { return segments_.back().end_year; }
    /// Start years of segments 2..N.
    std::vector<int> break_years() const;
    /// One message per segment with b >= 0 (Okun's sign is b < 0).
    std::vector<std::string> warnings() const;

private:
    std::vector<SegmentSpec> segments_;
    std::vector<Anchor> anchors_;
};

/// u_p(t) = anchor_k + b_k * sum(dlnG over start_k+1..t) + a_k * (t - start_k).
ts::AnnualSeries predict(const PiecewiseOkun& model, const ts::GrowthSeries& growth);

PiecewiseOkun fit_segments(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           std::span<const int> break_years, AnchorMode mode = AnchorMode::measured,
                           int min_segment = 5);

struct FitStatistics {
    int n = 0;
    double residual_sigma = 0.0;  ///< population sd of measured - predicted
    double r_squared = 0.0;       ///< of the OLS line measured ~ predicted
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared_direct = 0.0;  ///< 1 - SSE/SST of the prediction itself
    double rms = 0.0;
    double mean_u = 0.0;
};

struct Evaluation {
    ts::AnnualSeries residuals;
    FitStatistics stats;
};

Evaluation evaluate(const ts::AnnualSeries& measured, const ts::AnnualSeries& predicted);

struct FitReport {
    PiecewiseOkun model;
    AnchorMode anchor_mode = AnchorMode::measured;
    ts::AnnualSeries measured;
    ts::AnnualSeries predicted;
    ts::AnnualSeries residuals;
    FitStatistics stats;
    std::vector<int> excluded_years;
};

FitReport make_report(PiecewiseOkun model, const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                      AnchorMode mode);

/// Statistics without the listed years; the model and residual series stay as
/// they are. Refuses to drop more than a fifth of the sample.
FitReport exclude_years(const FitReport& report, std::span<const int> years);

inline constexpr double kMaxExcludedFraction = 0.2;

struct SearchOptions {
    int n_breaks = 0;
    /// Empty: every interior year is admissible. Otherwise only years within
    /// search_radius of a candidate.
    std::vector<int> candidates;
    int search_radius = 3;
    int min_segment = 5;
    AnchorMode anchor_mode = AnchorMode::measured;
    Backend backend = Backend::parallel;
};

/// Admissible break years for a fit span, sorted.
std::vector<int> admissible_break_years(int first_year, int last_year, const SearchOptions& options);

struct SearchResult {
    FitReport report;
    /// RMS of the winning placement as scored by the search.
    double search_rms = 0.0;
    std::size_t placements_evaluated = 0;
};

/// Exhaustive search for the break set with the lowest whole-span residual
/// RMS. Throws ConstraintError when no placement is admissible.
SearchResult search_breaks(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           const SearchOptions& options);

/// One quarter per growth point, preceded by the starting quarter:
/// u(q) = u(q-1) + b g(q) + a/4 with the last segment's coefficients.
ts::QuarterlySeries predict_quarterly(const PiecewiseOkun& model, const ts::QuarterlySeries& quarterly_growth,
                                      double u_start);

/// Growth g solving u_target = u_prev + b g + a/4.
double implied_quarterly_growth(const SegmentSpec& segment, double u_prev, double u_target);

/// predict() plus N(0, noise_sigma) per year from a mt19937_64 seeded with `seed`.
ts::AnnualSeries synthesize(const PiecewiseOkun& model, const ts::GrowthSeries& growth, double noise_sigma,
                            std::uint64_t seed);

namespace detail {

struct Solution2 {
    double b = 0.0;
    double a = 0.0;
};

inline constexpr double kMaxCondition = 1e10;

/// Solves [s11 s12; s12 s22] (b, a) = (r1, r2) with partial pivoting.
/// Throws SingularFitError when the condition estimate exceeds kMaxCondition.
Solution2 solve_normal_equations(double s11, double s12, double s22, double r1, double r2);

/// Serial search that refits every placement with fit_segments and predict.
SearchResult search_breaks_reference(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                                     const SearchOptions& options);

}  // namespace detail

}  // namespace okunfit::okun
