#pragma once

#include <span>
#include <vector>

#include "okunfit/placement.hpp"
#include "okunfit/timeseries.hpp"

namespace okunfit::breaks {

struct BreakCandidate {
    int year = 0;
    /// Change of the fitted slope of the difference curve across `year`.
    double slope_change = 0.0;
    /// RMS of the fit without this break minus RMS with it.
    double score = 0.0;
};

struct BridgeSegment {
    int start_year = 0;
    int end_year = 0;
    double scale = 1.0;
};

struct BridgeDummy {
    int year = 0;
    double offset = 0.0;
};

/// Piecewise CPI = scale * dGDP mapping, plus single-year offsets.
struct InflationBridge {
    std::vector<BridgeSegment> segments;
    std::vector<BridgeDummy> dummies;
    double rms = 0.0;
};

/// Pointwise cpi_cum - dgdp_cum over the common years.
ts::AnnualSeries difference_curve(const ts::AnnualSeries& cpi_cum, const ts::AnnualSeries& dgdp_cum);

/// Continuous piecewise-linear (hinged) least-squares fit of a contiguous
/// series. `coefficients` holds intercept, slope and one slope change per
/// break, in break order.
struct HingeFit {
    std::vector<int> break_years;
    std::vector<double> coefficients;
    std::vector<double> fitted;
    double rms = 0.0;
};

HingeFit hinge_fit(const ts::AnnualSeries& y, std::span<const int> break_years);

/// Best hinge placement with exactly `n_breaks` breaks over every admissible
/// placement. Throws ConstraintError when none exists.
HingeFit best_hinge_fit(const ts::AnnualSeries& y, int n_breaks, int min_segment,
                        Backend backend = Backend::parallel);

struct CandidateOptions {
    /// A further break must cut RMS by at least this fraction.
    double min_relative_improvement = 0.02;
    Backend backend = Backend::parallel;
};

/// Break years of the smallest hinge model (at most max_breaks breaks) after
/// which adding a break stops paying, sorted by year.
std::vector<BreakCandidate> candidate_breaks(const ts::AnnualSeries& diff, int max_breaks,
                                             int min_segment, const CandidateOptions& options = {});

/// Per-segment least-squares scale of dgdp_cum onto cpi_cum. A break year
/// starts a new segment. Dummy years are fitted exactly by their own offset
/// and so do not pull on the scale.
InflationBridge bridge_fit(const ts::AnnualSeries& cpi_cum, const ts::AnnualSeries& dgdp_cum,
                           std::span<const int> break_years, std::span<const int> dummy_years = {});

/// Fitted CPI curve of a bridge over the given dGDP curve's years.
std::vector<double> bridge_fitted(const InflationBridge& bridge, const ts::AnnualSeries& dgdp_cum);

/// Scales relative to the first segment: chain[k] = scale[k] / scale[0].
std::vector<double> scale_chain(const InflationBridge& bridge);

/// Segment-to-segment factors scale[k] / scale[k-1]; their running product is
/// the chain.
std::vector<double> step_factors(const InflationBridge& bridge);

/// Years whose bridge residual exceeds `threshold` population standard
/// deviations when fitted without dummies. Not used unless asked for.
std::vector<int> detect_dummy_years(const ts::AnnualSeries& cpi_cum, const ts::AnnualSeries& dgdp_cum,
                                    std::span<const int> break_years, double threshold = 4.0);

namespace detail {
// Serial explicit-design-matrix evaluation; the cross-check for the kernel.
double hinge_rms_reference(std::span<const double> y, std::span<const int> positions);
HingeFit best_hinge_fit_reference(const ts::AnnualSeries& y, int n_breaks, int min_segment);
}  // namespace detail

}  // namespace okunfit::breaks
