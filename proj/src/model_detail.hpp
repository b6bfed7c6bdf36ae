#pragma once

#include <span>
#include <vector>

#include "okunfit/model.hpp"

namespace okunfit::okun::detail {

// A fit span reduced to positions 0..n-1. g[i] is the growth into position i
// (g[0] is unused), starts[k] the first position of segment k.
struct SpanLayout {
    int first_year = 0;
    int n = 0;
    std::vector<double> u;
    std::vector<double> g;
    std::vector<int> starts;

    int segment_end(std::size_t k) const {
        return k + 1 < starts.size() ? starts[k + 1] - 1 : n - 1;
    }
};

SpanLayout layout_span(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                       std::span<const int> break_years, int min_segment);

Solution2 fit_measured_segment(const SpanLayout& lay, int s, int e);
double measured_segment_sse(const SpanLayout& lay, int s, int e, const Solution2& c);
std::vector<Solution2> fit_chained_joint(const SpanLayout& lay);
PiecewiseOkun assemble(const SpanLayout& lay, const std::vector<Solution2>& coef, AnchorMode mode);

}  // namespace okunfit::okun::detail

namespace okunfit::okun::detail {

struct SearchSetup {
    SpanLayout layout;
    Placements placements;
};

/// Validates options, lays out the span and enumerates admissible placements.
SearchSetup prepare_search(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           const SearchOptions& options);

/// Picks the winner by the tie rule and refits it for the report.
SearchResult finish_search(const ts::AnnualSeries& u, const ts::GrowthSeries& growth,
                           const SearchOptions& options, const SearchSetup& setup,
                           std::span<const double> rms);

}  // namespace okunfit::okun::detail
