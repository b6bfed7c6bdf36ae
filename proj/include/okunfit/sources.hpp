#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "okunfit/timeseries.hpp"

namespace okunfit::sources {

struct LabelledSeries {
    std::string label;
    ts::AnnualSeries series;
};

enum class DivergenceFlag { ok, warn, alert };

std::string_view to_string(DivergenceFlag f) noexcept;

inline constexpr double kWarnDivergence = 0.02;
inline constexpr double kAlertDivergence = 0.10;

/// Ratio of two normalized series over their common years and how it drifts.
struct PairDrift {
    std::string a;
    std::string b;
    ts::AnnualSeries ratio;  ///< normalized a / normalized b
    double max_div = 0.0;    ///< max |ratio - 1|
    int year_of_max = 0;
    int trend_from = 0;
    double trend_slope = 0.0;  ///< OLS slope of ratio on year, per year
    double trend_intercept = 0.0;
    double trend_r2 = 0.0;
    DivergenceFlag flag = DivergenceFlag::ok;
};

struct SourceComparison {
    int ref_year = 0;
    std::vector<LabelledSeries> normalized;
    std::vector<PairDrift> pairs;  ///< (i, j) for i < j in input order
};

struct CompareOptions {
    /// Fit the ratio trend on years >= trend_from only.
    std::optional<int> trend_from;
    double warn = kWarnDivergence;
    double alert = kAlertDivergence;
};

/// Normalizes every series to ref_year and compares all pairs.
SourceComparison compare(std::span<const LabelledSeries> series, int ref_year,
                         const CompareOptions& options = {});

/// s(to_year) / s(from_year).
double total_growth_factor(const ts::AnnualSeries& s, int from_year, int to_year);

}  // namespace okunfit::sources
