#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace okunfit::ts {

enum class Variable { unemployment_rate, real_gdp_pc, cpi_index, dgdp_index, inflation_rate };

/// `index_difference` is a signed difference of two index-level curves (for
/// example CPI minus GDP-deflator cumulative inflation).
enum class Unit { percent_points, index_level, percent_per_year, currency_per_capita, index_difference };

std::string_view to_string(Variable v) noexcept;
std::string_view to_string(Unit u) noexcept;
Variable parse_variable(std::string_view text);
Unit parse_unit(std::string_view text);

struct YearValue {
    int year = 0;
    double value = 0.0;
    bool operator==(const YearValue&) const = default;
};

struct SeriesInfo {
    std::string country;
    Variable variable = Variable::real_gdp_pc;
    Unit unit = Unit::currency_per_capita;
    std::string source;
};

/// Returns a description of why `value` is not admissible for a series of
/// this kind, or nothing when it is.
std::optional<std::string> domain_violation(const SeriesInfo& info, double value);

/// Model output (predictions, residuals) may legitimately leave the domain of
/// measured data, so the value-range invariants can be switched off.
enum class DomainCheck { enforce, skip };

/// Calendar-year indexed series. Years strictly increase and every value is
/// finite; with DomainCheck::enforce the per-kind value ranges hold as well.
class AnnualSeries {
public:
    AnnualSeries(SeriesInfo info, std::vector<YearValue> points,
                 DomainCheck check = DomainCheck::enforce);

    const SeriesInfo& info() const noexcept { return info_; }
    std::span<const YearValue> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    int first_year() const;
    int last_year() const;
    bool contains(int year) const noexcept;
    std::optional<double> find(int year) const noexcept;
    /// Throws MissingYearError.
    double at(int year) const;

    std::vector<int> years() const;
    std::vector<double> values() const;

    /// Pairs (y0, y1) of consecutive points with y1 - y0 > 1.
    std::vector<std::pair<int, int>> gaps() const;
    bool contiguous() const noexcept;

    /// Points with from <= year <= to (possibly empty).
    AnnualSeries slice(int from, int to) const;

private:
    SeriesInfo info_;
    std::vector<YearValue> points_;
};

/// dlnG per year: the value at year y is 100 ln(G_y / G_{y-1}).
class GrowthSeries {
public:
    GrowthSeries(SeriesInfo base, std::vector<YearValue> points,
                 std::vector<std::pair<int, int>> gaps = {});

    const SeriesInfo& base() const noexcept { return base_; }
    std::span<const YearValue> points() const noexcept { return points_; }
    /// Source gaps skipped while differencing; one warning per gap.
    const std::vector<std::pair<int, int>>& gaps() const noexcept { return gaps_; }
    std::size_t size() const noexcept { return points_.size(); }

    bool contains(int year) const noexcept;
    std::optional<double> find(int year) const noexcept;
    /// Throws GapError: a missing growth year means the fit cannot integrate across it.
    double at(int year) const;

private:
    SeriesInfo base_;
    std::vector<YearValue> points_;
    std::vector<std::pair<int, int>> gaps_;
};

GrowthSeries log_growth(const AnnualSeries& g);

AnnualSeries normalize(const AnnualSeries& s, int ref_year);

enum class Compounding { arithmetic, geometric };

/// Cumulative inflation re-based to 1.0 at start_year. Arithmetic mode is the
/// running sum 1 + sum(rates)/100; geometric mode compounds the rates and so
/// reproduces idx / idx(start_year).
AnnualSeries cumulative_inflation(const AnnualSeries& rates, int start_year,
                                  Compounding mode = Compounding::arithmetic);

AnnualSeries rates_from_index(const AnnualSeries& idx);

std::pair<AnnualSeries, AnnualSeries> align(const AnnualSeries& a, const AnnualSeries& b);

std::string_view to_string(Compounding c) noexcept;
Compounding parse_compounding(std::string_view text);

// Quarterly data -----------------------------------------------------------

struct QuarterKey {
    int year = 0;
    int quarter = 1;  // 1..4

    int ordinal() const noexcept { return year * 4 + (quarter - 1); }
    QuarterKey next() const noexcept;
    QuarterKey prev() const noexcept;
    std::string to_string() const;
    static QuarterKey parse(std::string_view text);

    auto operator<=>(const QuarterKey& o) const noexcept { return ordinal() <=> o.ordinal(); }
    bool operator==(const QuarterKey& o) const noexcept { return ordinal() == o.ordinal(); }
};

struct QuarterValue {
    QuarterKey quarter;
    double value = 0.0;
};

class QuarterlySeries {
public:
    QuarterlySeries(SeriesInfo info, std::vector<QuarterValue> points,
                    DomainCheck check = DomainCheck::enforce);

    const SeriesInfo& info() const noexcept { return info_; }
    std::span<const QuarterValue> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::optional<double> find(QuarterKey q) const noexcept;
    double at(QuarterKey q) const;
    QuarterlySeries slice(QuarterKey from, QuarterKey to) const;

private:
    SeriesInfo info_;
    std::vector<QuarterValue> points_;
};

/// Quarter-over-quarter log growth, 100 ln(G_q / G_{q-1}) multiplied by
/// `annualization` (4 gives the annualized rate agencies headline). Missing
/// quarters throw GapError.
QuarterlySeries quarterly_log_growth(const QuarterlySeries& levels, double annualization = 4.0);

}  // namespace okunfit::ts
