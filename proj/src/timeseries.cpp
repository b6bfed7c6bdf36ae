#include "okunfit/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "okunfit/error.hpp"

namespace okunfit::ts {

namespace {

std::string describe(const SeriesInfo& info) {
    std::ostringstream os;
    os << info.country << '/' << to_string(info.variable);
    if (!info.source.empty()) os << " (" << info.source << ')';
    return os.str();
}

template <typename Points>
auto find_year(const Points& points, int year) {
    return std::lower_bound(points.begin(), points.end(), year,
                            [](const YearValue& p, int y) { return p.year < y; });
}

}  // namespace

std::string_view to_string(Variable v) noexcept {
    switch (v) {
        case Variable::unemployment_rate: return "unemployment_rate";
        case Variable::real_gdp_pc: return "real_gdp_pc";
        case Variable::cpi_index: return "cpi_index";
        case Variable::dgdp_index: return "dgdp_index";
        case Variable::inflation_rate: return "inflation_rate";
    }
    return "?";
}

std::string_view to_string(Unit u) noexcept {
    switch (u) {
        case Unit::percent_points: return "percent_points";
        case Unit::index_level: return "index_level";
        case Unit::percent_per_year: return "percent_per_year";
        case Unit::currency_per_capita: return "currency_per_capita";
        case Unit::index_difference: return "index_difference";
    }
    return "?";
}

Variable parse_variable(std::string_view text) {
    for (auto v : {Variable::unemployment_rate, Variable::real_gdp_pc, Variable::cpi_index,
                   Variable::dgdp_index, Variable::inflation_rate}) {
        if (to_string(v) == text) return v;
    }
    throw ContractError("unknown variable kind '" + std::string(text) + "'");
}

Unit parse_unit(std::string_view text) {
    for (auto u : {Unit::percent_points, Unit::index_level, Unit::percent_per_year,
                   Unit::currency_per_capita, Unit::index_difference}) {
        if (to_string(u) == text) return u;
    }
    throw ContractError("unknown unit '" + std::string(text) + "'");
}

std::string_view to_string(Compounding c) noexcept {
    return c == Compounding::arithmetic ? "arithmetic" : "geometric";
}

Compounding parse_compounding(std::string_view text) {
    if (text == "arithmetic") return Compounding::arithmetic;
    if (text == "geometric") return Compounding::geometric;
    throw ContractError("unknown cumulative mode '" + std::string(text) +
                        "' (expected arithmetic or geometric)");
}

std::optional<std::string> domain_violation(const SeriesInfo& info, double value) {
    if (!std::isfinite(value)) return "non-finite value";
    if (info.variable == Variable::unemployment_rate && info.unit == Unit::percent_points &&
        (value < 0.0 || value >= 100.0)) {
        return "unemployment rate outside [0, 100)";
    }
    if ((info.unit == Unit::index_level || info.unit == Unit::currency_per_capita) && value <= 0.0) {
        return std::string(to_string(info.unit)) + " value must be strictly positive";
    }
    return std::nullopt;
}

// AnnualSeries ------------------------------------------------------------

AnnualSeries::AnnualSeries(SeriesInfo info, std::vector<YearValue> points, DomainCheck check)
    : info_(std::move(info)), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (i > 0 && p.year <= points_[i - 1].year) {
            throw ContractError(describe(info_) + ": year " + std::to_string(p.year) +
                                (p.year == points_[i - 1].year ? " is duplicated"
                                                               : " is out of order"));
        }
        if (!std::isfinite(p.value)) {
            throw ContractError(describe(info_) + ": non-finite value at " + std::to_string(p.year));
        }
        if (check == DomainCheck::enforce) {
            if (auto why = domain_violation(info_, p.value)) {
                throw ContractError(describe(info_) + ": " + *why + " at " + std::to_string(p.year));
            }
        }
    }
}

int AnnualSeries::first_year() const {
    if (points_.empty()) throw MissingYearError(describe(info_) + ": series is empty");
    return points_.front().year;
}

int AnnualSeries::last_year() const {
    if (points_.empty()) throw MissingYearError(describe(info_) + ": series is empty");
    return points_.back().year;
}

bool AnnualSeries::contains(int year) const noexcept { return find(year).has_value(); }

std::optional<double> AnnualSeries::find(int year) const noexcept {
    auto it = find_year(points_, year);
    if (it == points_.end() || it->year != year) return std::nullopt;
    return it->value;
}

double AnnualSeries::at(int year) const {
    if (auto v = find(year)) return *v;
    throw MissingYearError(describe(info_) + ": year " + std::to_string(year) + " not present");
}

std::vector<int> AnnualSeries::years() const {
    std::vector<int> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.year);
    return out;
}

std::vector<double> AnnualSeries::values() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.value);
    return out;
}

std::vector<std::pair<int, int>> AnnualSeries::gaps() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i].year - points_[i - 1].year > 1) out.emplace_back(points_[i - 1].year, points_[i].year);
    }
    return out;
}

bool AnnualSeries::contiguous() const noexcept {
    return points_.empty() || points_.back().year - points_.front().year + 1 ==
                                  static_cast<int>(points_.size());
}

AnnualSeries AnnualSeries::slice(int from, int to) const {
    std::vector<YearValue> out;
    for (const auto& p : points_) {
        if (p.year >= from && p.year <= to) out.push_back(p);
    }
    return AnnualSeries(info_, std::move(out), DomainCheck::skip);
}

// GrowthSeries -------------------------------------------------------------

GrowthSeries::GrowthSeries(SeriesInfo base, std::vector<YearValue> points,
                           std::vector<std::pair<int, int>> gaps)
    : base_(std::move(base)), points_(std::move(points)), gaps_(std::move(gaps)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i > 0 && points_[i].year <= points_[i - 1].year) {
            throw ContractError(describe(base_) + ": growth years must strictly increase");
        }
        if (!std::isfinite(points_[i].value)) {
            throw ContractError(describe(base_) + ": non-finite growth at " +
                                std::to_string(points_[i].year));
        }
    }
}

bool GrowthSeries::contains(int year) const noexcept { return find(year).has_value(); }

std::optional<double> GrowthSeries::find(int year) const noexcept {
    auto it = find_year(points_, year);
    if (it == points_.end() || it->year != year) return std::nullopt;
    return it->value;
}

double GrowthSeries::at(int year) const {
    if (auto v = find(year)) return *v;
    throw GapError(describe(base_) + ": no growth value for " + std::to_string(year));
}

// Operations ---------------------------------------------------------------

GrowthSeries log_growth(const AnnualSeries& g) {
    auto pts = g.points();
    for (const auto& p : pts) {
        if (p.value <= 0.0) {
            throw DomainError(describe(g.info()) + ": log growth needs positive values, got " +
                              std::to_string(p.value) + " at " + std::to_string(p.year));
        }
    }
    std::vector<YearValue> out;
    std::vector<std::pair<int, int>> gaps;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].year - pts[i - 1].year != 1) {
            gaps.emplace_back(pts[i - 1].year, pts[i].year);
            continue;
        }
        out.push_back({pts[i].year, 100.0 * std::log(pts[i].value / pts[i - 1].value)});
    }
    if (out.empty()) throw ContractError(describe(g.info()) + ": needs two consecutive years");
    SeriesInfo info = g.info();
    info.unit = Unit::percent_per_year;
    return GrowthSeries(std::move(info), std::move(out), std::move(gaps));
}

AnnualSeries normalize(const AnnualSeries& s, int ref_year) {
    auto ref = s.find(ref_year);
    if (!ref) {
        throw MissingYearError(describe(s.info()) + ": reference year " + std::to_string(ref_year) +
                               " not present");
    }
    if (*ref <= 0.0) {
        throw DomainError(describe(s.info()) + ": cannot normalize to a non-positive value at " +
                          std::to_string(ref_year));
    }
    std::vector<YearValue> out;
    out.reserve(s.size());
    for (const auto& p : s.points()) out.push_back({p.year, p.year == ref_year ? 1.0 : p.value / *ref});
    SeriesInfo info = s.info();
    info.unit = Unit::index_level;
    return AnnualSeries(std::move(info), std::move(out));
}

AnnualSeries cumulative_inflation(const AnnualSeries& rates, int start_year, Compounding mode) {
    std::vector<YearValue> out{{start_year, 1.0}};
    double sum = 0.0;
    double product = 1.0;
    int expected = start_year + 1;
    for (const auto& p : rates.points()) {
        if (p.year <= start_year) continue;
        if (p.year != expected) {
            throw GapError(describe(rates.info()) + ": cumulative inflation needs contiguous rates, " +
                           std::to_string(expected) + " missing");
        }
        sum += p.value;
        product *= 1.0 + p.value / 100.0;
        out.push_back({p.year, mode == Compounding::arithmetic ? 1.0 + sum / 100.0 : product});
        ++expected;
    }
    if (out.size() < 2) {
        throw GapError(describe(rates.info()) + ": no rates after " + std::to_string(start_year));
    }
    SeriesInfo info = rates.info();
    info.variable = Variable::inflation_rate;
    info.unit = Unit::index_level;
    return AnnualSeries(std::move(info), std::move(out), DomainCheck::skip);
}

AnnualSeries rates_from_index(const AnnualSeries& idx) {
    auto pts = idx.points();
    for (const auto& p : pts) {
        if (p.value <= 0.0) {
            throw DomainError(describe(idx.info()) + ": index must be positive, got " +
                              std::to_string(p.value) + " at " + std::to_string(p.year));
        }
    }
    std::vector<YearValue> out;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].year - pts[i - 1].year != 1) continue;
        out.push_back({pts[i].year, 100.0 * (pts[i].value / pts[i - 1].value - 1.0)});
    }
    if (out.empty()) throw ContractError(describe(idx.info()) + ": needs two consecutive years");
    SeriesInfo info = idx.info();
    info.variable = Variable::inflation_rate;
    info.unit = Unit::percent_per_year;
    return AnnualSeries(std::move(info), std::move(out));
}

std::pair<AnnualSeries, AnnualSeries> align(const AnnualSeries& a, const AnnualSeries& b) {
    std::vector<YearValue> ra, rb;
    auto pa = a.points();
    auto pb = b.points();
    std::size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        if (pa[i].year < pb[j].year) {
            ++i;
        } else if (pb[j].year < pa[i].year) {
            ++j;
        } else {
            ra.push_back(pa[i++]);
            rb.push_back(pb[j++]);
        }
    }
    if (ra.empty()) {
        throw NoOverlapError(describe(a.info()) + " and " + describe(b.info()) + " share no years");
    }
    return {AnnualSeries(a.info(), std::move(ra), DomainCheck::skip),
            AnnualSeries(b.info(), std::move(rb), DomainCheck::skip)};
}

// Quarterly ----------------------------------------------------------------

QuarterKey QuarterKey::next() const noexcept {
    return quarter == 4 ? QuarterKey{year + 1, 1} : QuarterKey{year, quarter + 1};
}

QuarterKey QuarterKey::prev() const noexcept {
    return quarter == 1 ? QuarterKey{year - 1, 4} : QuarterKey{year, quarter - 1};
}

std::string QuarterKey::to_string() const { return std::to_string(year) + "Q" + std::to_string(quarter); }

QuarterKey QuarterKey::parse(std::string_view text) {
    auto q = text.find_first_of("Qq");
    QuarterKey key;
    if (q != std::string_view::npos && q + 2 == text.size()) {
        auto [p1, e1] = std::from_chars(text.data(), text.data() + q, key.year);
        auto [p2, e2] = std::from_chars(text.data() + q + 1, text.data() + text.size(), key.quarter);
        if (e1 == std::errc{} && p1 == text.data() + q && e2 == std::errc{} &&
            p2 == text.data() + text.size() && key.quarter >= 1 && key.quarter <= 4) {
            return key;
        }
    }
    throw ContractError("malformed quarter '" + std::string(text) + "' (expected YYYYQn)");
}

QuarterlySeries::QuarterlySeries(SeriesInfo info, std::vector<QuarterValue> points, DomainCheck check)
    : info_(std::move(info)), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (i > 0 && !(points_[i - 1].quarter < p.quarter)) {
            throw ContractError(describe(info_) + ": quarter " + p.quarter.to_string() +
                                " is duplicated or out of order");
        }
        if (!std::isfinite(p.value)) {
            throw ContractError(describe(info_) + ": non-finite value at " + p.quarter.to_string());
        }
        if (check == DomainCheck::enforce) {
            if (auto why = domain_violation(info_, p.value)) {
                throw ContractError(describe(info_) + ": " + *why + " at " + p.quarter.to_string());
            }
        }
    }
}

std::optional<double> QuarterlySeries::find(QuarterKey q) const noexcept {
    for (const auto& p : points_) {
        if (p.quarter == q) return p.value;
    }
    return std::nullopt;
}

double QuarterlySeries::at(QuarterKey q) const {
    if (auto v = find(q)) return *v;
    throw GapError(describe(info_) + ": quarter " + q.to_string() + " not present");
}

QuarterlySeries QuarterlySeries::slice(QuarterKey from, QuarterKey to) const {
    std::vector<QuarterValue> out;
    for (const auto& p : points_) {
        if (!(p.quarter < from) && !(to < p.quarter)) out.push_back(p);
    }
    return QuarterlySeries(info_, std::move(out), DomainCheck::skip);
}

QuarterlySeries quarterly_log_growth(const QuarterlySeries& levels, double annualization) {
    auto pts = levels.points();
    std::vector<QuarterValue> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].value <= 0.0) {
            throw DomainError(describe(levels.info()) + ": log growth needs positive levels");
        }
        if (i == 0) continue;
        if (pts[i - 1].quarter.next() != pts[i].quarter) {
            throw GapError(describe(levels.info()) + ": quarters missing between " +
                           pts[i - 1].quarter.to_string() + " and " + pts[i].quarter.to_string());
        }
        out.push_back({pts[i].quarter, annualization * 100.0 * std::log(pts[i].value / pts[i - 1].value)});
    }
    SeriesInfo info = levels.info();
    info.unit = Unit::percent_per_year;
    return QuarterlySeries(std::move(info), std::move(out), DomainCheck::skip);
}

}  // namespace okunfit::ts
