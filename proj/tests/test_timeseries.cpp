#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "okunfit/error.hpp"
#include "okunfit/io.hpp"
#include "okunfit/timeseries.hpp"
#include "support.hpp"

using namespace okunfit;
using support::series;

TEST_CASE("series invariants are enforced at construction") {
    CHECK_THROWS_AS(series(support::gdp_info(), 2000, {1.0, 2.0}).slice(2000, 2000).at(2001), MissingYearError);
    std::vector<ts::YearValue> dup{{2000, 1.0}, {2000, 2.0}};
    CHECK_THROWS_AS(ts::AnnualSeries(support::gdp_info(), dup), ContractError);
    std::vector<ts::YearValue> back{{2001, 1.0}, {2000, 2.0}};
    CHECK_THROWS_AS(ts::AnnualSeries(support::gdp_info(), back), ContractError);
    std::vector<ts::YearValue> nan{{2000, std::numeric_limits<double>::quiet_NaN()}};
    CHECK_THROWS_AS(ts::AnnualSeries(support::gdp_info(), nan), ContractError);
    CHECK_THROWS_AS(series(support::u_info(), 2000, {5.0, 105.0}), ContractError);
    CHECK_THROWS_AS(series(support::u_info(), 2000, {-0.1}), ContractError);
    CHECK_THROWS_AS(series(support::gdp_info(), 2000, {1.0, 0.0}), ContractError);
    CHECK_NOTHROW(series(support::u_info(), 2000, {0.0, 99.9}));
    // Model output may leave the measured domain.
    CHECK_NOTHROW(series(support::u_info(), 2000, {-1.0}, ts::DomainCheck::skip));
}

TEST_CASE("gaps and slicing") {
    std::vector<ts::YearValue> pts{{2000, 1.0}, {2001, 2.0}, {2004, 3.0}};
    ts::AnnualSeries s(support::gdp_info(), pts);
    CHECK_FALSE(s.contiguous());
    REQUIRE(s.gaps().size() == 1);
    CHECK(s.gaps()[0] == std::pair<int, int>{2001, 2004});
    CHECK(s.slice(2001, 2003).size() == 1);
    CHECK(s.slice(2010, 2020).empty());
}

TEST_CASE("log_growth") {
    SUBCASE("constant series gives zeros") {
        const auto g = ts::log_growth(series(support::gdp_info(), 2000, {100, 100, 100}));
        REQUIRE(g.size() == 2);
        CHECK(g.at(2001) == 0.0);
        CHECK(g.at(2002) == 0.0);
    }
    SUBCASE("doubling") {
        const auto g = ts::log_growth(series(support::gdp_info(), 2000, {100, 200}));
        CHECK(g.at(2001) == doctest::Approx(69.31471805599453).epsilon(1e-14));
    }
    SUBCASE("bundled US BEA 2018 to 2019") {
        const auto m = io::load_manifest(support::data_dir() + "/us/manifest.json");
        const auto g = ts::log_growth(io::load_annual(m, "gdppc_bea"));
        // 100 ln(57933 / 56910), computed independently from the CSV.
        CHECK(g.at(2019) == doctest::Approx(1.78160977916656).epsilon(1e-12));
    }
    SUBCASE("gap is skipped and recorded") {
        std::vector<ts::YearValue> pts{{2000, 1.0}, {2001, 2.0}, {2003, 3.0}, {2004, 3.0}};
        const auto g = ts::log_growth(ts::AnnualSeries(support::gdp_info(), pts));
        CHECK(g.size() == 2);
        CHECK_FALSE(g.contains(2003));
        REQUIRE(g.gaps().size() == 1);
        CHECK_THROWS_AS(g.at(2003), GapError);
    }
    SUBCASE("non-positive value") {
        auto info = support::gdp_info();
        info.variable = ts::Variable::inflation_rate;
        info.unit = ts::Unit::percent_per_year;
        CHECK_THROWS_AS(ts::log_growth(series(info, 2000, {1.0, -1.0})), DomainError);
    }
}

TEST_CASE("normalize") {
    const auto s = series(support::gdp_info(), 1970, {50, 55});
    const auto n = ts::normalize(s, 1970);
    CHECK(n.at(1970) == 1.0);
    CHECK(n.at(1971) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(n.info().unit == ts::Unit::index_level);
    CHECK_THROWS_AS(ts::normalize(s, 1980), MissingYearError);
}

TEST_CASE("cumulative_inflation") {
    auto rates_info = support::index_info();
    rates_info.variable = ts::Variable::inflation_rate;
    rates_info.unit = ts::Unit::percent_per_year;
    SUBCASE("zero inflation stays at 1") {
        const auto c = ts::cumulative_inflation(series(rates_info, 2001, {0, 0, 0}), 2000);
        for (const auto& p : c.points()) CHECK(p.value == 1.0);
    }
    SUBCASE("arithmetic sum of rates") {
        const auto c = ts::cumulative_inflation(series(rates_info, 2001, {10, 10}), 2000);
        REQUIRE(c.size() == 3);
        CHECK(c.at(2000) == 1.0);
        CHECK(c.at(2001) == doctest::Approx(1.10).epsilon(1e-15));
        CHECK(c.at(2002) == doctest::Approx(1.20).epsilon(1e-15));
        const auto geo = ts::cumulative_inflation(series(rates_info, 2001, {10, 10}), 2000,
                                                  ts::Compounding::geometric);
        CHECK(geo.at(2002) == doctest::Approx(1.21).epsilon(1e-15));
    }
    SUBCASE("bundled US CPI against a running-sum oracle") {
        const auto m = io::load_manifest(support::data_dir() + "/us/manifest.json");
        const auto cpi = io::load_annual(m, "cpi");
        const auto rates = ts::rates_from_index(cpi);
        const auto arith = ts::cumulative_inflation(rates, 1929);
        CHECK(arith.at(2020) == doctest::Approx(3.81867390302821).epsilon(1e-12));
        const auto geo = ts::cumulative_inflation(rates, 1929, ts::Compounding::geometric);
        CHECK(geo.at(2020) == doctest::Approx(15.1085814360771).epsilon(1e-12));
    }
    SUBCASE("gap") {
        std::vector<ts::YearValue> pts{{2001, 1.0}, {2003, 1.0}};
        CHECK_THROWS_AS(ts::cumulative_inflation(ts::AnnualSeries(rates_info, pts), 2000), GapError);
    }
}

TEST_CASE("rates_from_index") {
    const auto flat = ts::rates_from_index(series(support::index_info(), 2000, {100, 100, 100}));
    for (const auto& p : flat.points()) CHECK(p.value == 0.0);
    const auto r = ts::rates_from_index(series(support::index_info(), 2000, {100, 103}));
    CHECK(r.at(2001) == doctest::Approx(3.0).epsilon(1e-13));
    const auto back = ts::cumulative_inflation(flat, 2000);
    for (const auto& p : back.points()) CHECK(p.value == 1.0);

    const auto m = io::load_manifest(support::data_dir() + "/us/manifest.json");
    const auto us = ts::rates_from_index(io::load_annual(m, "cpi"));
    // 100 (82.38 / 72.57 - 1)
    CHECK(us.at(1980) == doctest::Approx(13.5179826374535).epsilon(1e-12));
}

TEST_CASE("align") {
    std::vector<double> a(41), b(41);
    for (int i = 0; i < 41; ++i) a[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] = 1.0 + i;
    const auto sa = series(support::gdp_info(), 1960, a);
    const auto sb = series(support::gdp_info(), 1970, b);
    auto [x, y] = ts::align(sa, sb);
    CHECK(x.first_year() == 1970);
    CHECK(x.last_year() == 2000);
    CHECK(x.years() == y.years());
    auto [p, q] = ts::align(sa, sa);
    CHECK(p.size() == sa.size());

    std::vector<ts::YearValue> gap{{1970, 1.0}, {1972, 1.0}};
    auto [g1, g2] = ts::align(ts::AnnualSeries(support::gdp_info(), gap), sb);
    CHECK_FALSE(g2.contains(1971));
    CHECK_THROWS_AS(ts::align(series(support::gdp_info(), 1900, {1.0}), sb), NoOverlapError);
}

TEST_CASE("property: growth telescopes, normalize is idempotent, align shares years") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> level(0.5, 2.0);
    std::uniform_int_distribution<int> len(2, 60);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = len(rng);
        std::vector<double> v(static_cast<std::size_t>(n));
        double x = 100.0;
        for (auto& e : v) e = (x *= level(rng));
        const auto s = series(support::gdp_info(), 1950, v);
        const auto g = ts::log_growth(s);
        double sum = 0.0;
        for (const auto& p : g.points()) sum += p.value;
        CHECK(std::exp(sum / 100.0) == doctest::Approx(v.back() / v.front()).epsilon(1e-10));

        const int ref = 1950 + n / 2;
        const auto once = ts::normalize(s, ref);
        const auto twice = ts::normalize(once, ref);
        for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice.points()[i].value == once.points()[i].value);

        const auto rates = ts::rates_from_index(s);
        const auto cum = ts::cumulative_inflation(rates, 1950);
        CHECK(cum.at(1950) == 1.0);

        const auto other = series(support::gdp_info(), 1950 + n / 3, std::vector<double>(static_cast<std::size_t>(n), 1.0));
        auto [a, b] = ts::align(s, other);
        CHECK(a.years() == b.years());
    }
}

TEST_CASE("cumulative inflation is monotone for nonnegative rates") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> step(1.0, 1.2);
    std::vector<double> idx{100.0};
    for (int i = 0; i < 50; ++i) idx.push_back(idx.back() * step(rng));
    const auto cum = ts::cumulative_inflation(ts::rates_from_index(series(support::index_info(), 1960, idx)), 1960);
    for (std::size_t i = 1; i < cum.size(); ++i) CHECK(cum.points()[i].value >= cum.points()[i - 1].value);
}

TEST_CASE("quarters") {
    const auto q = ts::QuarterKey::parse("2020Q2");
    CHECK(q.year == 2020);
    CHECK(q.quarter == 2);
    CHECK(q.next().to_string() == "2020Q3");
    CHECK(ts::QuarterKey::parse("2020Q4").next().to_string() == "2021Q1");
    CHECK(ts::QuarterKey::parse("2020Q1").prev().to_string() == "2019Q4");
    CHECK_THROWS_AS(ts::QuarterKey::parse("2020Q5"), ContractError);
    CHECK_THROWS_AS(ts::QuarterKey::parse("2020-2"), ContractError);

    std::vector<ts::QuarterValue> pts{{ts::QuarterKey::parse("2019Q4"), 100.0},
                                      {ts::QuarterKey::parse("2020Q1"), 101.0},
                                      {ts::QuarterKey::parse("2020Q2"), 99.0}};
    const ts::QuarterlySeries levels(support::gdp_info(), pts);
    const auto g = ts::quarterly_log_growth(levels, 4.0);
    CHECK(g.at(ts::QuarterKey::parse("2020Q1")) == doctest::Approx(400.0 * std::log(1.01)).epsilon(1e-14));
    const auto raw = ts::quarterly_log_growth(levels, 1.0);
    CHECK(raw.at(ts::QuarterKey::parse("2020Q2")) == doctest::Approx(100.0 * std::log(99.0 / 101.0)).epsilon(1e-14));

    std::vector<ts::QuarterValue> gap{{ts::QuarterKey::parse("2019Q4"), 100.0},
                                      {ts::QuarterKey::parse("2020Q2"), 101.0}};
    CHECK_THROWS_AS(ts::quarterly_log_growth(ts::QuarterlySeries(support::gdp_info(), gap)), GapError);
}
