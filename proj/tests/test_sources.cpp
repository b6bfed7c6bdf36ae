#include <doctest.h>

#include <cmath>
#include <random>

#include "okunfit/error.hpp"
#include "okunfit/io.hpp"
#include "okunfit/sources.hpp"
#include "support.hpp"

using namespace okunfit;
using support::series;

namespace {

sources::LabelledSeries labelled(std::string label, int first, const std::vector<double>& v) {
    return {std::move(label), series(support::gdp_info(), first, v)};
}

std::vector<double> path(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(0.02, 0.02);
    std::vector<double> v{1000.0};
    for (int i = 1; i < n; ++i) v.push_back(v.back() * std::exp(g(rng)));
    return v;
}

}  // namespace

TEST_CASE("the same series twice does not drift") {
    std::mt19937_64 rng(1);
    const auto v = path(rng, 40);
    const std::vector<sources::LabelledSeries> s{labelled("A", 1970, v), labelled("B", 1970, v)};
    const auto c = sources::compare(s, 1980);
    REQUIRE(c.pairs.size() == 1);
    for (const auto& p : c.pairs[0].ratio.points()) CHECK(p.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.pairs[0].max_div < 1e-15);
    CHECK(c.pairs[0].trend_slope == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.pairs[0].flag == sources::DivergenceFlag::ok);
    CHECK(c.normalized[0].series.at(1980) == 1.0);
}

TEST_CASE("steady drift is measured and flagged") {
    // B grows 0.5% a year slower than A
    std::vector<double> a, b;
    for (int i = 0; i < 31; ++i) {
        a.push_back(100.0 * std::pow(1.03, i));
        b.push_back(100.0 * std::pow(1.03 / 1.005, i));
    }
    const std::vector<sources::LabelledSeries> s{labelled("A", 1990, a), labelled("B", 1990, b),
                                                 labelled("C", 1990, a)};
    const auto c = sources::compare(s, 1990);
    REQUIRE(c.pairs.size() == 3);
    const auto& ab = c.pairs[0];
    CHECK(ab.a == "A");
    CHECK(ab.b == "B");
    CHECK(ab.max_div == doctest::Approx(std::pow(1.005, 30) - 1.0).epsilon(1e-12));
    CHECK(ab.year_of_max == 2020);
    CHECK(ab.trend_slope > 0.0);
    CHECK(ab.flag == sources::DivergenceFlag::alert);
    CHECK(c.pairs[1].flag == sources::DivergenceFlag::ok);  // A vs C
    CHECK(c.pairs[2].flag == sources::DivergenceFlag::alert);

    sources::CompareOptions o;
    o.trend_from = 2010;
    const auto late = sources::compare(s, 1990, o);
    CHECK(late.pairs[0].trend_from == 2010);

    o.alert = 0.5;
    CHECK(sources::compare(s, 1990, o).pairs[0].flag == sources::DivergenceFlag::warn);
    o.warn = 0.6;
    CHECK_THROWS_AS(sources::compare(s, 1990, o), ContractError);
}

TEST_CASE("property: antisymmetry and reference-year invariance") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto va = path(rng, 30), vb = path(rng, 30);
        const auto A = labelled("A", 1980, va), B = labelled("B", 1980, vb);
        const std::vector<sources::LabelledSeries> ab{A, B}, ba{B, A};
        const auto x = sources::compare(ab, 1985);
        const auto y = sources::compare(ba, 1985);
        for (std::size_t i = 0; i < x.pairs[0].ratio.size(); ++i) {
            CHECK(x.pairs[0].ratio.points()[i].value * y.pairs[0].ratio.points()[i].value ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
        // changing the reference year rescales the ratio by a constant
        const auto z = sources::compare(ab, 2000);
        const double k = z.pairs[0].ratio.at(1990) / x.pairs[0].ratio.at(1990);
        for (std::size_t i = 0; i < z.pairs[0].ratio.size(); ++i) {
            CHECK(z.pairs[0].ratio.points()[i].value / x.pairs[0].ratio.points()[i].value ==
                  doctest::Approx(k).epsilon(1e-12));
        }
        // growth factors do not depend on normalization
        CHECK(sources::total_growth_factor(x.normalized[0].series, 1981, 2009) ==
              doctest::Approx(sources::total_growth_factor(A.series, 1981, 2009)).epsilon(1e-12));
    }
}

TEST_CASE("errors") {
    const std::vector<sources::LabelledSeries> s{labelled("A", 1990, {1, 2, 3}), labelled("B", 1991, {1, 2, 3})};
    CHECK_THROWS_AS(sources::compare(s, 1990), MissingYearError);
    CHECK_THROWS_AS(sources::compare(std::span(s).first(1), 1991), ContractError);
    CHECK_THROWS_AS(sources::total_growth_factor(s[0].series, 1990, 2000), MissingYearError);
    CHECK(sources::total_growth_factor(s[0].series, 1990, 1992) == 3.0);
}

TEST_CASE("bundled US sources agree to within a few percent") {
    const auto m = io::load_manifest(support::data_dir() + "/us/manifest.json");
    std::vector<sources::LabelledSeries> s;
    for (const char* id : {"gdppc_bea", "gdppc_pwt", "gdppc_wdi2000"}) s.push_back({id, io::load_annual(m, id)});
    const auto c = sources::compare(s, 1970);
    for (const auto& p : c.pairs) CHECK(p.max_div < 0.10);
}
