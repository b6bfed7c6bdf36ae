#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <random>

#include "okunfit/error.hpp"
#include "okunfit/io.hpp"
#include "support.hpp"

using namespace okunfit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("okunfit_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        io::write_file(path / name, text);
        return path / name;
    }
};

std::string error_of(const auto& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("annual CSV") {
    TempDir dir;
    const auto ok = dir.write("ok.csv", "year,value\n2000,5.5\n2001,6\n\n");
    const auto s = io::read_annual_csv(ok, support::u_info());
    CHECK(s.size() == 2);
    CHECK(s.at(2001) == 6.0);

    const auto dup = dir.write("dup.csv", "year,value\n2000,5.5\n2001,6\n2001,6.1\n");
    CHECK_THROWS_AS(io::read_annual_csv(dup, support::u_info()), ParseError);
    const auto msg = error_of([&] { io::read_annual_csv(dup, support::u_info()); });
    CHECK(msg.find("dup.csv:4:") != std::string::npos);
    CHECK(msg.find("2001") != std::string::npos);

    const auto order = dir.write("order.csv", "year,value\n2001,5\n2000,6\n");
    CHECK(error_of([&] { io::read_annual_csv(order, support::u_info()); }).find("order.csv:3:") != std::string::npos);

    const auto bad = dir.write("bad.csv", "year,value\n2000,abc\n");
    CHECK_THROWS_AS(io::read_annual_csv(bad, support::u_info()), ParseError);

    const auto domain = dir.write("domain.csv", "year,value\n2000,5\n2001,105\n");
    CHECK_THROWS_AS(io::read_annual_csv(domain, support::u_info()), DomainError);
    CHECK(error_of([&] { io::read_annual_csv(domain, support::u_info()); }).find("domain.csv:3:") != std::string::npos);

    const auto header = dir.write("header.csv", "date,value\n2000,5\n");
    CHECK_THROWS_AS(io::read_annual_csv(header, support::u_info()), ParseError);
    CHECK_THROWS_AS(io::read_annual_csv(dir.write("empty.csv", ""), support::u_info()), ParseError);
    CHECK_THROWS_AS(io::read_annual_csv(dir.path / "missing.csv", support::u_info()), IoError);
}

TEST_CASE("quarterly CSV") {
    TempDir dir;
    const auto ok = dir.write("q.csv", "quarter,value\n2019Q4,3.6\n2020Q1,3.8\n");
    const auto q = io::read_quarterly_csv(ok, support::u_info());
    CHECK(q.size() == 2);
    const auto bad = dir.write("qb.csv", "quarter,value\n2019Q4,3.6\n2019Q9,3.8\n");
    CHECK_THROWS_AS(io::read_quarterly_csv(bad, support::u_info()), ParseError);
}

TEST_CASE("sha256") {
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    TempDir dir;
    CHECK(io::sha256_file(dir.write("abc.txt", "abc")) == io::sha256_hex("abc"));
}

TEST_CASE("format_number round-trips") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = d(rng);
        const auto text = io::format_number(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == v);
    }
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::to_csv({"a", "b"}, {{"1", "2"}}) == "a,b\n1,2\n");
}

TEST_CASE("manifest") {
    const auto m = io::load_manifest(support::data_dir() + "/us/manifest.json");
    CHECK(m.country == "US");
    CHECK(m.role("unemployment") == std::optional<std::string>("u_bls"));
    CHECK_FALSE(m.role("nothing").has_value());
    CHECK_THROWS_AS(m.entry("nope"), ContractError);
    CHECK_THROWS_AS(io::load_annual(m, "gdppc_q"), ContractError);
    CHECK(io::load_quarterly(m, "gdppc_q").size() > 0);
    CHECK(io::load_annual(m, "u_bls").info().variable == ts::Variable::unemployment_rate);

    TempDir dir;
    CHECK_THROWS_AS(io::load_manifest(dir.write("a.json", "{not json")), ParseError);
    CHECK_THROWS_AS(io::load_manifest(dir.write("b.json", R"({"country":"X","series":[]})")), ParseError);
    CHECK_THROWS_AS(io::load_manifest(dir.write("c.json", R"({"country":"X","series":[
        {"id":"a","file":"a.csv","variable":"real_gdp_pc","unit":"currency_per_capita","source":"s"},
        {"id":"a","file":"b.csv","variable":"real_gdp_pc","unit":"currency_per_capita","source":"s"}]})")),
                    ParseError);
    CHECK_THROWS_AS(io::load_manifest(dir.write("d.json", R"({"country":"X","series":[
        {"id":"a","file":"a.csv","variable":"wages","unit":"currency_per_capita","source":"s"}]})")),
                    ParseError);
    CHECK_THROWS_AS(io::load_manifest(dir.path / "none.json"), IoError);
}
