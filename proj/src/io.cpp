#include "okunfit/io.hpp"

#include <array>
#include <cmath>
#include <charconv>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_map>

#include <openssl/evp.h>

#include "okunfit/error.hpp"

namespace okunfit::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string where(const fs::path& path, int line) { return path.string() + ":" + std::to_string(line) + ": "; }

struct Row {
    int line = 0;
    std::string_view key;
    double value = 0.0;
};

// Splits the file into (key, value) rows after checking the header.
std::vector<Row> parse_rows(const fs::path& path, const std::string& text, std::string_view key_name) {
    std::vector<Row> rows;
    std::size_t pos = 0;
    int line = 0;
    bool header_seen = false;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line;
        const auto content = trim(raw);
        if (content.empty()) continue;
        const auto comma = content.find(',');
        if (comma == std::string_view::npos || content.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(where(path, line) + "expected exactly two comma-separated fields");
        }
        const auto key = trim(content.substr(0, comma));
        const auto val = trim(content.substr(comma + 1));
        if (!header_seen) {
            if (key != key_name || val != "value") {
                throw ParseError(where(path, line) + "header must be '" + std::string(key_name) + ",value'");
            }
            header_seen = true;
            continue;
        }
        double v = 0.0;
        const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
        if (res.ec != std::errc() || res.ptr != val.data() + val.size()) {
            throw ParseError(where(path, line) + "value '" + std::string(val) + "' is not a number");
        }
        if (!std::isfinite(v)) throw ParseError(where(path, line) + "value is not finite");
        rows.push_back({line, key, v});
    }
    if (!header_seen) throw ParseError(where(path, 1) + "empty file");
    return rows;
}

}  // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing " + path.string());
}

ts::AnnualSeries read_annual_csv(const fs::path& path, const ts::SeriesInfo& info) {
    const std::string text = read_file(path);
    std::vector<ts::YearValue> pts;
    std::unordered_map<int, int> first_line;
    for (const auto& row : parse_rows(path, text, "year")) {
        int year = 0;
        const auto res = std::from_chars(row.key.data(), row.key.data() + row.key.size(), year);
        if (res.ec != std::errc() || res.ptr != row.key.data() + row.key.size()) {
            throw ParseError(where(path, row.line) + "year '" + std::string(row.key) + "' is not an integer");
        }
        if (auto it = first_line.find(year); it != first_line.end()) {
            throw ParseError(where(path, row.line) + "duplicate year " + std::to_string(year) +
                             " (first on line " + std::to_string(it->second) + ")");
        }
        if (!pts.empty() && year < pts.back().year) {
            throw ParseError(where(path, row.line) + "year " + std::to_string(year) + " is out of order");
        }
        if (auto why = ts::domain_violation(info, row.value)) {
            throw DomainError(where(path, row.line) + *why + " (value " + format_number(row.value) + ")");
        }
        first_line.emplace(year, row.line);
        pts.push_back({year, row.value});
    }
    return ts::AnnualSeries(info, std::move(pts));
}

ts::QuarterlySeries read_quarterly_csv(const fs::path& path, const ts::SeriesInfo& info) {
    const std::string text = read_file(path);
    std::vector<ts::QuarterValue> pts;
    for (const auto& row : parse_rows(path, text, "quarter")) {
        ts::QuarterKey q;
        try {
            q = ts::QuarterKey::parse(row.key);
        } catch (const ContractError& e) {
            throw ParseError(where(path, row.line) + e.what());
        }
        if (!pts.empty() && q <= pts.back().quarter) {
            throw ParseError(where(path, row.line) + "quarter " + q.to_string() +
                             (q == pts.back().quarter ? " is duplicated" : " is out of order"));
        }
        if (auto why = ts::domain_violation(info, row.value)) {
            throw DomainError(where(path, row.line) + *why + " (value " + format_number(row.value) + ")");
        }
        pts.push_back({q, row.value});
    }
    return ts::QuarterlySeries(info, std::move(pts));
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw IoError("SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

// Manifest ------------------------------------------------------------------

const SeriesEntry& Manifest::entry(std::string_view id) const {
    for (const auto& e : series) {
        if (e.id == id) return e;
    }
    throw ContractError(path.string() + ": no series with id '" + std::string(id) + "'");
}

std::optional<std::string> Manifest::role(std::string_view name) const {
    if (auto it = roles.find(std::string(name)); it != roles.end()) return it->second;
    return std::nullopt;
}

ts::SeriesInfo Manifest::info(const SeriesEntry& e) const { return {country, e.variable, e.unit, e.source}; }

fs::path Manifest::file_path(const SeriesEntry& e) const { return dir() / e.file; }

Manifest load_manifest(const fs::path& path) {
    const std::string text = read_file(path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": invalid JSON: " + e.what());
    }
    auto field = [&path](const nlohmann::ordered_json& obj, const char* key, const std::string& ctx) {
        if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
            throw ParseError(path.string() + ": " + ctx + " needs a string field '" + key + "'");
        }
        return obj[key].get<std::string>();
    };
    Manifest m;
    m.path = path;
    m.country = field(j, "country", "manifest");
    if (!j.contains("series") || !j["series"].is_array() || j["series"].empty()) {
        throw ParseError(path.string() + ": manifest needs a non-empty 'series' array");
    }
    for (const auto& s : j["series"]) {
        SeriesEntry e;
        e.id = field(s, "id", "series entry");
        const std::string ctx = "series '" + e.id + "'";
        e.file = field(s, "file", ctx);
        try {
            e.variable = ts::parse_variable(field(s, "variable", ctx));
            e.unit = ts::parse_unit(field(s, "unit", ctx));
        } catch (const ParseError&) {
            throw;
        } catch (const ContractError& err) {
            throw ParseError(path.string() + ": " + ctx + ": " + err.what());
        }
        e.source = field(s, "source", ctx);
        if (s.contains("frequency")) {
            const std::string f = field(s, "frequency", ctx);
            if (f == "annual") {
                e.frequency = Frequency::annual;
            } else if (f == "quarterly") {
                e.frequency = Frequency::quarterly;
            } else {
                throw ParseError(path.string() + ": " + ctx + ": unknown frequency '" + f + "'");
            }
        }
        for (const auto& other : m.series) {
            if (other.id == e.id) throw ParseError(path.string() + ": duplicate series id '" + e.id + "'");
        }
        m.series.push_back(std::move(e));
    }
    if (j.contains("roles")) {
        if (!j["roles"].is_object()) throw ParseError(path.string() + ": 'roles' must be an object");
        for (const auto& [role, id] : j["roles"].items()) {
            if (!id.is_string()) throw ParseError(path.string() + ": role '" + role + "' must name a series id");
            m.entry(id.get<std::string>());  // must exist
            m.roles.emplace(role, id.get<std::string>());
        }
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ParseError(path.string() + ": 'params' must be an object");
        m.params = j["params"];
    }
    return m;
}

ts::AnnualSeries load_annual(const Manifest& m, std::string_view id) {
    const auto& e = m.entry(id);
    if (e.frequency != Frequency::annual) throw ContractError("series '" + e.id + "' is not annual");
    return read_annual_csv(m.file_path(e), m.info(e));
}

ts::QuarterlySeries load_quarterly(const Manifest& m, std::string_view id) {
    const auto& e = m.entry(id);
    if (e.frequency != Frequency::quarterly) throw ContractError("series '" + e.id + "' is not quarterly");
    return read_quarterly_csv(m.file_path(e), m.info(e));
}

}  // namespace okunfit::io
