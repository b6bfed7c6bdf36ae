#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "okunfit/timeseries.hpp"

namespace okunfit::io {

namespace fs = std::filesystem;

/// Reads a `year,value` CSV. Malformed rows, duplicate or out-of-order years
/// and out-of-domain values are reported as `file:line: message`.
ts::AnnualSeries read_annual_csv(const fs::path& path, const ts::SeriesInfo& info);

/// Reads a `quarter,value` CSV with quarters written like 2020Q2.
ts::QuarterlySeries read_quarterly_csv(const fs::path& path, const ts::SeriesInfo& info);

std::string read_file(const fs::path& path);
/// Writes atomically enough for our purposes: the file is replaced in full.
void write_file(const fs::path& path, std::string_view content);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// Simple CSV writer; cells are written verbatim, rows end in '\n'.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const fs::path& path);

enum class Frequency { annual, quarterly };

struct SeriesEntry {
    std::string id;
    std::string file;
    ts::Variable variable = ts::Variable::real_gdp_pc;
    ts::Unit unit = ts::Unit::currency_per_capita;
    std::string source;
    Frequency frequency = Frequency::annual;
};

/// One country's inventory: series files, the roles they play and default
/// run parameters.
struct Manifest {
    fs::path path;
    std::string country;
    std::vector<SeriesEntry> series;
    std::map<std::string, std::string> roles;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();

    fs::path dir() const { return path.parent_path(); }
    const SeriesEntry& entry(std::string_view id) const;
    /// Series id bound to a role, if any.
    std::optional<std::string> role(std::string_view name) const;
    ts::SeriesInfo info(const SeriesEntry& e) const;
    fs::path file_path(const SeriesEntry& e) const;
};

Manifest load_manifest(const fs::path& path);

ts::AnnualSeries load_annual(const Manifest& m, std::string_view id);
ts::QuarterlySeries load_quarterly(const Manifest& m, std::string_view id);

}  // namespace okunfit::io
