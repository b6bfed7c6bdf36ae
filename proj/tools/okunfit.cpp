// okunfit: command-line front end. Every command reads one country manifest,
// writes its artifacts to --output-dir and exits with 0, or with the code of
// the error family that stopped it (2 contract, 3 infeasible, 4 I/O).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "okunfit/breakdetect.hpp"
#include "okunfit/error.hpp"
#include "okunfit/io.hpp"
#include "okunfit/model.hpp"
#include "okunfit/report.hpp"
#include "okunfit/sources.hpp"
#include "okunfit/timeseries.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace okunfit;

std::string slug(const std::string& country) {
    std::string s;
    for (char c : country) s += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string fixed3(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

// Per-invocation state: the effective configuration (CLI flag, else manifest
// param, else built-in default) and the digests of every input read.
class Run {
public:
    Run(io::Manifest manifest, std::string command, fs::path output_dir)
        : manifest_(std::move(manifest)), command_(std::move(command)), output_dir_(std::move(output_dir)) {
        add_input(manifest_.path);
    }

    const io::Manifest& manifest() const { return manifest_; }

    template <typename T>
    T param(const std::string& name, const CLI::Option* flag, const T& cli_value, const T& fallback) {
        T value = fallback;
        if (flag != nullptr && flag->count() > 0) {
            value = cli_value;
        } else if (manifest_.params.contains(name)) {
            try {
                value = manifest_.params.at(name).get<T>();
            } catch (const nlohmann::json::exception&) {
                throw ParseError(manifest_.path.string() + ": param '" + name + "' has the wrong type");
            }
        }
        config_[name] = value;
        return value;
    }

    template <typename T>
    std::optional<T> optional_param(const std::string& name, const CLI::Option* flag, const T& cli_value) {
        if ((flag != nullptr && flag->count() > 0) || manifest_.params.contains(name)) {
            return param<T>(name, flag, cli_value, cli_value);
        }
        config_[name] = nullptr;
        return std::nullopt;
    }

    void record(const std::string& name, Json value) { config_[name] = std::move(value); }

    void add_input(const fs::path& p) {
        const auto digest = io::sha256_file(p);
        inputs_.push_back(Json{{"file", relative(p)}, {"sha256", digest}});
    }

    ts::AnnualSeries annual(const std::string& id) {
        const auto& e = manifest_.entry(id);
        auto s = io::load_annual(manifest_, id);
        add_input(manifest_.file_path(e));
        return s;
    }

    ts::QuarterlySeries quarterly(const std::string& id) {
        const auto& e = manifest_.entry(id);
        auto s = io::load_quarterly(manifest_, id);
        add_input(manifest_.file_path(e));
        return s;
    }

    std::string role(const std::string& name) const {
        if (auto id = manifest_.role(name)) return *id;
        throw ContractError(manifest_.path.string() + ": manifest binds no series to role '" + name +
                            "' (series not bundled)");
    }

    Json header() const {
        Json config = Json{{"command", command_}, {"country", manifest_.country}, {"params", config_}};
        Json h;
        h["country"] = manifest_.country;
        h["command"] = command_;
        h["config"] = config_;
        h["config_sha256"] = io::sha256_hex(config.dump());
        h["inputs"] = inputs_;
        return h;
    }

    fs::path output(const std::string& suffix) const { return output_dir_ / (slug(manifest_.country) + "_" + suffix); }

    void write(const std::string& suffix, const std::string& content) const {
        const auto p = output(suffix);
        io::write_file(p, content);
        std::cout << "wrote " << p.string() << "\n";
    }

    void write_json(const std::string& suffix, const Json& j) const { write(suffix, j.dump(2) + "\n"); }

    std::string relative(const fs::path& p) const {
        const auto base = fs::absolute(manifest_.dir()).lexically_normal();
        const auto rel = fs::absolute(p).lexically_normal().lexically_relative(base);
        return rel.empty() ? p.generic_string() : rel.generic_string();
    }

private:
    io::Manifest manifest_;
    std::string command_;
    fs::path output_dir_;
    Json config_ = Json::object();
    Json inputs_ = Json::array();
};

Backend parse_backend(const std::string& s) {
    if (s == "parallel") return Backend::parallel;
    if (s == "reference") return Backend::reference;
    throw ContractError("unknown backend '" + s + "' (expected parallel or reference)");
}

std::string cell(std::optional<double> v) { return v ? io::format_number(*v) : std::string(); }

// Options shared by every subcommand.
struct CommonArgs {
    std::string manifest;
    std::string output_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--manifest,-m", a.manifest, "Country manifest (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output-dir,-o", a.output_dir, "Directory for reports and plot CSVs")->capture_default_str();
}

// validate ------------------------------------------------------------------

int cmd_validate(const CommonArgs& common) {
    Run run(io::load_manifest(common.manifest), "validate", common.output_dir);
    const auto& m = run.manifest();
    Json series = Json::array();
    int exit_code = 0;
    for (const auto& e : m.series) {
        Json row{{"id", e.id},
                 {"file", e.file},
                 {"variable", std::string(ts::to_string(e.variable))},
                 {"unit", std::string(ts::to_string(e.unit))},
                 {"source", e.source},
                 {"frequency", e.frequency == io::Frequency::annual ? "annual" : "quarterly"}};
        try {
            if (e.frequency == io::Frequency::annual) {
                const auto s = run.annual(e.id);
                row["first"] = s.first_year();
                row["last"] = s.last_year();
                row["n"] = s.size();
                Json gaps = Json::array();
                for (const auto& g : s.gaps()) gaps.push_back(Json::array({g.first, g.second}));
                row["gaps"] = gaps;
                std::cout << std::left << std::setw(16) << e.id << " " << s.first_year() << "-" << s.last_year()
                          << "  n=" << s.size() << "  gaps=" << s.gaps().size() << "  "
                          << ts::to_string(e.variable) << " [" << ts::to_string(e.unit) << "]\n";
            } else {
                const auto s = run.quarterly(e.id);
                row["first"] = s.points().front().quarter.to_string();
                row["last"] = s.points().back().quarter.to_string();
                row["n"] = s.size();
                std::cout << std::left << std::setw(16) << e.id << " " << s.points().front().quarter.to_string()
                          << "-" << s.points().back().quarter.to_string() << "  n=" << s.size() << "  "
                          << ts::to_string(e.variable) << " [" << ts::to_string(e.unit) << "]\n";
            }
            row["status"] = "ok";
        } catch (const Error& err) {
            row["status"] = "error";
            row["error"] = Json{{"kind", err.kind()}, {"message", err.what()}};
            std::cerr << "okunfit: " << err.kind() << ": " << err.what() << "\n";
            if (exit_code == 0) exit_code = err.exit_code();
        }
        series.push_back(row);
    }
    Json out = run.header();
    out["series"] = series;
    out["valid"] = exit_code == 0;
    run.write_json("validate.json", out);
    return exit_code;
}

// detect --------------------------------------------------------------------

struct DetectArgs {
    int inflation_start = 0, inflation_end = 0, max_breaks = 2, min_segment = 5;
    std::string cumulative_mode = "arithmetic", backend = "parallel";
    double min_improvement = 0.02, dummy_threshold = 4.0;
    std::vector<int> breaks, dummy_years;
    bool detect_dummies = false;
    CLI::Option *o_start{}, *o_end{}, *o_max{}, *o_min{}, *o_mode{}, *o_backend{}, *o_improve{}, *o_thr{},
        *o_breaks{}, *o_dummies{}, *o_detect{};
};

int cmd_detect(const CommonArgs& common, const DetectArgs& a) {
    Run run(io::load_manifest(common.manifest), "detect", common.output_dir);
    const auto cpi = run.annual(run.role("cpi"));
    const auto dgdp = run.annual(run.role("dgdp"));
    const int start = run.param("inflation_start", a.o_start, a.inflation_start,
                                std::max(cpi.first_year(), dgdp.first_year()));
    const int end = run.param("inflation_end", a.o_end, a.inflation_end, std::min(cpi.last_year(), dgdp.last_year()));
    const auto mode = ts::parse_compounding(run.param("cumulative_mode", a.o_mode, a.cumulative_mode,
                                                      std::string("arithmetic")));
    const int max_breaks = run.param("max_breaks", a.o_max, a.max_breaks, 2);
    const int min_segment = run.param("min_segment", a.o_min, a.min_segment, 5);
    breaks::CandidateOptions copt;
    copt.min_relative_improvement = run.param("min_improvement", a.o_improve, a.min_improvement, 0.02);
    copt.backend = parse_backend(run.param("backend", a.o_backend, a.backend, std::string("parallel")));

    const auto cpi_cum = ts::cumulative_inflation(ts::rates_from_index(cpi.slice(start, end)), start, mode);
    const auto dgdp_cum = ts::cumulative_inflation(ts::rates_from_index(dgdp.slice(start, end)), start, mode);
    const auto diff = breaks::difference_curve(cpi_cum, dgdp_cum);
    const auto candidates = breaks::candidate_breaks(diff, max_breaks, min_segment, copt);
    std::vector<int> candidate_years;
    for (const auto& c : candidates) candidate_years.push_back(c.year);

    const auto bridge_breaks = run.param("bridge_breaks", a.o_breaks, a.breaks, candidate_years);
    auto dummy_years = run.param("dummy_years", a.o_dummies, a.dummy_years, std::vector<int>{});
    const bool detect = run.param("detect_dummies", a.o_detect, a.detect_dummies, false);
    const double threshold = run.param("dummy_threshold", a.o_thr, a.dummy_threshold, 4.0);
    std::vector<int> suggested;
    if (detect) {
        suggested = breaks::detect_dummy_years(cpi_cum, dgdp_cum, bridge_breaks, threshold);
        if (dummy_years.empty()) dummy_years = suggested;
    }
    const auto bridge = breaks::bridge_fit(cpi_cum, dgdp_cum, bridge_breaks, dummy_years);
    const auto hinge = breaks::hinge_fit(diff, candidate_years);

    Json out = run.header();
    out["span"] = Json{{"start", diff.first_year()}, {"end", diff.last_year()}};
    out["candidates"] = report::to_json(candidates);
    out["difference_fit_rms"] = hinge.rms;
    out["bridge"] = report::to_json(bridge);
    if (detect) out["dummy_suggestions"] = suggested;
    run.write_json("detect.json", out);

    auto [c, d] = ts::align(cpi_cum, dgdp_cum);
    const auto fitted_cpi = breaks::bridge_fitted(bridge, d);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        rows.push_back({std::to_string(diff.points()[i].year), io::format_number(c.points()[i].value),
                        io::format_number(d.points()[i].value), io::format_number(diff.points()[i].value),
                        io::format_number(hinge.fitted[i]), io::format_number(fitted_cpi[i])});
    }
    run.write("detect_plot.csv",
              io::to_csv({"year", "cpi_cum", "dgdp_cum", "diff", "fitted_diff", "bridge_cpi"}, rows));

    std::cout << "candidate breaks:";
    for (const auto& cb : candidates) std::cout << " " << cb.year;
    std::cout << (candidates.empty() ? " none\n" : "\n");
    for (const auto& s : bridge.segments) {
        std::cout << "  " << s.start_year << "-" << s.end_year << "  scale " << fixed3(s.scale) << "\n";
    }
    return 0;
}

// fit -----------------------------------------------------------------------

struct FitArgs {
    int fit_start = 0, fit_end = 0, n_breaks = 0, min_segment = 5, search_radius = 3;
    std::vector<int> breaks, candidates, exclude;
    std::string anchor_mode = "measured", backend = "parallel", unemployment_csv;
    CLI::Option *o_start{}, *o_end{}, *o_n{}, *o_min{}, *o_radius{}, *o_breaks{}, *o_cand{}, *o_excl{},
        *o_anchor{}, *o_backend{}, *o_ucsv{};
};

int cmd_fit(const CommonArgs& common, const FitArgs& a) {
    Run run(io::load_manifest(common.manifest), "fit", common.output_dir);
    const auto& m = run.manifest();
    std::optional<ts::AnnualSeries> u_opt;
    std::string u_label;
    if (a.o_ucsv->count() > 0) {
        u_opt = io::read_annual_csv(a.unemployment_csv, ts::SeriesInfo{m.country, ts::Variable::unemployment_rate,
                                                                         ts::Unit::percent_points, "file"});
        run.add_input(a.unemployment_csv);
        u_label = run.relative(a.unemployment_csv);
    } else {
        u_label = run.role("unemployment");
        u_opt = run.annual(u_label);
    }
    const auto& u = *u_opt;
    const auto gdp_id = run.role("gdppc");
    const auto gdp = run.annual(gdp_id);
    const auto growth = ts::log_growth(gdp);
    run.record("unemployment", u_label);
    run.record("gdppc", gdp_id);

    const int start = run.param("fit_start", a.o_start, a.fit_start, std::max(u.first_year(), gdp.first_year()));
    const int end = run.param("fit_end", a.o_end, a.fit_end, std::min(u.last_year(), gdp.last_year()));
    const auto u_fit = u.slice(start, end);
    if (u_fit.size() < 3) throw ContractError("fit span " + std::to_string(start) + "-" + std::to_string(end) +
                                              " holds fewer than 3 years");
    const auto mode = okun::parse_anchor_mode(run.param("anchor_mode", a.o_anchor, a.anchor_mode,
                                                        std::string("measured")));
    const int min_segment = run.param("min_segment", a.o_min, a.min_segment, 5);
    const auto exclude = run.param("exclude_years", a.o_excl, a.exclude, std::vector<int>{});
    const auto fixed_breaks = run.optional_param("breaks", a.o_breaks, a.breaks);

    Json search = nullptr;
    std::optional<okun::FitReport> report;
    if (fixed_breaks) {
        auto model = okun::fit_segments(u_fit, growth, *fixed_breaks, mode, min_segment);
        report = okun::make_report(std::move(model), u_fit, growth, mode);
    } else {
        okun::SearchOptions opt;
        opt.n_breaks = run.param("n_breaks", a.o_n, a.n_breaks, 0);
        opt.candidates = run.param("candidates", a.o_cand, a.candidates, std::vector<int>{});
        opt.search_radius = run.param("search_radius", a.o_radius, a.search_radius, 3);
        opt.min_segment = min_segment;
        opt.anchor_mode = mode;
        opt.backend = parse_backend(run.param("backend", a.o_backend, a.backend, std::string("parallel")));
        auto result = okun::search_breaks(u_fit, growth, opt);
        search = Json{{"n_breaks", opt.n_breaks},
                      {"candidates", opt.candidates},
                      {"search_radius", opt.search_radius},
                      {"admissible_years", okun::admissible_break_years(start, end, opt)},
                      {"placements_evaluated", result.placements_evaluated},
                      {"search_rms", result.search_rms}};
        report = std::move(result.report);
    }

    Json out = run.header();
    out["fit_span"] = Json{{"start", start}, {"end", end}};
    out["search"] = search;
    const Json fit_json = report::to_json(*report);
    for (const auto& [k, v] : fit_json.items()) out[k] = v;
    std::optional<okun::FitReport> excluded;
    if (!exclude.empty()) {
        excluded = okun::exclude_years(*report, exclude);
        out["excluded_years"] = excluded->excluded_years;
        out["statistics_excluding"] = report::to_json(excluded->stats);
    }
    run.write_json("fit.json", out);

    Json model = Json{{"country", m.country}};
    const Json model_json = report::to_json(report->model);
    for (const auto& [k, v] : model_json.items()) model[k] = v;
    model["meta"] = Json{{"anchor_mode", std::string(okun::to_string(mode))},
                         {"fit_start", start},
                         {"fit_end", end},
                         {"unemployment", u_label},
                         {"gdppc", gdp_id},
                         {"config_sha256", out["config_sha256"]}};
    run.write_json("model.json", model);

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : report->residuals.points()) {
        rows.push_back({std::to_string(p.year), io::format_number(report->measured.at(p.year)),
                        io::format_number(report->predicted.at(p.year)), io::format_number(p.value)});
    }
    run.write("fit_plot.csv", io::to_csv({"year", "measured", "predicted", "residual"}, rows));

    for (const auto& s : report->model.segments()) {
        std::cout << "  " << s.start_year << "-" << s.end_year << "  b = " << fixed3(s.b) << "  a = " << fixed3(s.a)
                  << "\n";
    }
    std::cout << "sigma = " << fixed3(report->stats.residual_sigma) << " pp  R2 = " << fixed3(report->stats.r_squared)
              << "  mean u = " << fixed3(report->stats.mean_u) << "\n";
    if (excluded) {
        std::cout << "excluding " << exclude.size() << " year(s): sigma = " << fixed3(excluded->stats.residual_sigma)
                  << " pp  R2 = " << fixed3(excluded->stats.r_squared) << "\n";
    }
    for (const auto& w : report->model.warnings()) std::cerr << "warning: " << w << "\n";
    return 0;
}

// predict -------------------------------------------------------------------

struct PredictArgs {
    std::string model;
    int horizon = 0;
    bool quarterly = false;
    std::string from, to;
    double annualization = 4.0, u_start = 0.0;
    CLI::Option *o_horizon{}, *o_from{}, *o_to{}, *o_ann{}, *o_ustart{};
};

okun::PiecewiseOkun load_model(Run& run, const std::string& path) {
    const auto text = io::read_file(path);
    run.add_input(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    return report::model_from_json(j);
}

int cmd_predict(const CommonArgs& common, const PredictArgs& a) {
    Run run(io::load_manifest(common.manifest), "predict", common.output_dir);
    const auto model = load_model(run, a.model);
    run.record("model", run.relative(a.model));
    Json out;

    if (!a.quarterly) {
        const int horizon = run.param("horizon", a.o_horizon, a.horizon, 0);
        if (horizon < 0) throw ContractError("horizon must be >= 0");
        const auto gdp = run.annual(run.role("gdppc"));
        const auto growth = ts::log_growth(gdp);
        auto segs = model.segments();
        segs.back().end_year += horizon;
        const okun::PiecewiseOkun extended(segs, model.anchors());
        const auto predicted = okun::predict(extended, growth);
        std::optional<ts::AnnualSeries> measured;
        if (auto id = run.manifest().role("unemployment")) measured = run.annual(*id);
        out = run.header();
        Json rows = Json::array();
        std::vector<std::vector<std::string>> csv;
        for (const auto& p : predicted.points()) {
            std::optional<double> meas = measured ? measured->find(p.year) : std::nullopt;
            rows.push_back(Json{{"year", p.year}, {"predicted", p.value}, {"measured", meas ? Json(*meas) : Json()}});
            csv.push_back({std::to_string(p.year), io::format_number(p.value), cell(meas)});
        }
        out["horizon"] = horizon;
        out["predictions"] = rows;
        run.write_json("predict.json", out);
        run.write("predict_plot.csv", io::to_csv({"year", "predicted", "measured"}, csv));
        return 0;
    }

    const auto levels = run.quarterly(run.role("gdppc_quarterly"));
    std::optional<ts::QuarterlySeries> uq;
    if (auto id = run.manifest().role("unemployment_quarterly")) uq = run.quarterly(*id);
    const auto from = ts::QuarterKey::parse(run.param("quarterly_from", a.o_from, a.from, std::string()));
    const auto to = ts::QuarterKey::parse(run.param("quarterly_to", a.o_to, a.to, std::string()));
    if (!(from < to)) throw ContractError("quarterly_from must precede quarterly_to");
    const double ann = run.param("annualization", a.o_ann, a.annualization, 4.0);
    if (!(ann > 0.0)) throw ContractError("annualization must be positive");
    const auto growth = ts::quarterly_log_growth(levels, ann).slice(from.next(), to);
    double u_start = 0.0;
    if (auto given = run.optional_param("u_start", a.o_ustart, a.u_start)) {
        u_start = *given;
    } else if (uq) {
        u_start = uq->at(from);
        run.record("u_start", u_start);
    } else {
        throw ContractError("no starting unemployment: pass --u-start or bind unemployment_quarterly");
    }
    const auto path = okun::predict_quarterly(model, growth, u_start);
    const auto& last = model.segments().back();

    out = run.header();
    out["segment"] = Json{{"start", last.start_year}, {"end", last.end_year}, {"a", last.a}, {"b", last.b}};
    Json rows = Json::array();
    std::vector<std::vector<std::string>> csv;
    const auto pts = path.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto q = pts[i].quarter;
        const std::optional<double> g = i == 0 ? std::nullopt : growth.find(q);
        const std::optional<double> meas = uq ? uq->find(q) : std::nullopt;
        std::optional<double> implied_pred, implied_meas;
        if (i > 0 && meas) {
            implied_pred = okun::implied_quarterly_growth(last, pts[i - 1].value, *meas);
            if (auto prev = uq->find(pts[i - 1].quarter)) {
                implied_meas = okun::implied_quarterly_growth(last, *prev, *meas);
            }
        }
        auto js = [](std::optional<double> v) { return v ? Json(*v) : Json(); };
        rows.push_back(Json{{"quarter", q.to_string()},
                            {"growth", js(g)},
                            {"predicted", pts[i].value},
                            {"measured", js(meas)},
                            {"implied_growth", js(implied_pred)},
                            {"implied_growth_from_measured", js(implied_meas)}});
        csv.push_back({q.to_string(), cell(g), io::format_number(pts[i].value), cell(meas), cell(implied_pred),
                       cell(implied_meas)});
        std::cout << "  " << q.to_string() << "  u_p = " << fixed3(pts[i].value);
        if (g) std::cout << "  growth = " << fixed3(*g);
        if (implied_pred) std::cout << "  implied growth = " << fixed3(*implied_pred);
        std::cout << "\n";
    }
    out["quarters"] = rows;
    run.write_json("predict_quarterly.json", out);
    run.write("predict_quarterly_plot.csv",
              io::to_csv({"quarter", "growth", "predicted", "measured", "implied_growth",
                          "implied_growth_from_measured"},
                         csv));
    return 0;
}

// audit ---------------------------------------------------------------------

struct AuditArgs {
    std::vector<std::string> series;
    int ref_year = 0, trend_from = 0, growth_from = 0, growth_to = 0;
    double warn = sources::kWarnDivergence, alert = sources::kAlertDivergence;
    CLI::Option *o_series{}, *o_ref{}, *o_trend{}, *o_gfrom{}, *o_gto{}, *o_warn{}, *o_alert{};
};

int cmd_audit(const CommonArgs& common, const AuditArgs& a) {
    Run run(io::load_manifest(common.manifest), "audit", common.output_dir);
    std::vector<std::string> all;
    for (const auto& e : run.manifest().series) {
        if (e.variable == ts::Variable::real_gdp_pc && e.frequency == io::Frequency::annual) all.push_back(e.id);
    }
    const auto ids = run.param("audit_series", a.o_series, a.series, all);
    const auto ref = run.optional_param("ref_year", a.o_ref, a.ref_year);
    if (!ref) throw ContractError("audit needs a reference year (--ref-year or params.ref_year)");
    sources::CompareOptions opt;
    opt.trend_from = run.optional_param("trend_from", a.o_trend, a.trend_from);
    opt.warn = run.param("warn_divergence", a.o_warn, a.warn, sources::kWarnDivergence);
    opt.alert = run.param("alert_divergence", a.o_alert, a.alert, sources::kAlertDivergence);

    std::vector<sources::LabelledSeries> series;
    int common_last = 1 << 30;
    for (const auto& id : ids) {
        series.push_back({id, run.annual(id)});
        common_last = std::min(common_last, series.back().series.last_year());
    }
    const auto cmp = sources::compare(series, *ref, opt);
    const int gfrom = run.param("growth_from", a.o_gfrom, a.growth_from, *ref);
    const int gto = run.param("growth_to", a.o_gto, a.growth_to, common_last);
    Json factors = Json::array();
    for (const auto& s : series) {
        factors.push_back(Json{{"series", s.label},
                               {"from", gfrom},
                               {"to", gto},
                               {"factor", sources::total_growth_factor(s.series, gfrom, gto)}});
    }

    Json out = run.header();
    const Json cmp_json = report::to_json(cmp);
    for (const auto& [k, v] : cmp_json.items()) out[k] = v;
    out["growth_factors"] = factors;
    run.write_json("audit.json", out);

    std::vector<std::string> header{"year"};
    int lo = 1 << 30, hi = -(1 << 30);
    for (const auto& n : cmp.normalized) {
        header.push_back("norm:" + n.label);
        lo = std::min(lo, n.series.first_year());
        hi = std::max(hi, n.series.last_year());
    }
    for (const auto& p : cmp.pairs) header.push_back("ratio:" + p.a + "/" + p.b);
    std::vector<std::vector<std::string>> rows;
    for (int y = lo; y <= hi; ++y) {
        std::vector<std::string> row{std::to_string(y)};
        for (const auto& n : cmp.normalized) row.push_back(cell(n.series.find(y)));
        for (const auto& p : cmp.pairs) row.push_back(cell(p.ratio.find(y)));
        rows.push_back(std::move(row));
    }
    run.write("audit_plot.csv", io::to_csv(header, rows));

    for (const auto& p : cmp.pairs) {
        std::cout << "  " << p.a << "/" << p.b << "  max |ratio-1| = " << fixed3(p.max_div) << " (" << p.year_of_max
                  << ")  trend R2 = " << fixed3(p.trend_r2) << "  " << sources::to_string(p.flag) << "\n";
    }
    for (const auto& f : factors) {
        std::cout << "  growth " << f["series"].get<std::string>() << " " << gfrom << "->" << gto << " = "
                  << fixed3(f["factor"].get<double>()) << "\n";
    }
    return 0;
}

// synth ---------------------------------------------------------------------

struct SynthArgs {
    std::string model;
    double noise = 0.0;
    std::uint64_t seed = 0;
    CLI::Option *o_noise{}, *o_seed{};
};

int cmd_synth(const CommonArgs& common, const SynthArgs& a) {
    Run run(io::load_manifest(common.manifest), "synth", common.output_dir);
    const auto model = load_model(run, a.model);
    run.record("model", run.relative(a.model));
    const double noise = run.param("noise", a.o_noise, a.noise, 0.0);
    const auto seed = run.param<std::uint64_t>("seed", a.o_seed, a.seed, 0);
    const auto gdp_id = run.role("gdppc");
    const auto growth = ts::log_growth(run.annual(gdp_id));
    const auto s = okun::synthesize(model, growth, noise, seed);

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : s.points()) rows.push_back({std::to_string(p.year), io::format_number(p.value)});
    run.write("synth.csv", io::to_csv({"year", "value"}, rows));
    Json out = run.header();
    out["n"] = s.size();
    out["first"] = s.first_year();
    out["last"] = s.last_year();
    run.write_json("synth.json", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"okunfit: piecewise Okun's-law fitting, break detection and source audits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "okunfit 0.1.0");

    CommonArgs common;

    auto* validate = app.add_subcommand("validate", "Check every series of a manifest and print an inventory");
    add_common(validate, common);

    DetectArgs d;
    auto* detect = app.add_subcommand("detect", "Candidate break years and CPI/deflator bridge fit");
    add_common(detect, common);
    d.o_start = detect->add_option("--inflation-start", d.inflation_start, "First year of cumulative inflation [default: first common year]");
    d.o_end = detect->add_option("--inflation-end", d.inflation_end, "Last year [default: last common year]");
    d.o_mode = detect->add_option("--cumulative-mode", d.cumulative_mode, "arithmetic (sum of rates) or geometric [default: arithmetic]");
    d.o_max = detect->add_option("--max-breaks", d.max_breaks, "Largest number of breaks tried [default: 2]");
    d.o_min = detect->add_option("--min-segment", d.min_segment, "Minimum points per segment, >= 3 [default: 5]");
    d.o_improve = detect->add_option("--min-improvement", d.min_improvement, "Relative RMS cut a break must deliver [default: 0.02]");
    d.o_breaks = detect->add_option("--breaks", d.breaks, "Bridge break years [default: detected candidates]")->delimiter(',');
    d.o_dummies = detect->add_option("--dummy-years", d.dummy_years, "Single-year dummies in the bridge")->delimiter(',');
    d.o_detect = detect->add_flag("--detect-dummies", d.detect_dummies, "Suggest dummies from large bridge residuals");
    d.o_thr = detect->add_option("--dummy-threshold", d.dummy_threshold, "Residual threshold in standard deviations [default: 4]");
    d.o_backend = detect->add_option("--backend", d.backend, "parallel or reference [default: parallel]");

    FitArgs f;
    auto* fit = app.add_subcommand("fit", "Fit the piecewise model, searching for breaks unless --breaks is given");
    add_common(fit, common);
    f.o_start = fit->add_option("--fit-start", f.fit_start, "First year of the fit");
    f.o_end = fit->add_option("--fit-end", f.fit_end, "Last year of the fit");
    f.o_breaks = fit->add_option("--breaks", f.breaks, "Fixed break years (skips the search)")->delimiter(',');
    f.o_n = fit->add_option("--n-breaks", f.n_breaks, "Number of breaks to search for [default: 0]");
    f.o_cand = fit->add_option("--candidates", f.candidates, "Candidate years; the search stays within --search-radius of them")->delimiter(',');
    f.o_radius = fit->add_option("--search-radius", f.search_radius, "Years either side of a candidate [default: 3]");
    f.o_min = fit->add_option("--min-segment", f.min_segment, "Minimum years per segment [default: 5]");
    f.o_anchor = fit->add_option("--anchor-mode", f.anchor_mode, "measured or chained [default: measured]");
    f.o_excl = fit->add_option("--exclude-years", f.exclude, "Years left out of the statistics (at most 20%)")->delimiter(',');
    f.o_backend = fit->add_option("--backend", f.backend, "parallel or reference [default: parallel]");
    f.o_ucsv = fit->add_option("--unemployment-csv", f.unemployment_csv, "Use this year,value CSV instead of the manifest's unemployment series")->check(CLI::ExistingFile);

    PredictArgs p;
    auto* predict = app.add_subcommand("predict", "Predict unemployment from a model file");
    add_common(predict, common);
    predict->add_option("--model", p.model, "Model JSON written by fit")->required()->check(CLI::ExistingFile);
    p.o_horizon = predict->add_option("--horizon", p.horizon, "Years past the model's last year [default: 0]");
    predict->add_flag("--quarterly", p.quarterly, "Quarterly path with the last segment's coefficients");
    p.o_from = predict->add_option("--quarterly-from", p.from, "Starting quarter, e.g. 2020Q1");
    p.o_to = predict->add_option("--quarterly-to", p.to, "Last predicted quarter");
    p.o_ann = predict->add_option("--annualization", p.annualization, "Factor applied to quarter-on-quarter log growth [default: 4]");
    p.o_ustart = predict->add_option("--u-start", p.u_start, "Unemployment at the starting quarter [default: measured]");

    AuditArgs au;
    auto* audit = app.add_subcommand("audit", "Compare GDP per capita sources");
    add_common(audit, common);
    au.o_series = audit->add_option("--series", au.series, "Series ids to compare [default: params.audit_series]")->delimiter(',');
    au.o_ref = audit->add_option("--ref-year", au.ref_year, "Normalization year");
    au.o_trend = audit->add_option("--trend-from", au.trend_from, "First year of the ratio trend fit");
    au.o_gfrom = audit->add_option("--growth-from", au.growth_from, "Growth factor start [default: ref year]");
    au.o_gto = audit->add_option("--growth-to", au.growth_to, "Growth factor end [default: last common year]");
    au.o_warn = audit->add_option("--warn-divergence", au.warn, "Flag pairs above this |ratio-1| [default: 0.02]");
    au.o_alert = audit->add_option("--alert-divergence", au.alert, "Alert above this |ratio-1| [default: 0.10]");

    SynthArgs s;
    auto* synth = app.add_subcommand("synth", "Synthetic unemployment from a model plus Gaussian noise");
    add_common(synth, common);
    synth->add_option("--model", s.model, "Model JSON")->required()->check(CLI::ExistingFile);
    s.o_noise = synth->add_option("--noise", s.noise, "Noise standard deviation in pp [default: 0]");
    s.o_seed = synth->add_option("--seed", s.seed, "RNG seed [default: 0]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorFamily::contract);
    }

    try {
        if (validate->parsed()) return cmd_validate(common);
        if (detect->parsed()) return cmd_detect(common, d);
        if (fit->parsed()) return cmd_fit(common, f);
        if (predict->parsed()) return cmd_predict(common, p);
        if (audit->parsed()) return cmd_audit(common, au);
        if (synth->parsed()) return cmd_synth(common, s);
    } catch (const Error& e) {
        std::cerr << "okunfit: " << e.kind() << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "okunfit: ParseError: " << e.what() << "\n";
        return static_cast<int>(ErrorFamily::contract);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "okunfit: IoError: " << e.what() << "\n";
        return static_cast<int>(ErrorFamily::io);
    }
    return 1;
}
