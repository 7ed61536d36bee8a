#pragma once

// Batch front end: ingest, analyze, buckets, shuffle-check, synth.
//
// Configuration comes from a flat key=value file plus command-line flags;
// flags win. Payload outputs carry no timestamps, so re-running a command
// with identical inputs and config is byte-identical; the volatile bits
// (run time, per-file disposition) live in manifest.json.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hurst/export.hpp"
#include "hurst/hurst.hpp"

namespace hurst::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Everything a run needs, mirrored 1:1 by config-file keys and flags.
struct RunConfig {
    std::vector<std::string> inputs;
    std::string schema = "time,price,size,condition,correction,exchange";
    std::string out_dir = ".";
    std::string format = "csv";  // csv | json
    std::int64_t delta_t = 1;
    std::size_t j1 = 1;
    std::size_t j2 = 10;
    std::size_t max_octave = 14;
    std::string buckets = "<250:1-249;250-500:250-500;750-1000:750-1000;1500+:1500+";
    std::uint64_t seed = 0;
    unsigned jobs = 0;  // 0 = one worker per hardware thread
    std::string ci_mode = "percentile";  // percentile | gaussian
    std::string bias_mode = "raw";       // raw | corrected

    std::int64_t session_start = 34200;
    std::int64_t session_end = 57600;
    std::int64_t trim_tail = 30;
    std::string excluded_conditions = "B,D,G,J,K,L,M,N,O,P,Q,R,T,U,W,Z,4,6";
    std::string nasdaq_only_conditions = "4,6";
    std::string allowed_corrections = "0,1,2";
    std::string nasdaq_tags = "Q,T";

    bool emit_logscale = false;
    bool emit_series = false;

    ColumnSchema column_schema() const { return ColumnSchema::parse(schema); }
    SizeBucketConfig bucket_config() const { return SizeBucketConfig::parse(buckets); }

    CiMode ci() const {
        if (ci_mode == "percentile") return CiMode::percentile;
        if (ci_mode == "gaussian") return CiMode::gaussian;
        throw ConfigError("ci_mode", "expected percentile|gaussian, got '" + ci_mode + "'");
    }

    BiasMode bias() const {
        if (bias_mode == "raw") return BiasMode::raw;
        if (bias_mode == "corrected") return BiasMode::corrected;
        throw ConfigError("bias_mode", "expected raw|corrected, got '" + bias_mode + "'");
    }

    FilterPolicy policy() const {
        FilterPolicy p;
        p.excluded_conditions = split_set(excluded_conditions);
        p.nasdaq_only_conditions = split_set(nasdaq_only_conditions);
        p.allowed_corrections.clear();
        for (const auto& tok : split_list(allowed_corrections))
            p.allowed_corrections.insert(static_cast<int>(detail::parse_int64(tok, "allowed_corrections")));
        p.session_start = session_start;
        p.session_end = session_end;
        p.trim_tail_seconds = trim_tail;
        p.nasdaq_tags = split_set(nasdaq_tags);
        return p;
    }

    void validate() const {
        if (format != "csv" && format != "json")
            throw ConfigError("format", "expected csv|json, got '" + format + "'");
        if (delta_t < 1) throw ConfigError("delta_t", "must be >= 1 second");
        if (j1 < 1) throw ConfigError("j1", "must be >= 1");
        if (j2 < j1) throw ConfigError("j2", "must be >= j1");
        if (max_octave < j2) throw ConfigError("max_octave", "must be >= j2");
        if (session_end <= session_start) throw ConfigError("session_end", "must exceed session_start");
        if (trim_tail < 0) throw ConfigError("trim_tail", "must be >= 0");
        ci();
        bias();
        column_schema();
        bucket_config();
        policy();
    }

    static std::vector<std::string> split_list(const std::string& text) {
        std::vector<std::string> out;
        std::string item;
        std::stringstream ss(text);
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    static std::set<std::string> split_set(const std::string& text) {
        const auto list = split_list(text);
        return {list.begin(), list.end()};
    }
};

// ---------------------------------------------------------------------------
// Config file + manifest plumbing
// ---------------------------------------------------------------------------

/// Load a flat key=value config file ('#' starts a comment). Unknown keys
/// are rejected so typos surface immediately.
inline void load_config_file(const fs::path& path, RunConfig& config) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config", path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto as_u64 = [&](const char* field) {
            return static_cast<std::uint64_t>(detail::parse_int64(value, field));
        };
        if (key == "input") config.inputs.push_back(value);
        else if (key == "schema") config.schema = value;
        else if (key == "out_dir") config.out_dir = value;
        else if (key == "format") config.format = value;
        else if (key == "delta_t") config.delta_t = detail::parse_int64(value, "delta_t");
        else if (key == "j1") config.j1 = as_u64("j1");
        else if (key == "j2") config.j2 = as_u64("j2");
        else if (key == "max_octave") config.max_octave = as_u64("max_octave");
        else if (key == "buckets") config.buckets = value;
        else if (key == "seed") config.seed = as_u64("seed");
        else if (key == "jobs") config.jobs = static_cast<unsigned>(as_u64("jobs"));
        else if (key == "ci_mode") config.ci_mode = value;
        else if (key == "bias_mode") config.bias_mode = value;
        else if (key == "session_start") config.session_start = detail::parse_int64(value, "session_start");
        else if (key == "session_end") config.session_end = detail::parse_int64(value, "session_end");
        else if (key == "trim_tail") config.trim_tail = detail::parse_int64(value, "trim_tail");
        else if (key == "excluded_conditions") config.excluded_conditions = value;
        else if (key == "nasdaq_only_conditions") config.nasdaq_only_conditions = value;
        else if (key == "allowed_corrections") config.allowed_corrections = value;
        else if (key == "nasdaq_tags") config.nasdaq_tags = value;
        else if (key == "emit_logscale") config.emit_logscale = (value == "1" || value == "true");
        else if (key == "emit_series") config.emit_series = (value == "1" || value == "true");
        else throw ConfigError(key, "unknown config key");
    }
}

/// Canonical serialization of a config, the basis of the manifest hash.
inline std::string canonical_config(const RunConfig& c) {
    std::string inputs;
    for (const auto& i : c.inputs) inputs += (inputs.empty() ? "" : "|") + i;
    std::ostringstream out;
    out << "allowed_corrections=" << c.allowed_corrections << "\n"
        << "bias_mode=" << c.bias_mode << "\n"
        << "buckets=" << c.buckets << "\n"
        << "ci_mode=" << c.ci_mode << "\n"
        << "delta_t=" << c.delta_t << "\n"
        << "emit_logscale=" << c.emit_logscale << "\n"
        << "emit_series=" << c.emit_series << "\n"
        << "excluded_conditions=" << c.excluded_conditions << "\n"
        << "format=" << c.format << "\n"
        << "input=" << inputs << "\n"
        << "j1=" << c.j1 << "\n"
        << "j2=" << c.j2 << "\n"
        << "jobs=" << c.jobs << "\n"
        << "max_octave=" << c.max_octave << "\n"
        << "nasdaq_only_conditions=" << c.nasdaq_only_conditions << "\n"
        << "nasdaq_tags=" << c.nasdaq_tags << "\n"
        << "out_dir=" << c.out_dir << "\n"
        << "schema=" << c.schema << "\n"
        << "seed=" << c.seed << "\n"
        << "session_end=" << c.session_end << "\n"
        << "session_start=" << c.session_start << "\n"
        << "trim_tail=" << c.trim_tail << "\n";
    return out.str();
}

inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string utc_now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Per-input disposition recorded in the manifest.
struct FileDisposition {
    std::string path;
    std::string status;  // ok | skipped | failed
    std::string detail;
    std::size_t records = 0;
};

inline void write_manifest(const RunConfig& config, const std::string& command,
                           const std::vector<FileDisposition>& files,
                           const std::vector<std::string>& outputs) {
    ordered_json manifest;
    manifest["command"] = command;
    manifest["config_hash"] = fnv1a_hex(canonical_config(config));
    manifest["generated_at"] = utc_now_iso8601();
    ordered_json cfg;
    std::istringstream lines(canonical_config(config));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    manifest["config"] = cfg;
    manifest["inputs"] = ordered_json::array();
    for (const auto& f : files) {
        ordered_json entry;
        entry["path"] = f.path;
        entry["status"] = f.status;
        if (!f.detail.empty()) entry["detail"] = f.detail;
        entry["records"] = f.records;
        manifest["inputs"].push_back(entry);
    }
    manifest["outputs"] = outputs;
    write_text_file(fs::path(config.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Input discovery
// ---------------------------------------------------------------------------

/// Shell-style match supporting '*' and '?' (filename component only).
inline bool glob_match(std::string_view pattern, std::string_view name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

/// Expand input entries (files, directories, or globs) to a sorted, unique
/// file list. Directories contribute their *.csv members.
inline std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& item : inputs) {
        const fs::path p(item);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".csv")
                    files.push_back(entry.path());
        } else if (item.find('*') != std::string::npos || item.find('?') != std::string::npos) {
            const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
            if (fs::is_directory(dir))
                for (const auto& entry : fs::directory_iterator(dir))
                    if (entry.is_regular_file() && glob_match(p.filename().string(), entry.path().filename().string()))
                        files.push_back(entry.path());
        } else {
            files.push_back(p);
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());
    return files;
}

/// Session files are named <symbol>_<YYYY-MM-DD>.csv.
inline std::optional<std::pair<std::string, Date>> parse_session_name(const fs::path& path) {
    const std::string stem = path.stem().string();
    const std::size_t underscore = stem.rfind('_');
    if (underscore == std::string::npos || stem.size() - underscore - 1 != 10) return std::nullopt;
    try {
        return std::make_pair(stem.substr(0, underscore), Date::parse(stem.substr(underscore + 1)));
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

inline std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (c == '<') out += "lt";
        else if (c == '>') out += "gt";
        else if (c == '+') out += "plus";
        else if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') out += c;
        else out += '_';
    }
    return out;
}

/// Run fn(0..n-1) on a small worker pool; results must be written to
/// preallocated per-index slots. Worker count 0 means hardware concurrency.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// JSON mirrors of the CSV payloads (identical field names)
// ---------------------------------------------------------------------------

inline ordered_json estimate_json(const EstimateRow& row) {
    const auto& e = row.estimate;
    ordered_json j;
    j["symbol"] = row.symbol;
    j["date"] = row.date.to_string();
    j["H"] = e.h;
    j["ci_low"] = e.ci_low;
    j["ci_high"] = e.ci_high;
    j["alpha_hat"] = e.slope.alpha_hat;
    j["var_alpha"] = e.slope.variance;
    j["j1"] = e.slope.j1;
    j["j2"] = e.slope.j2;
    return j;
}

inline ordered_json monthly_json(const std::vector<MonthlySummary>& months) {
    ordered_json arr = ordered_json::array();
    for (const auto& m : months) {
        ordered_json j;
        j["month"] = m.year_month();
        j["mean_H"] = m.mean_h;
        j["ci_low"] = m.ci_low;
        j["ci_high"] = m.ci_high;
        j["day_count"] = m.day_count;
        arr.push_back(j);
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Shared session loading
// ---------------------------------------------------------------------------

struct LoadedSession {
    std::string symbol;
    Date date;
    TradeTape tape;
    ValueSeries series;
};

/// Load one session file end-to-end (name convention, parse, filter,
/// bucketize). Throws on any per-file problem; callers convert to a
/// disposition.
inline LoadedSession load_one_session(const fs::path& path, const RunConfig& config) {
    const auto named = parse_session_name(path);
    if (!named) throw Error("file name must be <symbol>_<YYYY-MM-DD>.csv: '" + path.filename().string() + "'");
    LoadedSession session;
    session.symbol = named->first;
    session.date = named->second;
    session.tape = load_session(path, session.symbol, session.date, config.policy(), config.column_schema());
    session.series = bucketize(session.tape, config.delta_t);
    return session;
}

struct SessionJob {
    FileDisposition disposition;
    std::optional<LoadedSession> session;
};

inline std::vector<SessionJob> load_sessions(const std::vector<fs::path>& files, const RunConfig& config) {
    std::vector<SessionJob> jobs(files.size());
    parallel_for(files.size(), config.jobs, [&](std::size_t i) {
        auto& job = jobs[i];
        job.disposition.path = files[i].string();
        try {
            job.session = load_one_session(files[i], config);
            job.disposition.status = "ok";
            job.disposition.records = job.session->tape.records.size();
        } catch (const std::exception& e) {
            job.disposition.status = "failed";
            job.disposition.detail = e.what();
        }
    });
    return jobs;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_ingest(const RunConfig& config) {
    const auto files = expand_inputs(config.inputs);
    if (files.empty()) {
        std::cerr << "ingest: no input files\n";
        return kExitUsage;
    }
    auto jobs = load_sessions(files, config);

    std::string csv =
        "file,symbol,date,parsed_rows,kept,excluded_condition,bad_correction,non_positive_price,"
        "non_positive_size,outside_session,tail_trim,avg_trade_size\n";
    ordered_json rows = ordered_json::array();
    std::vector<std::string> outputs;
    std::size_t failures = 0;
    for (auto& job : jobs) {
        if (!job.session) {
            ++failures;
            std::cerr << "ingest: " << job.disposition.path << ": " << job.disposition.detail << "\n";
            continue;
        }
        const auto& s = *job.session;
        const auto& log = s.tape.drop_log;
        const std::size_t kept = s.tape.records.size();
        // Per-trade mean of share size over kept trades (not volume-weighted).
        double avg_size = 0.0;
        for (const auto& rec : s.tape.records) avg_size += static_cast<double>(rec.size);
        if (kept > 0) avg_size /= static_cast<double>(kept);
        csv += fs::path(job.disposition.path).filename().string() + "," + s.symbol + "," +
               s.date.to_string() + "," + std::to_string(kept + log.total()) + "," + std::to_string(kept);
        for (auto reason : kAllDropReasons) csv += "," + std::to_string(log.at(reason));
        csv += "," + format_double(avg_size) + "\n";

        ordered_json row;
        row["file"] = fs::path(job.disposition.path).filename().string();
        row["symbol"] = s.symbol;
        row["date"] = s.date.to_string();
        row["parsed_rows"] = kept + log.total();
        row["kept"] = kept;
        row["excluded_condition"] = log.at(DropReason::excluded_condition);
        row["bad_correction"] = log.at(DropReason::bad_correction);
        row["non_positive_price"] = log.at(DropReason::non_positive_price);
        row["non_positive_size"] = log.at(DropReason::non_positive_size);
        row["outside_session"] = log.at(DropReason::outside_session);
        row["tail_trim"] = log.at(DropReason::tail_trim);
        row["avg_trade_size"] = avg_size;
        rows.push_back(row);

        if (config.emit_series) {
            const fs::path out = fs::path(config.out_dir) / "series" /
                                 (s.symbol + "_" + s.date.to_string() + "_series.csv");
            write_text_file(out, value_series_csv(s.series));
            outputs.push_back(out.string());
        }
    }
    if (config.format == "json") {
        const fs::path out = fs::path(config.out_dir) / "ingest_report.json";
        write_text_file(out, rows.dump(2) + "\n");
        outputs.insert(outputs.begin(), out.string());
    } else {
        const fs::path out = fs::path(config.out_dir) / "ingest_report.csv";
        write_text_file(out, csv);
        outputs.insert(outputs.begin(), out.string());
    }
    std::vector<FileDisposition> dispositions;
    for (auto& job : jobs) dispositions.push_back(job.disposition);
    write_manifest(config, "ingest", dispositions, outputs);
    return failures == jobs.size() ? kExitFailure : kExitOk;
}

inline int cmd_analyze(const RunConfig& config) {
    const auto files = expand_inputs(config.inputs);
    if (files.empty()) {
        std::cerr << "analyze: no input files\n";
        return kExitUsage;
    }
    auto jobs = load_sessions(files, config);

    struct Analyzed {
        EstimateRow row;
        LogscaleDiagram diagram;
    };
    std::vector<std::optional<Analyzed>> analyzed(jobs.size());
    parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
        auto& job = jobs[i];
        if (!job.session) return;
        try {
            const auto& s = *job.session;
            HurstEstimate est = estimate_session(s.series, config.j1, config.j2, config.max_octave, config.bias());
            Analyzed a;
            a.row = EstimateRow{s.symbol, s.date, est};
            if (config.emit_logscale) {
                auto decomp = haar_dwt(s.series.values, est.slope.j2);
                a.diagram = build_logscale(decomp, config.j1, config.j2, config.bias());
                a.diagram.symbol = s.symbol;
                a.diagram.date = s.date.to_string();
            }
            analyzed[i] = std::move(a);
        } catch (const std::exception& e) {
            job.disposition.status = "failed";
            job.disposition.detail = e.what();
        }
    });

    std::string csv = estimates_csv_header();
    ordered_json json_rows = ordered_json::array();
    std::map<std::string, std::vector<std::pair<Date, double>>> daily_by_symbol;
    std::vector<std::string> outputs;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!analyzed[i]) {
            ++failures;
            std::cerr << "analyze: " << jobs[i].disposition.path << ": " << jobs[i].disposition.detail << "\n";
            continue;
        }
        const auto& a = *analyzed[i];
        csv += estimate_csv_row(a.row);
        json_rows.push_back(estimate_json(a.row));
        daily_by_symbol[a.row.symbol].emplace_back(a.row.date, a.row.estimate.h);
        if (config.emit_logscale) {
            const fs::path out = fs::path(config.out_dir) /
                                 ("logscale_" + a.row.symbol + "_" + a.row.date.to_string() + ".csv");
            write_text_file(out, logscale_csv(a.diagram));
            outputs.push_back(out.string());
        }
    }
    if (failures == jobs.size()) {
        std::vector<FileDisposition> dispositions;
        for (auto& job : jobs) dispositions.push_back(job.disposition);
        write_manifest(config, "analyze", dispositions, outputs);
        return kExitFailure;
    }

    if (config.format == "json") {
        const fs::path out = fs::path(config.out_dir) / "sessions.json";
        write_text_file(out, json_rows.dump(2) + "\n");
        outputs.insert(outputs.begin(), out.string());
    } else {
        const fs::path out = fs::path(config.out_dir) / "sessions.csv";
        write_text_file(out, csv);
        outputs.insert(outputs.begin(), out.string());
    }

    for (auto& [symbol, daily] : daily_by_symbol) {
        std::sort(daily.begin(), daily.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const auto months = monthly_summary(std::span(daily.data(), daily.size()), config.ci());
        if (config.format == "json") {
            const fs::path out = fs::path(config.out_dir) / ("monthly_" + symbol + ".json");
            write_text_file(out, monthly_json(months).dump(2) + "\n");
            outputs.push_back(out.string());
        } else {
            const fs::path out = fs::path(config.out_dir) / ("monthly_" + symbol + ".csv");
            write_text_file(out, monthly_csv(months));
            outputs.push_back(out.string());
        }
    }

    std::vector<FileDisposition> dispositions;
    for (auto& job : jobs) dispositions.push_back(job.disposition);
    write_manifest(config, "analyze", dispositions, outputs);
    return kExitOk;
}

inline int cmd_buckets(const RunConfig& config) {
    const auto files = expand_inputs(config.inputs);
    if (files.empty()) {
        std::cerr << "buckets: no input files\n";
        return kExitUsage;
    }
    const SizeBucketConfig bucket_config = config.bucket_config();
    auto jobs = load_sessions(files, config);

    struct BucketOutcome {
        std::string symbol;
        Date date;
        std::vector<std::pair<std::string, std::optional<HurstEstimate>>> per_label;
        SizeProportions proportions;
    };
    std::vector<std::optional<BucketOutcome>> outcomes(jobs.size());
    parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
        auto& job = jobs[i];
        if (!job.session) return;
        try {
            const auto& s = *job.session;
            BucketOutcome outcome;
            outcome.symbol = s.symbol;
            outcome.date = s.date;
            outcome.proportions = size_bucket_proportions(s.tape, bucket_config);
            const SizePartition partition = partition_by_size(s.tape, bucket_config);
            for (const auto& [label, part] : partition.parts) {
                std::optional<HurstEstimate> est;
                if (!part.records.empty()) {
                    try {
                        est = estimate_session(bucketize(part, config.delta_t), config.j1, config.j2,
                                               config.max_octave, config.bias());
                    } catch (const Error&) {
                        est.reset();  // too short or degenerate: skipped, not failed
                    }
                }
                outcome.per_label.emplace_back(label, est);
            }
            outcomes[i] = std::move(outcome);
        } catch (const std::exception& e) {
            job.disposition.status = "failed";
            job.disposition.detail = e.what();
        }
    });

    std::map<std::string, std::string> label_csv;
    std::map<std::string, ordered_json> label_json;
    for (const auto& bucket : bucket_config.buckets) {
        label_csv[bucket.label] = estimates_csv_header();
        label_json[bucket.label] = ordered_json::array();
    }
    std::string prop_csv = "symbol,date,label,fraction\n";
    ordered_json prop_json = ordered_json::array();
    std::size_t failures = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!outcomes[i]) {
            ++failures;
            std::cerr << "buckets: " << jobs[i].disposition.path << ": " << jobs[i].disposition.detail << "\n";
            continue;
        }
        const auto& o = *outcomes[i];
        for (const auto& [label, est] : o.per_label) {
            if (!est) continue;
            const EstimateRow row{o.symbol, o.date, *est};
            label_csv[label] += estimate_csv_row(row);
            label_json[label].push_back(estimate_json(row));
        }
        auto prop_row = [&](const std::string& label, double fraction) {
            prop_csv += o.symbol + "," + o.date.to_string() + "," + label + "," + format_double(fraction) + "\n";
            ordered_json j;
            j["symbol"] = o.symbol;
            j["date"] = o.date.to_string();
            j["label"] = label;
            j["fraction"] = fraction;
            prop_json.push_back(j);
        };
        for (const auto& [label, fraction] : o.proportions.by_label) prop_row(label, fraction);
        prop_row("unassigned", o.proportions.unassigned);
    }
    if (failures == jobs.size()) {
        std::vector<FileDisposition> dispositions;
        for (auto& job : jobs) dispositions.push_back(job.disposition);
        write_manifest(config, "buckets", dispositions, {});
        return kExitFailure;
    }

    std::vector<std::string> outputs;
    for (const auto& bucket : bucket_config.buckets) {
        const std::string base = "bucket_" + sanitize_label(bucket.label);
        if (config.format == "json") {
            const fs::path out = fs::path(config.out_dir) / (base + ".json");
            write_text_file(out, label_json[bucket.label].dump(2) + "\n");
            outputs.push_back(out.string());
        } else {
            const fs::path out = fs::path(config.out_dir) / (base + ".csv");
            write_text_file(out, label_csv[bucket.label]);
            outputs.push_back(out.string());
        }
    }
    if (config.format == "json") {
        const fs::path out = fs::path(config.out_dir) / "proportions.json";
        write_text_file(out, prop_json.dump(2) + "\n");
        outputs.push_back(out.string());
    } else {
        const fs::path out = fs::path(config.out_dir) / "proportions.csv";
        write_text_file(out, prop_csv);
        outputs.push_back(out.string());
    }

    std::vector<FileDisposition> dispositions;
    for (auto& job : jobs) dispositions.push_back(job.disposition);
    write_manifest(config, "buckets", dispositions, outputs);
    return kExitOk;
}

inline int cmd_shuffle_check(const RunConfig& config) {
    const auto files = expand_inputs(config.inputs);
    if (files.empty()) {
        std::cerr << "shuffle-check: no input files\n";
        return kExitUsage;
    }
    auto jobs = load_sessions(files, config);

    struct Pair {
        std::string symbol;
        Date date;
        HurstEstimate original;
        HurstEstimate shuffled;
    };
    std::vector<std::optional<Pair>> pairs(jobs.size());
    parallel_for(jobs.size(), config.jobs, [&](std::size_t i) {
        auto& job = jobs[i];
        if (!job.session) return;
        try {
            const auto& s = *job.session;
            Pair pair;
            pair.symbol = s.symbol;
            pair.date = s.date;
            pair.original = estimate_session(s.series, config.j1, config.j2, config.max_octave, config.bias());
            const auto permuted = shuffle(s.series.values, derive_seed(config.seed, i));
            pair.shuffled = estimate_session(std::span<const double>(permuted), config.j1, config.j2,
                                             config.max_octave, config.bias());
            pairs[i] = std::move(pair);
        } catch (const std::exception& e) {
            job.disposition.status = "failed";
            job.disposition.detail = e.what();
        }
    });

    std::string csv = "symbol,date,H_original,H_shuffled,difference\n";
    ordered_json rows = ordered_json::array();
    std::size_t failures = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!pairs[i]) {
            ++failures;
            std::cerr << "shuffle-check: " << jobs[i].disposition.path << ": " << jobs[i].disposition.detail
                      << "\n";
            continue;
        }
        const auto& p = *pairs[i];
        csv += p.symbol + "," + p.date.to_string() + "," + format_double(p.original.h) + "," +
               format_double(p.shuffled.h) + "," + format_double(p.original.h - p.shuffled.h) + "\n";
        ordered_json j;
        j["symbol"] = p.symbol;
        j["date"] = p.date.to_string();
        j["H_original"] = p.original.h;
        j["H_shuffled"] = p.shuffled.h;
        j["difference"] = p.original.h - p.shuffled.h;
        rows.push_back(j);
    }
    std::vector<std::string> outputs;
    if (failures < jobs.size()) {
        if (config.format == "json") {
            const fs::path out = fs::path(config.out_dir) / "shuffle_check.json";
            write_text_file(out, rows.dump(2) + "\n");
            outputs.push_back(out.string());
        } else {
            const fs::path out = fs::path(config.out_dir) / "shuffle_check.csv";
            write_text_file(out, csv);
            outputs.push_back(out.string());
        }
    }
    std::vector<FileDisposition> dispositions;
    for (auto& job : jobs) dispositions.push_back(job.disposition);
    write_manifest(config, "shuffle-check", dispositions, outputs);
    return failures == jobs.size() ? kExitFailure : kExitOk;
}

inline int cmd_synth([[maybe_unused]] const RunConfig& config, const SynthSpec& spec,
                     const std::string& out_path) {
    spec.validate();
    const std::vector<double> series = generate(spec);

    std::string csv = "value\n";
    for (double v : series) csv += format_double(v) + "\n";
    const fs::path out(out_path);
    write_text_file(out, csv);

    ordered_json sidecar;
    sidecar["kind"] = synth_kind_name(spec.kind);
    sidecar["target_H"] = spec.target_h;
    sidecar["length"] = spec.length;
    sidecar["seed"] = spec.seed;
    sidecar["mix_weight"] = spec.mix_weight;
    fs::path sidecar_path = out;
    sidecar_path.replace_extension(".json");
    if (sidecar_path == out) sidecar_path += ".json";
    write_text_file(sidecar_path, sidecar.dump(2) + "\n");
    return kExitOk;
}

}  // namespace hurst::cli
