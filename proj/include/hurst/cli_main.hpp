#pragma once

// Flag and subcommand wiring for the `hurst` binary. Precedence is
// defaults < config file < flags; the config file is located by a
// pre-scan of argv so flags parsed afterwards overwrite file values.

#include <CLI11.hpp>

#include "hurst/cli.hpp"

namespace hurst::cli {

inline void add_common_options(CLI::App* cmd, RunConfig& config) {
    // The file itself is loaded by a pre-scan; this registration only makes
    // the flag legal after the subcommand name.
    static std::string config_path_sink;
    cmd->add_option("--config", config_path_sink, "Flat key=value config file");
    cmd->add_option("-i,--input", config.inputs, "Input file, directory, or glob (repeatable)");
    cmd->add_option("--schema", config.schema, "Column order descriptor");
    cmd->add_option("-o,--out-dir", config.out_dir, "Output directory");
    cmd->add_option("--format", config.format, "Output format: csv|json");
    cmd->add_option("--delta-t", config.delta_t, "Bucket width in seconds");
    cmd->add_option("--j1", config.j1, "First fit octave");
    cmd->add_option("--j2", config.j2, "Last fit octave");
    cmd->add_option("--max-octave", config.max_octave, "Decomposition depth");
    cmd->add_option("--buckets", config.buckets, "Size buckets, label:min-max;...;label:min+");
    cmd->add_option("--seed", config.seed, "Base seed for seeded operations");
    cmd->add_option("--jobs", config.jobs, "Worker pool width (0 = hardware)");
    cmd->add_option("--ci-mode", config.ci_mode, "Monthly CI mode: percentile|gaussian");
    cmd->add_option("--bias-mode", config.bias_mode, "Logscale ordinate treatment: raw|corrected");
    cmd->add_option("--session-start", config.session_start, "Session start, seconds past midnight");
    cmd->add_option("--session-end", config.session_end, "Session end, seconds past midnight");
    cmd->add_option("--trim-tail", config.trim_tail, "NASDAQ-style end-of-day trim, seconds");
    cmd->add_option("--excluded-conditions", config.excluded_conditions, "Comma list of excluded sale conditions");
    cmd->add_option("--nasdaq-only-conditions", config.nasdaq_only_conditions,
                    "Conditions excluded only on NASDAQ-style venues");
    cmd->add_option("--allowed-corrections", config.allowed_corrections, "Comma list of allowed correction codes");
    cmd->add_option("--nasdaq-tags", config.nasdaq_tags, "Exchange tags classified NASDAQ-style");
}

/// Entry point used by the binary; returns the process exit code.
inline int run_cli(int argc, const char* const* argv) {
    RunConfig config;

    // Pre-scan for --config so file values load before flag parsing.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) load_config_file(argv[i + 1], config);
            else if (arg.rfind("--config=", 0) == 0) load_config_file(arg.substr(9), config);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"Self-similarity (Hurst exponent) analysis of traded-value tick series"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Flat key=value config file")->expected(1);

    auto* ingest = app.add_subcommand("ingest", "Parse and filter sessions; report drop counts");
    add_common_options(ingest, config);
    ingest->add_flag("--emit-series", config.emit_series, "Write bucketed traded-value CSV per session");

    auto* analyze = app.add_subcommand("analyze", "Per-session Hurst estimates and monthly summaries");
    add_common_options(analyze, config);
    analyze->add_flag("--emit-logscale", config.emit_logscale, "Write a logscale diagram CSV per session");

    auto* buckets = app.add_subcommand("buckets", "Per-size-bucket estimates and trade proportions");
    add_common_options(buckets, config);

    auto* shuffle_check = app.add_subcommand("shuffle-check", "Paired original vs bucket-shuffled estimates");
    add_common_options(shuffle_check, config);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic series with known self-similarity");
    SynthSpec spec;
    std::string kind = "white";
    std::string out_path = "synth.csv";
    std::string synth_config_sink;
    synth->add_option("--config", synth_config_sink, "Flat key=value config file");
    synth->add_option("--kind", kind, "white|fgn|superposition");
    synth->add_option("--hurst", spec.target_h, "Target Hurst exponent of the self-similar component");
    synth->add_option("--length", spec.length, "Sample count")->required();
    synth->add_option("--seed", spec.seed, "Generator seed");
    synth->add_option("--mix-weight", spec.mix_weight, "Superposition: variance share of the fGn leg");
    synth->add_option("--out", out_path, "Output CSV path (JSON sidecar written alongside)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (synth->parsed()) {
            spec.kind = parse_synth_kind(kind);
            return cmd_synth(config, spec, out_path);
        }
        config.validate();
        if (ingest->parsed()) return cmd_ingest(config);
        if (analyze->parsed()) return cmd_analyze(config);
        if (buckets->parsed()) return cmd_buckets(config);
        if (shuffle_check->parsed()) return cmd_shuffle_check(config);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace hurst::cli
