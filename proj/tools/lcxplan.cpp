// lcxplan: coverage planning for leaky coaxial cable installations along
// roads. Subcommands: simulate, calibrate, compare, sweep.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcxplan/io.hpp"

namespace {

using namespace lcxplan;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

struct ScenarioConfig {
    std::string cable_file;
    std::string layout_file;
    std::string env_file;
    std::vector<double> frequencies_ghz;
    std::vector<std::string> engines{"spl"};
    std::string quantile = "lc50";
    double tx_power_dbm = 18.0;
    double loss_exponent = 2.0;
    double connector_loss_db = 0.0;
    double rx_gain_dbd = 0.0;
    std::optional<double> interval_m;
    double velocity_factor = 0.88;
    double lateral_clamp_m = default_lateral_clamp_m;
    bool barrier_reflection = false;
    bool tolerance_band = false;
    unsigned workers = 1;
    double window_floor_dbm = -120.0;
    double window_ceil_dbm = -20.0;
    std::string output_dir;
};

void add_sim_options(CLI::App* cmd, ScenarioConfig& opt, bool with_frequency) {
    cmd->add_option("--cable", opt.cable_file, "Cable spec file")->required();
    cmd->add_option("--layout", opt.layout_file, "Cable layout file")->required();
    cmd->add_option("--env", opt.env_file, "Environment file")->required();
    if (with_frequency) {
        cmd->add_option("--frequency", opt.frequencies_ghz, "Frequency in GHz (repeatable)")
            ->required();
    }
    cmd->add_option("--engine", opt.engines,
                    "Engine: spl, dominant_path or coherent (repeatable)");
    cmd->add_option("--quantile", opt.quantile, "Coupling-loss quantile: lc50 or lc95");
    cmd->add_option("--tx-power", opt.tx_power_dbm, "Transmit power in dBm");
    cmd->add_option("--loss-exponent", opt.loss_exponent, "Lateral loss exponent p");
    cmd->add_option("--connector-loss", opt.connector_loss_db, "Connector losses in dB");
    cmd->add_option("--rx-gain-dbd", opt.rx_gain_dbd, "Receiver gain in dBd");
    cmd->add_option("--interval", opt.interval_m, "Radiator discretization interval in m");
    cmd->add_option("--velocity-factor", opt.velocity_factor,
                    "Cable velocity factor for guided-wave phase");
    cmd->add_option("--lateral-clamp", opt.lateral_clamp_m, "Lateral distance clamp in m");
    cmd->add_flag("--barrier-reflection", opt.barrier_reflection,
                  "Add one specular barrier bounce (dominant_path engine)");
    cmd->add_flag("--tolerance-band", opt.tolerance_band,
                  "Also emit L_C -/+ datasheet-tolerance grids");
    cmd->add_option("--workers", opt.workers, "Parallel workers")
        ->envname("LCXPLAN_WORKERS");
    cmd->add_option("--window-floor", opt.window_floor_dbm, "Heatmap window floor in dBm");
    cmd->add_option("--window-ceil", opt.window_ceil_dbm, "Heatmap window ceiling in dBm");
    cmd->add_option("--output", opt.output_dir, "Output directory")->required();
}

Engine parse_engine_name(const std::string& s) {
    if (s == "spl")
        return Engine::spl;
    if (s == "dominant_path" || s == "dpm")
        return Engine::dominant_path;
    if (s == "coherent")
        return Engine::coherent;
    throw ConfigError("unknown engine '" + s + "' (expected spl, dominant_path or coherent)");
}

Quantile parse_quantile_name(const std::string& s) {
    if (s == "lc50")
        return Quantile::lc50;
    if (s == "lc95")
        return Quantile::lc95;
    throw ConfigError("unknown quantile '" + s + "' (expected lc50 or lc95)");
}

LinkBudgetParams link_params(const ScenarioConfig& opt) {
    LinkBudgetParams params;
    params.transmit_power = PowerDbm(opt.tx_power_dbm);
    params.loss_exponent = opt.loss_exponent;
    params.connector_loss = LossDb(opt.connector_loss_db);
    params.receiver_gain_dbd = opt.rx_gain_dbd;
    params.validate();
    return params;
}

EngineConfig engine_config(const ScenarioConfig& opt, Engine engine) {
    EngineConfig cfg;
    cfg.engine = engine;
    cfg.quantile = parse_quantile_name(opt.quantile);
    cfg.discretization_interval_m = opt.interval_m;
    cfg.include_barrier_reflection = opt.barrier_reflection;
    cfg.worker_count = opt.workers;
    cfg.velocity_factor = opt.velocity_factor;
    cfg.lateral_clamp_m = opt.lateral_clamp_m;
    cfg.tolerance_band = opt.tolerance_band;
    cfg.validate();
    return cfg;
}

// Arguments as given, minus --output and --workers: neither changes the
// computed results, so re-running the remainder with a fresh --output
// reproduces the run byte for byte.
std::vector<std::string> manifest_args(const std::vector<std::string>& argv_tail) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < argv_tail.size(); ++i) {
        if (argv_tail[i] == "--output" || argv_tail[i] == "--workers") {
            ++i;
            continue;
        }
        if (argv_tail[i].rfind("--output=", 0) == 0 ||
            argv_tail[i].rfind("--workers=", 0) == 0)
            continue;
        out.push_back(argv_tail[i]);
    }
    return out;
}

void check_scenario_geometry(const CableLayout& layout, const Environment& env,
                             const std::string& layout_file, const std::string& env_file) {
    const GridSpec grid = GridSpec::from_environment(env);
    const Point center{grid.origin.x + 0.5 * grid.width_m, grid.origin.y + 0.5 * grid.height_m};
    const double dist = point_polyline_distance(center, layout.path);
    const double diag = std::hypot(grid.width_m, grid.height_m);
    if (dist > 2.0 * diag) {
        throw ConfigError("cable layout '" + layout_file +
                          "' lies far outside the receiver grid of '" + env_file +
                          "' (check coordinate units)");
    }
}

std::string map_base_name(double frequency_hz, Engine engine, Quantile quantile) {
    return "map_" + fmt("%.9g", frequency_hz * 1e-9) + "GHz_" + to_string(engine) + "_" +
           to_string(quantile);
}

void print_warnings(const Warnings& warnings) {
    for (const std::string& w : warnings)
        std::cerr << "warning: " << w << "\n";
}

int run_simulation(const ScenarioConfig& opt, const std::vector<double>& frequencies_ghz,
                   const std::string& command, const std::vector<std::string>& argv_tail,
                   bool write_sweep_summary) {
    const CableSpec spec = parse_cable_spec(opt.cable_file);
    const CableLayout layout = parse_layout(opt.layout_file);
    const Environment env = parse_environment(opt.env_file);
    check_scenario_geometry(layout, env, opt.layout_file, opt.env_file);
    const LinkBudgetParams params = link_params(opt);

    if (frequencies_ghz.empty())
        throw ConfigError("frequency list is empty");

    // Compute every map before writing anything.
    Warnings warnings;
    struct Job {
        std::string base;
        CoverageMap map;
    };
    std::vector<Job> jobs;
    for (const std::string& engine_name : opt.engines) {
        const Engine engine = parse_engine_name(engine_name);
        const EngineConfig cfg = engine_config(opt, engine);
        for (double ghz : frequencies_ghz) {
            const Frequency f = Frequency::from_ghz(ghz);
            CoverageMap map = simulate(layout, spec, env, f, params, cfg, &warnings);
            jobs.push_back({map_base_name(map.frequency_hz, engine, cfg.quantile),
                            std::move(map)});
        }
    }
    print_warnings(warnings);

    std::filesystem::create_directories(opt.output_dir);
    const HeatmapWindow window{opt.window_floor_dbm, opt.window_ceil_dbm};

    RunManifest manifest;
    manifest.command = command;
    manifest.args = manifest_args(argv_tail);
    manifest.inputs = {{"cable", opt.cable_file},
                       {"layout", opt.layout_file},
                       {"environment", opt.env_file}};

    std::string summary = "lcx-sweep-summary v1\n";
    for (const Job& job : jobs) {
        const auto paths = emit_coverage(job.map, opt.output_dir, job.base, window);
        for (const auto& p : paths)
            manifest.outputs.push_back(p.filename().string());
        const auto [mn, mx] =
            std::minmax_element(job.map.cells_dbm.begin(), job.map.cells_dbm.end());
        std::cout << job.base << ": min " << format_dbm(*mn) << " dBm, max " << format_dbm(*mx)
                  << " dBm\n";
        summary += "map " + fmt("%.9g", job.map.frequency_hz * 1e-9) + " " + format_dbm(*mn) +
                   " " + format_dbm(*mx) + " " + job.base + ".grid\n";
    }

    if (write_sweep_summary) {
        write_text_file(std::filesystem::path(opt.output_dir) / "sweep_summary.txt", summary);
        manifest.outputs.push_back("sweep_summary.txt");
    }
    write_text_file(std::filesystem::path(opt.output_dir) / "manifest.txt",
                    serialize_run_manifest(manifest));
    return 0;
}

struct CalibrateOptions {
    std::string cable_file;
    std::string layout_file;
    std::string measurements_file;
    std::string output_dir;
};

int run_calibrate(const CalibrateOptions& opt, const std::vector<std::string>& argv_tail) {
    const CableSpec spec = parse_cable_spec(opt.cable_file);
    const CableLayout layout = parse_layout(opt.layout_file);
    const MeasurementSet set = parse_measurements(opt.measurements_file, layout);

    const CalibrationResult result = estimate_coupling_loss(set, spec);
    const CableSpec calibrated = apply_calibration(spec, result);

    std::filesystem::create_directories(opt.output_dir);
    const std::filesystem::path out_spec =
        std::filesystem::path(opt.output_dir) / "calibrated.cable";
    write_text_file(out_spec, serialize_cable_spec(calibrated));

    RunManifest manifest;
    manifest.command = "calibrate";
    manifest.args = manifest_args(argv_tail);
    manifest.inputs = {{"cable", opt.cable_file},
                       {"layout", opt.layout_file},
                       {"measurements", opt.measurements_file}};
    manifest.outputs = {"calibrated.cable"};
    write_text_file(std::filesystem::path(opt.output_dir) / "manifest.txt",
                    serialize_run_manifest(manifest));

    for (const CalibrationRow& row : result.rows) {
        std::cout << "f=" << fmt("%.9g", row.frequency_hz * 1e-9) << " GHz: lc50 "
                  << fmt("%.4f", row.lc50_est.value) << " dB, lc95 "
                  << fmt("%.4f", row.lc95_est.value) << " dB (" << row.sample_count
                  << " samples)" << (row.short_cable ? " [short cable]" : "") << "\n";
    }
    for (const std::string& w : result.warnings)
        std::cout << "warning: " << w << "\n";
    std::cout << "wrote " << out_spec.string() << "\n";
    return 0;
}

struct CompareOptions {
    std::string layout_file;
    std::string measurements_file;
    std::vector<std::string> map_files;
    std::optional<double> sensitivity_dbm;
    std::string output_dir;
};

int run_compare(const CompareOptions& opt, const std::vector<std::string>& argv_tail) {
    const CableLayout layout = parse_layout(opt.layout_file);
    const MeasurementSet set = parse_measurements(opt.measurements_file, layout);

    std::vector<CoverageMap> maps;
    maps.reserve(opt.map_files.size());
    for (const std::string& f : opt.map_files)
        maps.push_back(parse_coverage_grid(f));

    const bool single_frequency =
        !set.records.empty() &&
        std::all_of(set.records.begin(), set.records.end(), [&](const MeasurementRecord& r) {
            return std::abs(r.frequency.hertz() - set.records.front().frequency.hertz()) <=
                   1e-9 * set.records.front().frequency.hertz();
        });
    if (opt.sensitivity_dbm && !single_frequency)
        throw ConfigError("--sensitivity requires a single-frequency measurement set");
    if (maps.empty() && !single_frequency)
        throw ConfigError("nothing to compare: provide --map files or a single-frequency set");

    std::optional<ErrorTable> table;
    if (!maps.empty()) {
        table = error_table(set, maps);
        print_warnings(table->warnings);
    }
    std::optional<RssiTable> rssi;
    if (single_frequency)
        rssi = rssi_table(set, PowerDbm(opt.sensitivity_dbm.value_or(-300.0)));

    std::filesystem::create_directories(opt.output_dir);
    RunManifest manifest;
    manifest.command = "compare";
    manifest.args = manifest_args(argv_tail);
    manifest.inputs = {{"layout", opt.layout_file}, {"measurements", opt.measurements_file}};
    for (const std::string& f : opt.map_files)
        manifest.inputs.emplace_back("map", f);

    if (table) {
        write_text_file(std::filesystem::path(opt.output_dir) / "error_table.txt",
                        serialize_error_table(*table));
        manifest.outputs.push_back("error_table.txt");
        std::cout << serialize_error_table(*table);
    }
    if (rssi) {
        const std::string text = serialize_rssi_table(*rssi, opt.sensitivity_dbm.has_value());
        write_text_file(std::filesystem::path(opt.output_dir) / "rssi_table.txt", text);
        manifest.outputs.push_back("rssi_table.txt");
        std::cout << text;
    }
    write_text_file(std::filesystem::path(opt.output_dir) / "manifest.txt",
                    serialize_run_manifest(manifest));

    if (opt.sensitivity_dbm && !rssi->verdict) {
        std::cerr << "coverage verdict failed: a mean level undercuts "
                  << format_dbm(*opt.sensitivity_dbm) << " dBm\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage planning for leaky coaxial cable (LCX) road installations"};
    app.require_subcommand(1);

    ScenarioConfig sim_opt;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Compute coverage maps for explicit frequencies");
    add_sim_options(sim, sim_opt, true);

    ScenarioConfig sweep_opt;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Compute coverage maps over the preset service frequencies");
    add_sim_options(sweep, sweep_opt, false);

    CalibrateOptions cal_opt;
    CLI::App* cal = app.add_subcommand(
        "calibrate", "Recover coupling loss from measurements and write a calibrated cable spec");
    cal->add_option("--cable", cal_opt.cable_file, "Cable spec file")->required();
    cal->add_option("--layout", cal_opt.layout_file, "Cable layout file")->required();
    cal->add_option("--measurements", cal_opt.measurements_file, "Measurement set file")
        ->required();
    cal->add_option("--output", cal_opt.output_dir, "Output directory")->required();

    CompareOptions cmp_opt;
    CLI::App* cmp = app.add_subcommand(
        "compare", "Compare measurements against coverage maps and check receiver sensitivity");
    cmp->add_option("--layout", cmp_opt.layout_file, "Cable layout file")->required();
    cmp->add_option("--measurements", cmp_opt.measurements_file, "Measurement set file")
        ->required();
    cmp->add_option("--map", cmp_opt.map_files, "Coverage grid file (repeatable)");
    cmp->add_option("--sensitivity", cmp_opt.sensitivity_dbm,
                    "Receiver sensitivity in dBm for the coverage verdict");
    cmp->add_option("--output", cmp_opt.output_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    std::vector<std::string> argv_tail;
    for (int i = 2; i < argc; ++i)
        argv_tail.emplace_back(argv[i]);

    try {
        if (sim->parsed())
            return run_simulation(sim_opt, sim_opt.frequencies_ghz, "simulate", argv_tail, false);
        if (sweep->parsed())
            return run_simulation(sweep_opt, preset_frequencies_ghz(), "sweep", argv_tail, true);
        if (cal->parsed())
            return run_calibrate(cal_opt, argv_tail);
        if (cmp->parsed())
            return run_compare(cmp_opt, argv_tail);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
