#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nsd/presets.hpp"
#include "nsd/report.hpp"
#include "nsd/runner.hpp"

namespace fs = std::filesystem;

namespace {

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("NSD_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::string unit_suffix(const nsd::ExperimentConfig& cfg, const std::string& label) {
    return cfg.units.size() > 1 ? "-" + label : "";
}

int run(const std::string& preset_name, const std::string& config_path, const std::string& out_dir,
        std::uint64_t seed, int reps_override, int threads, double delta_override, bool plot,
        bool dump_trajectories, bool log_y_flag) {
    nsd::ExperimentConfig cfg =
        preset_name.empty() ? nsd::config_from_json_file(config_path) : nsd::preset(preset_name);
    cfg.master_seed = seed;
    if (reps_override > 0) cfg.replications = reps_override;
    if (delta_override > 0) cfg.delta = delta_override;
    cfg.threads = threads;
    if (log_y_flag) cfg.log_scale_plot = true;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << out_dir << ": " << ec.message()
                  << '\n';
        return 1;
    }

    std::string header = nsd::format_run_header(cfg);
    std::cout << header;
    nsd::write_text_file((fs::path(out_dir) / "run-header.txt").string(), header);

    nsd::TrajectorySink sink;
    if (dump_trajectories) {
        sink.on_instance = [&](const nsd::ExperimentUnit& unit, int rep,
                               const nsd::NsdInstance& inst) {
            fs::path path = fs::path(out_dir) / ("instance" + unit_suffix(cfg, unit.label) +
                                                 "-rep" + std::to_string(rep) + ".json");
            nsd::write_text_file(path.string(), nsd::instance_to_json_text(inst));
        };
        sink.on_run = [&](const nsd::ExperimentUnit& unit, int rep, const std::string& label,
                          const nsd::PolicyRunResult& run) {
            fs::path path = fs::path(out_dir) / ("traj" + unit_suffix(cfg, unit.label) + "-" +
                                                 label + "-rep" + std::to_string(rep) + ".csv");
            nsd::write_trajectory_csv(path.string(), run.trajectory);
        };
    }

    std::vector<nsd::UnitResult> results =
        nsd::run_experiment(cfg, dump_trajectories ? &sink : nullptr);

    for (const nsd::UnitResult& result : results) {
        std::string suffix = unit_suffix(cfg, result.label);
        nsd::write_results_csv((fs::path(out_dir) / ("results" + suffix + ".csv")).string(),
                               result);
        if (plot) {
            nsd::PlotOptions options;
            options.log_y = cfg.log_scale_plot;
            options.title = cfg.source_name + (suffix.empty() ? "" : " " + result.label);
            nsd::write_svg_plot((fs::path(out_dir) / ("plot" + suffix + ".svg")).string(), result,
                                options);
        }
    }

    std::cout << nsd::format_summary_table(results);
    std::cout << "results written to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo benchmark for bandits with delayed rewards, switching signal "
                 "distributions and immediate intermediate observations"};

    std::string preset_name, config_path, out_dir = "out";
    std::uint64_t seed = 0;
    int reps_override = 0;
    int threads_flag = 0;
    double delta_override = 0.0;
    bool plot = false, dump_trajectories = false, log_y = false;

    auto* preset_opt = app.add_option("--preset", preset_name,
                                      "named experiment (see --list-presets)");
    auto* config_opt = app.add_option("--config", config_path, "experiment JSON file");
    preset_opt->excludes(config_opt);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "master seed (default 0)");
    app.add_option("--reps", reps_override, "override replication count");
    app.add_option("--threads", threads_flag, "worker threads (or NSD_THREADS)");
    app.add_option("--delta", delta_override, "override error probability delta");
    app.add_flag("--plot", plot, "emit SVG plots");
    app.add_flag("--dump-trajectories", dump_trajectories, "dump per-replication trajectories");
    app.add_flag("--log-y", log_y, "log-scale y axis in plots");
    bool list_presets = false;
    app.add_flag("--list-presets", list_presets, "list preset names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (list_presets) {
        for (const std::string& name : nsd::preset_names()) std::cout << name << '\n';
        return 0;
    }
    if (preset_name.empty() && config_path.empty()) {
        std::cerr << "error: one of --preset or --config is required\n";
        return 2;
    }

    try {
        return run(preset_name, config_path, out_dir, seed, reps_override,
                   resolve_threads(threads_flag), delta_override, plot, dump_trajectories, log_y);
    } catch (const nsd::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
