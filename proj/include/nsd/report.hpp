#pragma once

#include <string>
#include <vector>

#include "nsd/runner.hpp"

namespace nsd {

// Formats a double with snprintf; deterministic across runs.
std::string format_double(double value, const char* spec = "%.10g");

// results CSV: policy,round,mean_cum_regret,ci_low,ci_high with exactly T
// rows per policy. Throws std::runtime_error with the path on I/O failure.
void write_results_csv(const std::string& path, const UnitResult& result);

// Per-round trajectory dump: round,action,signal,reward_origin,reward_value,
// regret. Rounds delivering several rewards join the origin/value fields with
// ';'; rounds delivering none leave them empty. regret is the per-round
// instantaneous regret, printed with full precision.
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRound>& rounds);

struct PlotOptions {
    bool log_y = false;
    std::string title;
};

// Static plot of the mean regret curves with shaded confidence bands.
void write_svg_plot(const std::string& path, const UnitResult& result, const PlotOptions& options);

// Human-readable description of the run: seed, replication count, delta and
// every per-unit constant, so each output directory is self-describing.
std::string format_run_header(const ExperimentConfig& cfg);

// Final mean regret (with confidence half-width) per policy and unit.
std::string format_summary_table(const std::vector<UnitResult>& results);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nsd
