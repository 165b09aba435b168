#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nsd/runner.hpp"

namespace nsd {

// Bad command-line or configuration input; the CLI maps it to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The benchmark problem: 4 actions, 3 signals, theta = (0.8, 0.4, 0.2),
// expected rewards (0.70, 0.42, 0.28, 0.34).
NsdInstance benchmark_instance(int horizon, DelayModel delay);

// Actions 1 and 2 of the benchmark only; action 1 is optimal with gap 0.28.
NsdInstance benchmark_two_action_instance(int horizon, DelayModel delay);

// Named experiment bundles. Every preset uses T = 8000, 50 replications and
// delta = 0.05; switching presets change at rounds {2000, 4000, 6000}.
//   fig2       window sweep W in {400, 800, 2000} vs the restart oracle, D = 0
//   fig3-d100, fig3-d500, fig3-d1000
//              every policy at W = 800 under the named delay (log-scale plot)
//   fig4, fig5 stationary mixture ablation at alpha = 0.1 / 0.3, one panel
//              with mu = (0.9, 0.1) (best arm preserved) and one with
//              mu = (0.1, 0.9) (best arm flipped)
//   fig6       switching mixture ablation, D = 500, alpha in {0.1, 0.3, 0.5}
//   figA       the fig3 runs with linear-scale plots
ExperimentConfig preset(const std::string& name);

std::vector<std::string> preset_names();

// Experiment JSON: {"instance": {...}} or
// {"generator": {"base": {...}, "changes": [...], "shifts": [...]?}},
// plus "policies": [{"name": ..., "label"?, "W"?, "delta"?}], "reps"?, "delta"?.
ExperimentConfig config_from_json_file(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text, const std::string& source_name);

}  // namespace nsd
