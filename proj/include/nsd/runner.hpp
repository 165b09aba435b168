#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsd/core.hpp"
#include "nsd/environment.hpp"
#include "nsd/policies.hpp"

namespace nsd {

struct PolicyRunResult {
    RegretTrace trace;
    std::vector<TrajectoryRound> trajectory;
};

// One policy against one environment realization. The environment draws from
// `env_seed`; the policy's own randomness (if any) was seeded at
// construction, so the two consume disjoint streams. Segment resets fire at
// every change round for policies that want them; zero-delay policies play
// the same instance with the delay forced to 0.
PolicyRunResult run_one(const NsdInstance& instance, Policy& policy, std::uint64_t env_seed);

// One experiment panel: a base instance, optional change rounds (random shift
// draws per replication unless pinned), and the policies to compare.
struct ExperimentUnit {
    std::string label;
    NsdInstance base;
    std::vector<int> change_rounds;
    std::optional<std::vector<int>> pinned_shifts;
    std::vector<PolicySpec> policies;
};

struct ExperimentConfig {
    std::vector<ExperimentUnit> units;
    int replications = 50;
    double delta = 0.05;
    std::uint64_t master_seed = 0;
    int threads = 1;
    bool log_scale_plot = false;
    std::string source_name;
};

struct PolicyAggregate {
    std::string label;
    std::vector<std::vector<double>> cumulative;  // replications x horizon
    std::vector<double> mean;
    std::vector<double> ci_half;  // 1.96 * sd / sqrt(R)

    double final_mean() const { return mean.empty() ? 0.0 : mean.back(); }
    double final_ci_half() const { return ci_half.empty() ? 0.0 : ci_half.back(); }
};

struct UnitResult {
    std::string label;
    int horizon = 0;
    std::vector<PolicyAggregate> policies;

    const PolicyAggregate& policy(const std::string& label) const;
};

// The instance replication `rep` plays: the base with the replication's shift
// schedule applied. All policies within a replication share this realization
// and the environment seed (common random numbers).
NsdInstance realize_instance(const ExperimentUnit& unit, std::uint64_t master_seed, int rep);

std::uint64_t environment_seed(std::uint64_t master_seed, int rep);
std::uint64_t policy_seed(std::uint64_t master_seed, int rep, const PolicySpec& spec);

// Optional per-run observers, e.g. trajectory dumps. With multiple threads
// they are invoked concurrently from the workers.
struct TrajectorySink {
    std::function<void(const ExperimentUnit&, int rep, const NsdInstance&)> on_instance;
    std::function<void(const ExperimentUnit&, int rep, const std::string& label,
                       const PolicyRunResult&)>
        on_run;
};

UnitResult run_unit(const ExperimentUnit& unit, const ExperimentConfig& cfg,
                    const TrajectorySink* sink = nullptr);

std::vector<UnitResult> run_experiment(const ExperimentConfig& cfg,
                                       const TrajectorySink* sink = nullptr);

}  // namespace nsd
