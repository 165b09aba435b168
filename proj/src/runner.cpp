#include "nsd/runner.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace nsd {

namespace {

constexpr std::uint64_t kScheduleStream = 0xA11CE5;
constexpr std::uint64_t kEnvironmentStream = 0xB0B5;
constexpr std::uint64_t kPolicyStream = 0xCAFE5;

}  // namespace

PolicyRunResult run_one(const NsdInstance& instance, Policy& policy, std::uint64_t env_seed) {
    NsdInstance effective = instance;
    if (policy.wants_zero_delay()) effective.delay = DelayModel::constant(0);
    Environment env(std::move(effective), env_seed);
    const NsdInstance& inst = env.instance();

    std::size_t next_segment = 1;
    for (int t = 1; t <= inst.horizon; ++t) {
        if (next_segment < inst.segments.size() &&
            inst.segments[next_segment].start_round == t) {
            ++next_segment;
            if (policy.wants_segment_resets()) policy.reset_segment();
        }
        int action = policy.select_action(t);
        RoundFeedback feedback = env.step(action);
        policy.observe(feedback);
    }
    return {env.trace(), env.trajectory()};
}

NsdInstance realize_instance(const ExperimentUnit& unit, std::uint64_t master_seed, int rep) {
    if (unit.change_rounds.empty()) return unit.base;
    SwitchSchedule schedule;
    if (unit.pinned_shifts) {
        schedule.change_rounds = unit.change_rounds;
        schedule.shift_draws = *unit.pinned_shifts;
        schedule.validate(unit.base.num_actions);
    } else {
        Rng rng(derive_seed(master_seed, {kScheduleStream, static_cast<std::uint64_t>(rep)}));
        schedule = SwitchSchedule::draw(unit.change_rounds, unit.base.num_actions, rng);
    }
    return generate_shifted_instance(unit.base, schedule);
}

std::uint64_t environment_seed(std::uint64_t master_seed, int rep) {
    return derive_seed(master_seed, {kEnvironmentStream, static_cast<std::uint64_t>(rep)});
}

std::uint64_t policy_seed(std::uint64_t master_seed, int rep, const PolicySpec& spec) {
    return derive_seed(master_seed,
                       {kPolicyStream, static_cast<std::uint64_t>(rep), fnv1a(spec.stream_key())});
}

const PolicyAggregate& UnitResult::policy(const std::string& label) const {
    for (const PolicyAggregate& agg : policies) {
        if (agg.label == label) return agg;
    }
    throw std::invalid_argument("no aggregate for policy '" + label + "'");
}

UnitResult run_unit(const ExperimentUnit& unit, const ExperimentConfig& cfg,
                    const TrajectorySink* sink) {
    if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
    unit.base.validate();
    // Resolve every policy up front so configuration errors surface before work starts.
    for (const PolicySpec& spec : unit.policies) {
        make_policy(spec, unit.base, cfg.delta, 0);
    }

    const int reps = cfg.replications;
    const int horizon = unit.base.horizon;
    UnitResult result;
    result.label = unit.label;
    result.horizon = horizon;
    result.policies.resize(unit.policies.size());
    for (std::size_t p = 0; p < unit.policies.size(); ++p) {
        result.policies[p].label = unit.policies[p].effective_label();
        result.policies[p].cumulative.assign(reps, std::vector<double>());
    }

    auto run_replication = [&](int rep) {
        NsdInstance realized = realize_instance(unit, cfg.master_seed, rep);
        if (sink && sink->on_instance) sink->on_instance(unit, rep, realized);
        std::uint64_t env_seed = environment_seed(cfg.master_seed, rep);
        for (std::size_t p = 0; p < unit.policies.size(); ++p) {
            const PolicySpec& spec = unit.policies[p];
            auto policy = make_policy(spec, realized, cfg.delta,
                                      policy_seed(cfg.master_seed, rep, spec));
            PolicyRunResult run = run_one(realized, *policy, env_seed);
            if (sink && sink->on_run) sink->on_run(unit, rep, result.policies[p].label, run);
            result.policies[p].cumulative[rep] = std::move(run.trace.cumulative);
        }
    };

    int workers = std::max(1, std::min(cfg.threads, reps));
    if (workers == 1) {
        for (int rep = 0; rep < reps; ++rep) run_replication(rep);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int rep = w; rep < reps; rep += workers) run_replication(rep);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    // Replication-ordered reduction keeps output independent of scheduling.
    for (PolicyAggregate& agg : result.policies) {
        agg.mean.assign(horizon, 0.0);
        agg.ci_half.assign(horizon, 0.0);
        for (int t = 0; t < horizon; ++t) {
            double sum = 0.0;
            for (int rep = 0; rep < reps; ++rep) sum += agg.cumulative[rep][t];
            agg.mean[t] = sum / reps;
        }
        if (reps > 1) {
            for (int t = 0; t < horizon; ++t) {
                double ss = 0.0;
                for (int rep = 0; rep < reps; ++rep) {
                    double d = agg.cumulative[rep][t] - agg.mean[t];
                    ss += d * d;
                }
                double sd = std::sqrt(ss / (reps - 1));
                agg.ci_half[t] = 1.96 * sd / std::sqrt(static_cast<double>(reps));
            }
        }
    }
    return result;
}

std::vector<UnitResult> run_experiment(const ExperimentConfig& cfg, const TrajectorySink* sink) {
    std::vector<UnitResult> results;
    results.reserve(cfg.units.size());
    for (const ExperimentUnit& unit : cfg.units) results.push_back(run_unit(unit, cfg, sink));
    return results;
}

}  // namespace nsd
