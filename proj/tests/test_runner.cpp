#include <cmath>

#include "doctest.h"
#include "nsd/presets.hpp"
#include "nsd/runner.hpp"

using namespace nsd;

namespace {

// Test-only policies: one that always plays the current optimum, one pinned
// to a fixed action.
class ClairvoyantPolicy : public Policy {
public:
    explicit ClairvoyantPolicy(const NsdInstance& inst) : Policy("clairvoyant"), inst_(&inst) {}

private:
    int choose(int round) override { return optimal_value(*inst_, round).second; }
    void ingest(const RoundFeedback&, int) override {}
    const NsdInstance* inst_;
};

class FixedPolicy : public Policy {
public:
    explicit FixedPolicy(int action) : Policy("fixed"), action_(action) {}

private:
    int choose(int) override { return action_; }
    void ingest(const RoundFeedback&, int) override {}
    int action_;
};

ExperimentUnit small_unit(std::vector<PolicySpec> policies, int horizon = 400,
                          int delay = 0) {
    ExperimentUnit unit;
    unit.label = "test";
    unit.base = benchmark_instance(horizon, DelayModel::constant(delay));
    unit.policies = std::move(policies);
    return unit;
}

}  // namespace

TEST_CASE("a clairvoyant policy accrues zero regret") {
    NsdInstance inst = benchmark_instance(500, DelayModel::constant(10));
    ClairvoyantPolicy policy(inst);
    PolicyRunResult run = run_one(inst, policy, 5);
    CHECK(run.trace.final_cumulative() == 0.0);
    for (double r : run.trace.per_round) CHECK(r == 0.0);
}

TEST_CASE("a fixed suboptimal action accrues its gap every round") {
    const int horizon = 1000;
    NsdInstance inst = benchmark_instance(horizon, DelayModel::constant(0));
    FixedPolicy policy(1);  // expected reward 0.42, gap 0.28
    PolicyRunResult run = run_one(inst, policy, 5);
    CHECK(run.trace.final_cumulative() ==
          doctest::Approx(0.28 * horizon).epsilon(1e-9));
}

TEST_CASE("per-round regret is non-negative and cumulative non-decreasing") {
    NsdInstance inst = benchmark_instance(600, DelayModel::constant(50));
    PolicySpec spec;
    spec.name = "nsd-psrl";
    spec.window = 300;
    auto policy = make_policy(spec, inst, 0.05, 11);
    PolicyRunResult run = run_one(inst, *policy, 13);
    double prev = 0.0;
    for (std::size_t t = 0; t < run.trace.cumulative.size(); ++t) {
        CHECK(run.trace.per_round[t] >= 0.0);
        CHECK(run.trace.cumulative[t] >= prev);
        prev = run.trace.cumulative[t];
    }
}

TEST_CASE("identical seeds give identical traces") {
    NsdInstance inst = benchmark_instance(500, DelayModel::constant(20));
    PolicySpec spec;
    spec.name = "nsd-psrl";
    spec.window = 250;
    auto p1 = make_policy(spec, inst, 0.05, 77);
    auto p2 = make_policy(spec, inst, 0.05, 77);
    PolicyRunResult r1 = run_one(inst, *p1, 31);
    PolicyRunResult r2 = run_one(inst, *p2, 31);
    CHECK(r1.trace.cumulative == r2.trace.cumulative);
    for (std::size_t i = 0; i < r1.trajectory.size(); ++i) {
        CHECK(r1.trajectory[i].action == r2.trajectory[i].action);
    }
}

TEST_CASE("run_unit aggregates: single replication has zero-width bands") {
    ExperimentConfig cfg;
    cfg.replications = 1;
    cfg.master_seed = 9;
    ExperimentUnit unit = small_unit({PolicySpec{"ucb", "", std::nullopt, std::nullopt, std::nullopt}});
    cfg.units.push_back(unit);
    UnitResult result = run_unit(unit, cfg);
    for (double w : result.policies[0].ci_half) CHECK(w == 0.0);
}

TEST_CASE("clone policies share the environment stream and coincide") {
    ExperimentConfig cfg;
    cfg.replications = 4;
    cfg.master_seed = 2;
    std::vector<PolicySpec> policies = {
        PolicySpec{"nsd-psrl", "first", 200, std::nullopt, std::nullopt},
        PolicySpec{"nsd-psrl", "first", 200, std::nullopt, std::nullopt},  // exact clone
        PolicySpec{"ucb", "u1", std::nullopt, std::nullopt, std::nullopt},
        PolicySpec{"ucb", "u2", std::nullopt, std::nullopt, std::nullopt},
    };
    ExperimentUnit unit = small_unit(policies, 300, 10);
    unit.change_rounds = {150};
    UnitResult result = run_unit(unit, cfg);
    CHECK(result.policies[0].mean == result.policies[1].mean);
    // deterministic policies coincide whatever their label
    CHECK(result.policies[2].mean == result.policies[3].mean);
}

TEST_CASE("aggregate mean at the horizon equals the mean of finals") {
    ExperimentConfig cfg;
    cfg.replications = 6;
    cfg.master_seed = 5;
    ExperimentUnit unit =
        small_unit({PolicySpec{"sw-ucb", "", 100, std::nullopt, std::nullopt}}, 300, 30);
    unit.change_rounds = {150};
    UnitResult result = run_unit(unit, cfg);
    const PolicyAggregate& agg = result.policies[0];
    double mean_of_finals = 0.0;
    for (const auto& row : agg.cumulative) mean_of_finals += row.back();
    mean_of_finals /= cfg.replications;
    CHECK(std::abs(agg.final_mean() - mean_of_finals) <= 1e-9);
}

TEST_CASE("threaded and sequential runs agree exactly") {
    std::vector<PolicySpec> policies = {
        PolicySpec{"nsd-ucrl2", "", 150, std::nullopt, std::nullopt},
        PolicySpec{"nsd-psrl", "", 150, std::nullopt, std::nullopt},
    };
    ExperimentUnit unit = small_unit(policies, 300, 25);
    unit.change_rounds = {150};

    ExperimentConfig sequential;
    sequential.replications = 6;
    sequential.master_seed = 12;
    sequential.threads = 1;
    ExperimentConfig threaded = sequential;
    threaded.threads = 4;

    UnitResult a = run_unit(unit, sequential);
    UnitResult b = run_unit(unit, threaded);
    for (std::size_t p = 0; p < a.policies.size(); ++p) {
        CHECK(a.policies[p].mean == b.policies[p].mean);
        CHECK(a.policies[p].ci_half == b.policies[p].ci_half);
    }
}

TEST_CASE("regret traces match a post-hoc recomputation from the trajectory") {
    ExperimentUnit unit = small_unit({PolicySpec{"nsd-ucrl2", "", 100, std::nullopt, std::nullopt}}, 400, 40);
    unit.change_rounds = {200};
    ExperimentConfig cfg;
    cfg.replications = 2;
    cfg.master_seed = 3;

    for (int rep = 0; rep < cfg.replications; ++rep) {
        NsdInstance realized = realize_instance(unit, cfg.master_seed, rep);
        auto policy = make_policy(unit.policies[0], realized, cfg.delta,
                                  policy_seed(cfg.master_seed, rep, unit.policies[0]));
        PolicyRunResult run = run_one(realized, *policy, environment_seed(cfg.master_seed, rep));
        double cumulative = 0.0;
        for (const TrajectoryRound& r : run.trajectory) {
            double recomputed =
                optimal_value(realized, r.round).first - expected_reward(realized, r.round, r.action);
            CHECK(recomputed == r.per_round_regret);
            cumulative += recomputed;
        }
        CHECK(cumulative == doctest::Approx(run.trace.final_cumulative()).epsilon(1e-12));
    }
}

TEST_CASE("pinned shifts make the realized instance reproducible by hand") {
    ExperimentUnit unit = small_unit({PolicySpec{"ucb", "", std::nullopt, std::nullopt, std::nullopt}}, 400);
    unit.change_rounds = {100, 200};
    unit.pinned_shifts = std::vector<int>{1, 3};
    NsdInstance realized = realize_instance(unit, 0, 0);
    REQUIRE(realized.segments.size() == 3);
    // 1 + 3 = 4 = K: the composition is the identity again
    CHECK(realized.segments[2].transition == unit.base.segments[0].transition);
    // identical for every replication when pinned
    NsdInstance other = realize_instance(unit, 123, 7);
    CHECK(other.segments[1].transition == realized.segments[1].transition);
}

TEST_CASE("policy comparisons share replication change points") {
    ExperimentUnit unit = small_unit({}, 500);
    unit.change_rounds = {200, 350};
    NsdInstance a = realize_instance(unit, 42, 3);
    NsdInstance b = realize_instance(unit, 42, 3);
    CHECK(a.segments[1].transition == b.segments[1].transition);
    NsdInstance c = realize_instance(unit, 42, 4);
    // different replication, same change rounds, independent shift draws
    CHECK(c.segments[1].start_round == a.segments[1].start_round);
}

TEST_CASE("random delays deliver out of order and policies key on origins") {
    // geometric delays: several rewards can land in one round and origins can
    // arrive out of order; the UCB family credits them by origin round
    NsdInstance inst = benchmark_instance(600, DelayModel::geometric(0.05));
    for (const char* name : {"ucb", "sw-ucb", "nsd-ucrl2", "nsd-psrl"}) {
        PolicySpec spec;
        spec.name = name;
        spec.window = 200;
        auto policy = make_policy(spec, inst, 0.05, 5);
        PolicyRunResult run = run_one(inst, *policy, 23);
        CHECK(run.trace.cumulative.size() == 600);
        CHECK(run.trace.final_cumulative() >= 0.0);
    }
}

TEST_CASE("policy ordering is stable across master seeds") {
    // reduced-scale benchmark comparison: the qualitative ordering
    // oracle-nsd-nd < oracle-nsd < nsd-ucrl2 < ucb must hold for most seeds
    std::vector<PolicySpec> policies = {
        PolicySpec{"oracle-nsd-nd", "", std::nullopt, std::nullopt, std::nullopt},
        PolicySpec{"oracle-nsd", "", std::nullopt, std::nullopt, std::nullopt},
        PolicySpec{"nsd-ucrl2", "", 800, std::nullopt, std::nullopt},
        PolicySpec{"ucb", "", std::nullopt, std::nullopt, std::nullopt},
    };
    ExperimentUnit unit = small_unit(policies, 8000, 500);
    unit.change_rounds = {2000, 4000, 6000};

    int ordered = 0;
    const int seeds = 5;
    for (int seed = 0; seed < seeds; ++seed) {
        ExperimentConfig cfg;
        cfg.replications = 10;
        cfg.master_seed = static_cast<std::uint64_t>(seed);
        cfg.threads = 2;
        UnitResult result = run_unit(unit, cfg);
        double nd = result.policy("oracle-nsd-nd").final_mean();
        double oracle = result.policy("oracle-nsd").final_mean();
        double nsd = result.policy("nsd-ucrl2").final_mean();
        double ucb = result.policy("ucb").final_mean();
        if (nd < oracle && oracle < nsd && nsd < ucb) ++ordered;
    }
    CHECK(ordered >= 3);
}
