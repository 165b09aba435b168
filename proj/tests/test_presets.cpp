#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nsd/presets.hpp"
#include "nsd/report.hpp"
#include "nsd/runner.hpp"

using namespace nsd;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("preset registry") {
    for (const std::string& name : preset_names()) {
        ExperimentConfig cfg = preset(name);
        CHECK(cfg.replications == 50);
        CHECK(cfg.delta == doctest::Approx(0.05));
        CHECK_FALSE(cfg.units.empty());
        for (const ExperimentUnit& unit : cfg.units) {
            CHECK(unit.base.horizon == 8000);
            CHECK_FALSE(unit.policies.empty());
        }
    }
    CHECK_THROWS_AS(preset("nonexistent"), UsageError);
    try {
        preset("nonexistent");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("fig2") != std::string::npos);  // lists presets
    }
}

TEST_CASE("fig2 preset: window sweep against the restart oracle, no delay") {
    ExperimentConfig cfg = preset("fig2");
    REQUIRE(cfg.units.size() == 1);
    const ExperimentUnit& unit = cfg.units[0];
    CHECK(unit.base.delay.is_constant());
    CHECK(unit.base.delay.constant_delay() == 0);
    CHECK(unit.change_rounds == std::vector<int>{2000, 4000, 6000});
    REQUIRE(unit.policies.size() == 4);
    CHECK(unit.policies[0].name == "nsd-ucrl2");
    CHECK(*unit.policies[0].window == 400);
    CHECK(*unit.policies[1].window == 800);
    CHECK(*unit.policies[2].window == 2000);
    CHECK(unit.policies[3].name == "oracle-nsd");
}

TEST_CASE("fig3 presets: the full policy suite at the named delay") {
    ExperimentConfig cfg = preset("fig3-d1000");
    REQUIRE(cfg.units.size() == 1);
    CHECK(cfg.units[0].base.delay.constant_delay() == 1000);
    CHECK(cfg.units[0].policies.size() == 8);
    CHECK(cfg.log_scale_plot);
    std::vector<std::string> names;
    for (const PolicySpec& s : cfg.units[0].policies) names.push_back(s.name);
    for (const std::string& expected : registered_policy_names()) {
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    }
    CHECK(preset("fig3-d100").units[0].base.delay.constant_delay() == 100);
    CHECK(preset("fig3-d500").units[0].base.delay.constant_delay() == 500);
}

TEST_CASE("mixture presets") {
    ExperimentConfig fig4 = preset("fig4");
    REQUIRE(fig4.units.size() == 2);
    CHECK(fig4.units[0].label == "favorable");
    CHECK(fig4.units[0].base.num_actions == 2);
    CHECK(fig4.units[0].base.mixture->alpha == doctest::Approx(0.1));
    CHECK(fig4.units[0].base.mixture->mu[0] == std::vector<double>{0.9, 0.1});
    CHECK(fig4.units[1].base.mixture->mu[0] == std::vector<double>{0.1, 0.9});
    CHECK(preset("fig5").units[0].base.mixture->alpha == doctest::Approx(0.3));

    ExperimentConfig fig6 = preset("fig6");
    REQUIRE(fig6.units.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(fig6.units[i].base.delay.constant_delay() == 500);
        CHECK(fig6.units[i].base.mixture->mu[0] == std::vector<double>{0.1, 0.1, 0.1, 0.9});
        CHECK(fig6.units[i].change_rounds == std::vector<int>{2000, 4000, 6000});
    }
    CHECK(fig6.units[0].base.mixture->alpha == doctest::Approx(0.1));
    CHECK(fig6.units[2].base.mixture->alpha == doctest::Approx(0.5));

    ExperimentConfig figA = preset("figA");
    REQUIRE(figA.units.size() == 3);
    CHECK_FALSE(figA.log_scale_plot);
}

TEST_CASE("experiment config JSON") {
    const char* text = R"({
        "label": "mini",
        "generator": {
            "base": {
                "K": 2, "S": 3, "T": 300,
                "theta": [0.8, 0.4, 0.2],
                "segments": [{"start": 1, "P": [[0.8, 0.1, 0.1], [0.1, 0.8, 0.1]]}],
                "delay": {"constant": 5}
            },
            "changes": [150]
        },
        "policies": [
            {"name": "nsd-ucrl2", "W": 100},
            {"name": "ucb", "label": "baseline"}
        ],
        "reps": 3,
        "delta": 0.1
    })";
    ExperimentConfig cfg = config_from_json_text(text, "inline");
    CHECK(cfg.replications == 3);
    CHECK(cfg.delta == doctest::Approx(0.1));
    REQUIRE(cfg.units.size() == 1);
    CHECK(cfg.units[0].label == "mini");
    CHECK(cfg.units[0].change_rounds == std::vector<int>{150});
    CHECK(cfg.units[0].policies[1].effective_label() == "baseline");

    SUBCASE("runs end to end") {
        cfg.master_seed = 4;
        std::vector<UnitResult> results = run_experiment(cfg);
        REQUIRE(results.size() == 1);
        CHECK(results[0].policies.size() == 2);
        CHECK(results[0].policies[0].mean.size() == 300);
    }
    SUBCASE("unknown policy is rejected up front") {
        std::string broken(text);
        auto pos = broken.find("nsd-ucrl2");
        broken.replace(pos, 9, "zzz-zzzzz");
        CHECK_THROWS_AS(config_from_json_text(broken, "inline"), UsageError);
    }
    SUBCASE("missing policies is a usage error") {
        std::string no_policies(text);
        auto pos = no_policies.find("\"policies\"");
        no_policies.replace(pos, 10, "\"ignored\"");
        CHECK_THROWS_AS(config_from_json_text(no_policies, "inline"), UsageError);
    }
    SUBCASE("a broken instance is a usage error") {
        CHECK_THROWS_AS(config_from_json_text(R"({"instance": {}, "policies": [{"name":"ucb"}]})",
                                              "inline"),
                        UsageError);
    }
}

TEST_CASE("results CSV is schema-stable and round-complete") {
    ExperimentUnit unit;
    unit.label = "csv";
    unit.base = benchmark_instance(50, DelayModel::constant(0));
    unit.policies = {PolicySpec{"ucb", "", std::nullopt, std::nullopt, std::nullopt},
                     PolicySpec{"nsd-psrl", "", 25, std::nullopt, std::nullopt}};
    ExperimentConfig cfg;
    cfg.replications = 2;
    cfg.master_seed = 8;
    UnitResult result = run_unit(unit, cfg);

    const std::string path = "test_results_tmp.csv";
    write_results_csv(path, result);
    std::string content = slurp(path);

    std::istringstream lines(content);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "policy,round,mean_cum_regret,ci_low,ci_high");
    int rows = 0, ucb_rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        if (line.rfind("ucb,", 0) == 0) ++ucb_rows;
    }
    CHECK(rows == 2 * 50);
    CHECK(ucb_rows == 50);

    // byte-identical on rewrite
    write_results_csv(path, result);
    CHECK(slurp(path) == content);
    std::remove(path.c_str());
}

TEST_CASE("trajectory CSV encodes deliveries and parses back") {
    std::vector<TrajectoryRound> rounds;
    rounds.push_back({1, 2, 0, 0.25, {}});
    rounds.push_back({2, 0, 1, 0.0, {{1, 0, 1.0}, {2, 1, 0.0}}});
    const std::string path = "test_traj_tmp.csv";
    write_trajectory_csv(path, rounds);
    std::string content = slurp(path);
    CHECK(content.find("round,action,signal,reward_origin,reward_value,regret") == 0);
    CHECK(content.find("1,2,0,,,0.25") != std::string::npos);
    CHECK(content.find("2,0,1,1;2,1;0,0") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("SVG plot renders curves and bands") {
    ExperimentUnit unit;
    unit.label = "plot";
    unit.base = benchmark_instance(60, DelayModel::constant(0));
    unit.policies = {PolicySpec{"ucb", "", std::nullopt, std::nullopt, std::nullopt}};
    ExperimentConfig cfg;
    cfg.replications = 3;
    UnitResult result = run_unit(unit, cfg);

    const std::string path = "test_plot_tmp.svg";
    for (bool log_y : {false, true}) {
        PlotOptions options;
        options.log_y = log_y;
        options.title = "test";
        write_svg_plot(path, result, options);
        std::string content = slurp(path);
        CHECK(content.rfind("<svg", 0) == 0);
        CHECK(content.find("<polyline") != std::string::npos);
        CHECK(content.find("<polygon") != std::string::npos);
        CHECK(content.find("ucb") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("run header lists the experiment constants") {
    ExperimentConfig cfg = preset("fig3-d500");
    cfg.master_seed = 17;
    std::string header = format_run_header(cfg);
    CHECK(header.find("delta: 0.05") != std::string::npos);
    CHECK(header.find("master seed: 17") != std::string::npos);
    CHECK(header.find("change rounds: 2000 4000 6000") != std::string::npos);
    CHECK(header.find("nsd-ucrl2(W=800)") != std::string::npos);
}
