#include "nsd/presets.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nsd {

namespace {

constexpr int kHorizon = 8000;
const std::vector<int> kChangeRounds = {2000, 4000, 6000};
constexpr int kWindow = 800;

PolicySpec spec(std::string name, std::optional<int> window = std::nullopt,
                std::string label = "") {
    PolicySpec s;
    s.name = std::move(name);
    s.label = std::move(label);
    s.window = window;
    return s;
}

std::vector<PolicySpec> full_policy_suite(int window) {
    return {
        spec("nsd-ucrl2", window), spec("nsd-psrl", window),
        spec("ucb"),               spec("sw-ucb", window),
        spec("oracle-ucb"),        spec("oracle-nsd"),
        spec("oracle-ucb-nd"),     spec("oracle-nsd-nd"),
    };
}

ExperimentConfig base_config(std::string source) {
    ExperimentConfig cfg;
    cfg.replications = 50;
    cfg.delta = 0.05;
    cfg.source_name = std::move(source);
    return cfg;
}

ExperimentConfig make_fig2() {
    ExperimentConfig cfg = base_config("fig2");
    ExperimentUnit unit;
    unit.label = "window-sweep";
    unit.base = benchmark_instance(kHorizon, DelayModel::constant(0));
    unit.change_rounds = kChangeRounds;
    unit.policies = {
        spec("nsd-ucrl2", 400, "nsd-ucrl2-w400"),
        spec("nsd-ucrl2", 800, "nsd-ucrl2-w800"),
        spec("nsd-ucrl2", 2000, "nsd-ucrl2-w2000"),
        // Reference oracle: knows the change points and runs without delay.
        // D = 0 here, so the plain restart oracle is exactly that.
        spec("oracle-nsd"),
    };
    cfg.units.push_back(std::move(unit));
    return cfg;
}

ExperimentConfig make_fig3(int delay, const std::string& name) {
    ExperimentConfig cfg = base_config(name);
    cfg.log_scale_plot = true;
    ExperimentUnit unit;
    unit.label = "d" + std::to_string(delay);
    unit.base = benchmark_instance(kHorizon, DelayModel::constant(delay));
    unit.change_rounds = kChangeRounds;
    unit.policies = full_policy_suite(kWindow);
    cfg.units.push_back(std::move(unit));
    return cfg;
}

ExperimentConfig make_stationary_mixture(double alpha, const std::string& name) {
    ExperimentConfig cfg = base_config(name);
    auto make_unit = [&](const std::string& label, std::vector<double> mu) {
        ExperimentUnit unit;
        unit.label = label;
        unit.base = benchmark_two_action_instance(kHorizon, DelayModel::constant(0));
        unit.base.mixture = Mixture{alpha, {std::move(mu)}};
        unit.base.validate();
        unit.policies = {spec("nsd-ucrl2", kHorizon), spec("ucb")};
        return unit;
    };
    cfg.units.push_back(make_unit("favorable", {0.9, 0.1}));
    cfg.units.push_back(make_unit("bad", {0.1, 0.9}));
    return cfg;
}

ExperimentConfig make_fig6() {
    ExperimentConfig cfg = base_config("fig6");
    for (double alpha : {0.1, 0.3, 0.5}) {
        ExperimentUnit unit;
        std::ostringstream label;
        label << "alpha" << alpha;
        unit.label = label.str();
        unit.base = benchmark_instance(kHorizon, DelayModel::constant(500));
        unit.base.mixture = Mixture{alpha, {{0.1, 0.1, 0.1, 0.9}}};
        unit.base.validate();
        unit.change_rounds = kChangeRounds;
        unit.policies = {spec("nsd-ucrl2", kWindow), spec("sw-ucb", kWindow), spec("ucb")};
        cfg.units.push_back(std::move(unit));
    }
    return cfg;
}

ExperimentConfig make_figA() {
    ExperimentConfig cfg = base_config("figA");
    cfg.log_scale_plot = false;
    for (int delay : {100, 500, 1000}) {
        ExperimentConfig fig3 = make_fig3(delay, "figA");
        cfg.units.push_back(std::move(fig3.units[0]));
    }
    return cfg;
}

}  // namespace

NsdInstance benchmark_instance(int horizon, DelayModel delay) {
    NsdInstance inst;
    inst.num_actions = 4;
    inst.num_signals = 3;
    inst.horizon = horizon;
    inst.theta = {0.8, 0.4, 0.2};
    inst.segments = {{1,
                      {{0.8, 0.1, 0.1},
                       {0.1, 0.8, 0.1},
                       {0.1, 0.1, 0.8},
                       {0.1, 0.4, 0.5}}}};
    inst.delay = delay;
    inst.validate();
    return inst;
}

NsdInstance benchmark_two_action_instance(int horizon, DelayModel delay) {
    NsdInstance inst;
    inst.num_actions = 2;
    inst.num_signals = 3;
    inst.horizon = horizon;
    inst.theta = {0.8, 0.4, 0.2};
    inst.segments = {{1, {{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}}}};
    inst.delay = delay;
    inst.validate();
    return inst;
}

std::vector<std::string> preset_names() {
    return {"fig2", "fig3-d100", "fig3-d500", "fig3-d1000", "fig4", "fig5", "fig6", "figA"};
}

ExperimentConfig preset(const std::string& name) {
    if (name == "fig2") return make_fig2();
    if (name == "fig3-d100") return make_fig3(100, name);
    if (name == "fig3-d500") return make_fig3(500, name);
    if (name == "fig3-d1000") return make_fig3(1000, name);
    if (name == "fig4") return make_stationary_mixture(0.1, name);
    if (name == "fig5") return make_stationary_mixture(0.3, name);
    if (name == "fig6") return make_fig6();
    if (name == "figA") return make_figA();

    std::string known;
    for (const std::string& n : preset_names()) {
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw UsageError("unknown preset '" + name + "' (available: " + known + ")");
}

ExperimentConfig config_from_json_text(const std::string& text, const std::string& source_name) {
    ExperimentConfig cfg = base_config(source_name);
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        ExperimentUnit unit;
        unit.label = j.value("label", std::string("custom"));
        if (j.contains("instance")) {
            unit.base = instance_from_json_text(j.at("instance").dump());
        } else if (j.contains("generator")) {
            const auto& gen = j.at("generator");
            unit.base = instance_from_json_text(gen.at("base").dump());
            unit.change_rounds = gen.value("changes", std::vector<int>{});
            if (gen.contains("shifts")) {
                unit.pinned_shifts = gen.at("shifts").get<std::vector<int>>();
            }
        } else {
            throw UsageError("experiment JSON needs an \"instance\" or a \"generator\"");
        }
        if (!j.contains("policies") || j.at("policies").empty()) {
            throw UsageError("experiment JSON needs a non-empty \"policies\" list");
        }
        for (const auto& pj : j.at("policies")) {
            PolicySpec s;
            s.name = pj.at("name").get<std::string>();
            s.label = pj.value("label", std::string(""));
            if (pj.contains("W")) s.window = pj.at("W").get<int>();
            if (pj.contains("delta")) s.delta = pj.at("delta").get<double>();
            if (pj.contains("ucb_bonus")) s.ucb_bonus = pj.at("ucb_bonus").get<double>();
            unit.policies.push_back(std::move(s));
        }
        cfg.replications = j.value("reps", 50);
        cfg.delta = j.value("delta", 0.05);
        cfg.units.push_back(std::move(unit));

        // Fail fast on unresolved policies or a broken instance.
        for (const PolicySpec& s : cfg.units[0].policies) {
            make_policy(s, cfg.units[0].base, cfg.delta, 0);
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError("invalid experiment config: " + std::string(e.what()));
    }
    return cfg;
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json_text(buffer.str(), path);
}

}  // namespace nsd
