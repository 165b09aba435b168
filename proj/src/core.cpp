#include "nsd/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nsd {

namespace {

constexpr double kRowSumTolerance = 1e-9;

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace

DelayModel DelayModel::constant(int delay) {
    require(delay >= 0, "constant delay must be >= 0");
    DelayModel m;
    m.constant_ = delay;
    return m;
}

DelayModel DelayModel::geometric(double success_probability) {
    require(success_probability > 0.0 && success_probability <= 1.0,
            "geometric delay parameter must be in (0, 1]");
    DelayModel m;
    m.geometric_p_ = success_probability;
    return m;
}

int DelayModel::sample(Rng& rng) const {
    if (constant_) return *constant_;
    if (geometric_p_ >= 1.0) {
        rng.uniform();
        return 0;
    }
    double u = rng.uniform();
    return static_cast<int>(std::log1p(-u) / std::log1p(-geometric_p_));
}

void NsdInstance::validate() const {
    require(num_actions >= 2, "need at least 2 actions");
    require(num_signals >= 2, "need at least 2 signals");
    require(horizon >= 1, "horizon must be positive");
    require(static_cast<int>(theta.size()) == num_signals, "theta must have S entries");
    for (double v : theta) require(v >= 0.0 && v <= 1.0, "theta entries must lie in [0,1]");

    require(!segments.empty(), "at least one segment required");
    require(segments.front().start_round == 1, "first segment must start at round 1");
    int prev_start = 0;
    for (const Segment& seg : segments) {
        require(seg.start_round > prev_start, "segment starts must be strictly increasing");
        require(seg.start_round < horizon || seg.start_round == 1,
                "segment starts must be < horizon");
        prev_start = seg.start_round;
        require(static_cast<int>(seg.transition.size()) == num_actions,
                "each segment needs K transition rows");
        for (const auto& row : seg.transition) {
            require(static_cast<int>(row.size()) == num_signals,
                    "each transition row needs S entries");
            double sum = 0.0;
            for (double p : row) {
                require(p >= 0.0, "transition probabilities must be non-negative");
                sum += p;
            }
            require(std::abs(sum - 1.0) <= kRowSumTolerance,
                    "transition row must sum to 1 within 1e-9");
        }
    }

    if (mixture) {
        require(mixture->alpha >= 0.0 && mixture->alpha <= 1.0, "alpha must lie in [0,1]");
        require(mixture->mu.size() == segments.size(),
                "mixture needs one mu row per segment");
        for (const auto& row : mixture->mu) {
            require(static_cast<int>(row.size()) == num_actions, "each mu row needs K entries");
            for (double v : row) require(v >= 0.0 && v <= 1.0, "mu entries must lie in [0,1]");
        }
    }
}

int NsdInstance::segment_index(int round) const {
    int idx = 0;
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].start_round <= round) idx = static_cast<int>(i);
    }
    return idx;
}

const std::vector<std::vector<double>>& NsdInstance::transition_at(int round) const {
    return segments[segment_index(round)].transition;
}

double expected_reward(const NsdInstance& instance, int round, int action) {
    require(round >= 1 && round <= instance.horizon, "round out of range");
    require(action >= 0 && action < instance.num_actions, "action out of range");
    int seg = instance.segment_index(round);
    const auto& row = instance.segments[seg].transition[action];
    double factored = 0.0;
    for (int s = 0; s < instance.num_signals; ++s) factored += row[s] * instance.theta[s];
    if (!instance.mixture) return factored;
    double alpha = instance.mixture->alpha;
    return alpha * instance.mixture->mu[seg][action] + (1.0 - alpha) * factored;
}

std::pair<double, int> optimal_value(const NsdInstance& instance, int round) {
    require(round >= 1 && round <= instance.horizon, "round out of range");
    double best = expected_reward(instance, round, 0);
    int best_action = 0;
    for (int a = 1; a < instance.num_actions; ++a) {
        double value = expected_reward(instance, round, a);
        if (value > best) {
            best = value;
            best_action = a;
        }
    }
    return {best, best_action};
}

void RegretTrace::append(double regret) {
    per_round.push_back(regret);
    double prev = cumulative.empty() ? 0.0 : cumulative.back();
    cumulative.push_back(prev + regret);
}

namespace {

using nlohmann::json;

std::vector<std::vector<double>> parse_matrix(const json& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + " must be an array of arrays");
    std::vector<std::vector<double>> rows;
    for (const auto& row : j) rows.push_back(row.get<std::vector<double>>());
    return rows;
}

}  // namespace

NsdInstance instance_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid instance JSON: ") + e.what());
    }
    NsdInstance inst;
    try {
        inst.num_actions = j.at("K").get<int>();
        inst.num_signals = j.at("S").get<int>();
        inst.horizon = j.at("T").get<int>();
        inst.theta = j.at("theta").get<std::vector<double>>();
        for (const auto& seg_json : j.at("segments")) {
            Segment seg;
            seg.start_round = seg_json.at("start").get<int>();
            seg.transition = parse_matrix(seg_json.at("P"), "segment P");
            inst.segments.push_back(std::move(seg));
        }
        const auto& delay = j.at("delay");
        if (delay.contains("constant")) {
            inst.delay = DelayModel::constant(delay.at("constant").get<int>());
        } else if (delay.contains("geometric")) {
            inst.delay = DelayModel::geometric(delay.at("geometric").get<double>());
        } else {
            throw std::invalid_argument("delay must be {\"constant\":d} or {\"geometric\":p}");
        }
        if (j.contains("mixture") && !j.at("mixture").is_null()) {
            Mixture mix;
            mix.alpha = j.at("mixture").at("alpha").get<double>();
            mix.mu = parse_matrix(j.at("mixture").at("mu"), "mixture mu");
            inst.mixture = std::move(mix);
        }
        if (j.contains("deterministic_rewards") && j.at("deterministic_rewards").get<bool>()) {
            inst.reward_kind = RewardKind::kDeterministic;
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid instance JSON: ") + e.what());
    }
    inst.validate();
    return inst;
}

NsdInstance instance_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return instance_from_json_text(buffer.str());
}

std::string instance_to_json_text(const NsdInstance& instance) {
    json j;
    j["K"] = instance.num_actions;
    j["S"] = instance.num_signals;
    j["T"] = instance.horizon;
    j["theta"] = instance.theta;
    j["segments"] = json::array();
    for (const Segment& seg : instance.segments) {
        j["segments"].push_back({{"start", seg.start_round}, {"P", seg.transition}});
    }
    if (instance.delay.is_constant()) {
        j["delay"] = {{"constant", instance.delay.constant_delay()}};
    } else {
        j["delay"] = {{"geometric", instance.delay.geometric_p()}};
    }
    if (instance.mixture) {
        j["mixture"] = {{"alpha", instance.mixture->alpha}, {"mu", instance.mixture->mu}};
    } else {
        j["mixture"] = nullptr;
    }
    if (instance.reward_kind == RewardKind::kDeterministic) j["deterministic_rewards"] = true;
    return j.dump(2);
}

}  // namespace nsd
