#include "nsd/policies.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nsd {

int Policy::select_action(int round) {
    if (pending_round_ != 0) {
        throw std::logic_error(name_ + ": select_action called before observing round " +
                               std::to_string(pending_round_));
    }
    int action = choose(round);
    pending_round_ = round;
    pending_action_ = action;
    return action;
}

void Policy::observe(const RoundFeedback& feedback) {
    if (pending_round_ == 0 || feedback.round != pending_round_) {
        throw std::logic_error(name_ + ": observe desynchronized at round " +
                               std::to_string(feedback.round));
    }
    int action = pending_action_;
    pending_round_ = 0;
    pending_action_ = -1;
    last_observed_round_ = feedback.round;
    ingest(feedback, action);
}

namespace {

// Lowest-index argmax with a tolerance: index values that are mathematically
// equal (e.g. several clamped upper bounds) can differ by rounding noise, and
// that noise must not override the lowest-index tie-break.
int argmax_lowest_index(const std::vector<double>& values) {
    constexpr double kTieTolerance = 1e-9;
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[i] > values[best] + kTieTolerance) best = i;
    }
    return best;
}

}  // namespace

NsdUcrl2Policy::NsdUcrl2Policy(std::string name, const ConfidenceConfig& cfg,
                               OracleOptions oracle)
    : Policy(std::move(name)),
      cfg_(cfg),
      oracle_(oracle),
      window_(cfg.num_actions, cfg.num_signals, cfg.window),
      rewards_(cfg.num_signals),
      signals_seen_(cfg.num_signals, 0),
      last_ucbs_(cfg.num_signals, 1.0),
      last_rho_plus_(cfg.num_actions, 1.0) {
    cfg_.validate();
}

int NsdUcrl2Policy::choose(int round) {
    if (round <= cfg_.num_actions) return round - 1;
    for (int s = 0; s < cfg_.num_signals; ++s) last_ucbs_[s] = reward_ucb(rewards_, cfg_, s);
    for (int a = 0; a < cfg_.num_actions; ++a) {
        std::vector<double> p_hat = window_.transition_estimate(a);
        double radius = transition_radius(cfg_, static_cast<double>(window_.count(a)));
        last_rho_plus_[a] = optimistic_value(p_hat, radius, last_ucbs_).value;
    }
    return argmax_lowest_index(last_rho_plus_);
}

void NsdUcrl2Policy::ingest(const RoundFeedback& feedback, int action) {
    window_.record(action, feedback.signal);
    ++signals_seen_[feedback.signal];
    for (const DeliveredReward& due : feedback.due_rewards) rewards_.record(due);
}

void NsdUcrl2Policy::reset_segment() { window_.clear(); }

NsdPsrlPolicy::NsdPsrlPolicy(std::string name, int num_actions, int num_signals, int window,
                             std::uint64_t seed)
    : Policy(std::move(name)),
      num_actions_(num_actions),
      num_signals_(num_signals),
      window_(num_actions, num_signals, window),
      rewards_(num_signals),
      rng_(seed) {}

int NsdPsrlPolicy::choose(int) {
    auto gamma = [&](double shape) {
        std::gamma_distribution<double> dist(shape, 1.0);
        return dist(rng_.engine());
    };

    std::vector<double> theta_sample(num_signals_);
    for (int s = 0; s < num_signals_; ++s) {
        double successes = rewards_.sum(s);
        double failures = static_cast<double>(rewards_.count(s)) - successes;
        double x = gamma(1.0 + successes);
        double y = gamma(1.0 + failures);
        theta_sample[s] = x / (x + y);
    }

    std::vector<double> value(num_actions_, 0.0);
    std::vector<double> weights(num_signals_);
    for (int a = 0; a < num_actions_; ++a) {
        double total = 0.0;
        for (int s = 0; s < num_signals_; ++s) {
            weights[s] = gamma(1.0 + static_cast<double>(window_.count(a, s)));
            total += weights[s];
        }
        for (int s = 0; s < num_signals_; ++s) value[a] += weights[s] / total * theta_sample[s];
    }
    return argmax_lowest_index(value);
}

void NsdPsrlPolicy::ingest(const RoundFeedback& feedback, int action) {
    window_.record(action, feedback.signal);
    for (const DeliveredReward& due : feedback.due_rewards) rewards_.record(due);
}

void NsdPsrlPolicy::reset_segment() { window_.clear(); }

SignalAgnosticUcbPolicy::SignalAgnosticUcbPolicy(std::string name, const ConfidenceConfig& cfg,
                                                 std::optional<int> window, OracleOptions oracle)
    : Policy(std::move(name)),
      cfg_(cfg),
      window_(window),
      oracle_(oracle),
      count_(cfg.num_actions, 0),
      sum_(cfg.num_actions, 0.0),
      action_at_round_(cfg.horizon + 2, -1) {
    cfg_.validate();
    if (window_ && *window_ < 1) throw std::invalid_argument("UCB window must be >= 1");
}

int SignalAgnosticUcbPolicy::choose(int round) {
    if (round <= cfg_.num_actions) return round - 1;
    if (window_) evict_before(round - *window_);
    const double c = cfg_.ucb_bonus_constant();
    std::vector<double> index(cfg_.num_actions);
    for (int a = 0; a < cfg_.num_actions; ++a) {
        double n = static_cast<double>(std::max<long long>(1, count_[a]));
        double mean = count_[a] > 0 ? sum_[a] / static_cast<double>(count_[a]) : 0.0;
        index[a] = std::min(1.0, mean + std::sqrt(c / n));
    }
    return argmax_lowest_index(index);
}

void SignalAgnosticUcbPolicy::ingest(const RoundFeedback& feedback, int action) {
    action_at_round_[feedback.round] = action;
    for (const DeliveredReward& due : feedback.due_rewards) {
        if (oracle_.knows_changes && due.origin_round < segment_start_) continue;
        int origin_action = action_at_round_[due.origin_round];
        if (origin_action < 0) {
            throw std::logic_error(name() + ": reward delivered for an unplayed round");
        }
        ++count_[origin_action];
        sum_[origin_action] += due.reward;
        if (window_) window_items_.push({due.origin_round, origin_action, due.reward});
    }
}

void SignalAgnosticUcbPolicy::evict_before(int origin_floor) {
    while (!window_items_.empty() && window_items_.top().origin_round < origin_floor) {
        const WindowItem& item = window_items_.top();
        --count_[item.action];
        sum_[item.action] -= item.reward;
        window_items_.pop();
    }
}

void SignalAgnosticUcbPolicy::reset_segment() {
    std::fill(count_.begin(), count_.end(), 0);
    std::fill(sum_.begin(), sum_.end(), 0.0);
    window_items_ = {};
    segment_start_ = last_observed_round() + 1;
}

std::unique_ptr<Policy> make_oracle(OracleInner inner, bool knows_changes, bool no_delay,
                                    const ConfidenceConfig& cfg, std::string name) {
    OracleOptions oracle{knows_changes, no_delay};
    switch (inner) {
        case OracleInner::kUcb:
            return std::make_unique<SignalAgnosticUcbPolicy>(std::move(name), cfg, std::nullopt,
                                                             oracle);
        case OracleInner::kNsd: {
            ConfidenceConfig unwindowed = cfg;
            unwindowed.window = cfg.horizon;
            return std::make_unique<NsdUcrl2Policy>(std::move(name), unwindowed, oracle);
        }
    }
    throw std::invalid_argument("unknown oracle inner kind");
}

std::string PolicySpec::stream_key() const {
    std::string key = effective_label();
    key += '|';
    key += name;
    key += '|';
    key += window ? std::to_string(*window) : std::string("-");
    key += '|';
    key += delta ? std::to_string(*delta) : std::string("-");
    key += '|';
    key += ucb_bonus ? std::to_string(*ucb_bonus) : std::string("-");
    return key;
}

std::vector<std::string> registered_policy_names() {
    return {"nsd-ucrl2",  "nsd-psrl",   "ucb",           "sw-ucb",
            "oracle-ucb", "oracle-nsd", "oracle-ucb-nd", "oracle-nsd-nd"};
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const NsdInstance& instance,
                                    double default_delta, std::uint64_t seed) {
    ConfidenceConfig cfg;
    cfg.delta = spec.delta.value_or(default_delta);
    cfg.horizon = instance.horizon;
    cfg.window = spec.window.value_or(instance.horizon);
    cfg.num_actions = instance.num_actions;
    cfg.num_signals = instance.num_signals;
    if (spec.ucb_bonus) {
        if (*spec.ucb_bonus <= 0.0) throw std::invalid_argument("ucb_bonus must be > 0");
        cfg.ucb_bonus_override = *spec.ucb_bonus;
    }
    cfg.validate();
    std::string label = spec.effective_label();

    if (spec.name == "nsd-ucrl2") {
        return std::make_unique<NsdUcrl2Policy>(label, cfg);
    }
    if (spec.name == "nsd-psrl") {
        return std::make_unique<NsdPsrlPolicy>(label, cfg.num_actions, cfg.num_signals,
                                               cfg.window, seed);
    }
    if (spec.name == "ucb") {
        return std::make_unique<SignalAgnosticUcbPolicy>(label, cfg, std::nullopt);
    }
    if (spec.name == "sw-ucb") {
        return std::make_unique<SignalAgnosticUcbPolicy>(label, cfg, cfg.window);
    }
    if (spec.name == "oracle-ucb") return make_oracle(OracleInner::kUcb, true, false, cfg, label);
    if (spec.name == "oracle-nsd") return make_oracle(OracleInner::kNsd, true, false, cfg, label);
    if (spec.name == "oracle-ucb-nd") {
        return make_oracle(OracleInner::kUcb, true, true, cfg, label);
    }
    if (spec.name == "oracle-nsd-nd") {
        return make_oracle(OracleInner::kNsd, true, true, cfg, label);
    }

    std::string known;
    for (const std::string& n : registered_policy_names()) {
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw std::invalid_argument("unknown policy '" + spec.name + "' (known: " + known + ")");
}

}  // namespace nsd
