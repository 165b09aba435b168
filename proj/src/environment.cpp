#include "nsd/environment.hpp"

#include <stdexcept>
#include <utility>

namespace nsd {

SwitchSchedule SwitchSchedule::draw(const std::vector<int>& change_rounds, int num_actions,
                                    Rng& rng) {
    SwitchSchedule schedule;
    schedule.change_rounds = change_rounds;
    schedule.shift_draws.reserve(change_rounds.size());
    for (std::size_t i = 0; i < change_rounds.size(); ++i) {
        schedule.shift_draws.push_back(1 + rng.uniform_int(num_actions - 1));
    }
    schedule.validate(num_actions);
    return schedule;
}

void SwitchSchedule::validate(int num_actions) const {
    if (num_actions < 2) throw std::invalid_argument("shift schedule needs K >= 2");
    if (change_rounds.size() != shift_draws.size()) {
        throw std::invalid_argument("one shift draw required per change round");
    }
    int prev = 1;
    for (int round : change_rounds) {
        if (round <= prev) throw std::invalid_argument("change rounds must be increasing and > 1");
        prev = round;
    }
    for (int r : shift_draws) {
        if (r < 1 || r > num_actions - 1) {
            throw std::invalid_argument("shift draw must lie in {1, ..., K-1}");
        }
    }
}

NsdInstance generate_shifted_instance(const NsdInstance& base, const SwitchSchedule& schedule) {
    base.validate();
    if (base.segments.size() != 1) {
        throw std::invalid_argument("generate_shifted_instance needs a single-segment base");
    }
    schedule.validate(base.num_actions);
    for (int round : schedule.change_rounds) {
        if (round >= base.horizon) throw std::invalid_argument("change round must be < horizon");
    }

    const int k = base.num_actions;
    NsdInstance out = base;
    if (out.mixture) out.mixture->mu.clear();

    const auto& base_rows = base.segments[0].transition;
    const std::vector<double>* base_mu = base.mixture ? &base.mixture->mu[0] : nullptr;

    auto append_segment = [&](int start, int cumulative_shift) {
        Segment seg;
        seg.start_round = start;
        seg.transition.assign(k, {});
        for (int a = 0; a < k; ++a) seg.transition[(a + cumulative_shift) % k] = base_rows[a];
        out.segments.push_back(std::move(seg));
        if (base_mu) {
            std::vector<double> mu(k, 0.0);
            for (int a = 0; a < k; ++a) mu[(a + cumulative_shift) % k] = (*base_mu)[a];
            out.mixture->mu.push_back(std::move(mu));
        }
    };

    out.segments.clear();
    int cumulative = 0;
    append_segment(1, 0);
    for (std::size_t i = 0; i < schedule.change_rounds.size(); ++i) {
        cumulative = (cumulative + schedule.shift_draws[i]) % k;
        append_segment(schedule.change_rounds[i], cumulative);
    }
    out.validate();
    return out;
}

Environment::Environment(NsdInstance instance, std::uint64_t seed)
    : instance_(std::move(instance)), rng_(seed) {
    instance_.validate();
    trajectory_.reserve(instance_.horizon);
}

RoundFeedback Environment::step(int action) {
    if (finished()) throw std::logic_error("step past the horizon");
    if (action < 0 || action >= instance_.num_actions) {
        throw std::invalid_argument("action out of range");
    }

    const int seg = instance_.segment_index(round_);
    int signal;
    double reward_mean;
    bool mixed_round = instance_.mixture && rng_.uniform() < instance_.mixture->alpha;
    if (mixed_round) {
        signal = rng_.uniform_int(instance_.num_signals);
        reward_mean = instance_.mixture->mu[seg][action];
    } else {
        signal = rng_.categorical(instance_.segments[seg].transition[action]);
        reward_mean = instance_.theta[signal];
    }
    double reward = instance_.reward_kind == RewardKind::kBernoulli
                        ? (rng_.bernoulli(reward_mean) ? 1.0 : 0.0)
                        : reward_mean;
    int delay = instance_.delay.sample(rng_);
    pending_.push({round_ + delay, round_, signal, reward});

    RoundFeedback feedback;
    feedback.round = round_;
    feedback.signal = signal;
    while (!pending_.empty() && pending_.top().due_round == round_) {
        const Pending& p = pending_.top();
        feedback.due_rewards.push_back({p.origin_round, p.signal, p.reward});
        pending_.pop();
    }

    double regret = optimal_value(instance_, round_).first - expected_reward(instance_, round_, action);
    trace_.append(regret);
    trajectory_.push_back({round_, action, signal, regret, feedback.due_rewards});

    ++round_;
    return feedback;
}

std::vector<DeliveredReward> Environment::drain_remaining() {
    if (!finished()) throw std::logic_error("drain_remaining called mid-run");
    std::vector<DeliveredReward> out;
    out.reserve(pending_.size());
    while (!pending_.empty()) {
        const Pending& p = pending_.top();
        out.push_back({p.origin_round, p.signal, p.reward});
        pending_.pop();
    }
    return out;
}

}  // namespace nsd
