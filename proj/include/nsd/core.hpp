#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsd/rng.hpp"

namespace nsd {

// Conventions used across the library:
//   - rounds are 1-based (1..T), matching the usual bandit time index;
//   - action and signal indices are 0-based.

enum class RewardKind {
    kBernoulli,      // reward ~ Bernoulli(theta[s])
    kDeterministic,  // reward = theta[s], for debugging
};

// Reward delay: either a fixed number of rounds or i.i.d. geometric on
// {0, 1, 2, ...} with success probability p.
class DelayModel {
public:
    static DelayModel constant(int delay);
    static DelayModel geometric(double success_probability);

    bool is_constant() const { return constant_.has_value(); }
    int constant_delay() const { return *constant_; }
    double geometric_p() const { return geometric_p_; }

    // Constant delays consume no randomness; geometric delays consume one
    // uniform draw.
    int sample(Rng& rng) const;

private:
    DelayModel() = default;
    std::optional<int> constant_;
    double geometric_p_ = 0.0;
};

struct Segment {
    int start_round = 1;
    // K rows, each a probability vector over the S signals.
    std::vector<std::vector<double>> transition;
};

// Mixture misspecification: with probability alpha the signal is uniform on
// [S] and the reward mean is mu[action] for the active segment.
struct Mixture {
    double alpha = 0.0;
    // One row of K per-action means per segment, aligned with segments.
    std::vector<std::vector<double>> mu;
};

struct NsdInstance {
    int num_actions = 0;  // K
    int num_signals = 0;  // S
    int horizon = 0;      // T
    std::vector<Segment> segments;
    std::vector<double> theta;  // S stationary signal reward means
    DelayModel delay = DelayModel::constant(0);
    std::optional<Mixture> mixture;
    RewardKind reward_kind = RewardKind::kBernoulli;

    // Throws std::invalid_argument when any structural invariant is violated
    // (row sums, segment ordering, parameter ranges).
    void validate() const;

    int segment_index(int round) const;
    const std::vector<std::vector<double>>& transition_at(int round) const;
    double mixture_alpha() const { return mixture ? mixture->alpha : 0.0; }
};

// Expected reward of `action` at `round`:
//   alpha * mu[seg][action] + (1 - alpha) * p_round(action) . theta
double expected_reward(const NsdInstance& instance, int round, int action);

// Highest expected reward and its action; ties broken by lowest index.
std::pair<double, int> optimal_value(const NsdInstance& instance, int round);

struct DeliveredReward {
    int origin_round = 0;
    int signal = 0;
    double reward = 0.0;
};

// Everything a policy observes when it plays a round: the immediate signal
// plus any rewards whose delay expires this round.
struct RoundFeedback {
    int round = 0;
    int signal = 0;
    std::vector<DeliveredReward> due_rewards;
};

struct RegretTrace {
    std::vector<double> per_round;
    std::vector<double> cumulative;

    void append(double regret);
    double final_cumulative() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

// JSON codec for the instance schema:
//   {"K":int,"S":int,"T":int,"theta":[...],
//    "segments":[{"start":int,"P":[[...]]}],
//    "delay":{"constant":int}|{"geometric":p},
//    "mixture":{"alpha":f,"mu":[[...]]}|null,
//    "deterministic_rewards":bool (optional)}
NsdInstance instance_from_json_text(const std::string& text);
NsdInstance instance_from_json_file(const std::string& path);
std::string instance_to_json_text(const NsdInstance& instance);

}  // namespace nsd
