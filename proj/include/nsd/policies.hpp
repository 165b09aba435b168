#pragma once

#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "nsd/core.hpp"
#include "nsd/estimators.hpp"
#include "nsd/optimism.hpp"
#include "nsd/rng.hpp"

namespace nsd {

// Decision rule interface. The base class enforces the protocol: exactly one
// observe() per select_action(), for the same round; a violation means the
// runner and policy desynchronized and raises std::logic_error.
class Policy {
public:
    virtual ~Policy() = default;

    const std::string& name() const { return name_; }

    int select_action(int round);
    void observe(const RoundFeedback& feedback);

    // Oracle hook; the runner invokes it at every change round.
    virtual void reset_segment() {}
    virtual bool wants_segment_resets() const { return false; }
    virtual bool wants_zero_delay() const { return false; }

protected:
    explicit Policy(std::string name) : name_(std::move(name)) {}
    int last_observed_round() const { return last_observed_round_; }

private:
    virtual int choose(int round) = 0;
    virtual void ingest(const RoundFeedback& feedback, int action) = 0;

    std::string name_;
    int pending_round_ = 0;
    int pending_action_ = -1;
    int last_observed_round_ = 0;
};

struct OracleOptions {
    bool knows_changes = false;  // runner triggers reset_segment at changes
    bool zero_delay = false;     // runner delivers rewards with delay 0
};

// Optimistic policy over the factored model: windowed transition estimates
// with an L1 confidence ball, delayed per-signal reward UCBs, and the
// saturating solver for the optimistic value of each action. Rounds 1..K pull
// each action once.
class NsdUcrl2Policy : public Policy {
public:
    NsdUcrl2Policy(std::string name, const ConfidenceConfig& cfg, OracleOptions oracle = {});

    void reset_segment() override;  // clears transition stats, keeps reward stats
    bool wants_segment_resets() const override { return oracle_.knows_changes; }
    bool wants_zero_delay() const override { return oracle_.zero_delay; }

    // Diagnostics, valid after the first post-initialization selection.
    const std::vector<double>& reward_upper_bounds() const { return last_ucbs_; }
    const std::vector<double>& optimistic_values() const { return last_rho_plus_; }
    long long window_count(int action) const { return window_.count(action); }
    long long reward_count(int signal) const { return rewards_.count(signal); }
    // Signals observed so far whose reward has not yet been delivered.
    long long missing_reward_count(int signal) const {
        return signals_seen_[signal] - rewards_.count(signal);
    }

private:
    int choose(int round) override;
    void ingest(const RoundFeedback& feedback, int action) override;

    ConfidenceConfig cfg_;
    OracleOptions oracle_;
    WindowStats window_;
    DelayedRewardStats rewards_;
    std::vector<long long> signals_seen_;
    std::vector<double> last_ucbs_;
    std::vector<double> last_rho_plus_;
};

// Posterior-sampling variant: per-action Dirichlet posteriors on the windowed
// transition counts and per-signal Beta posteriors on the delayed rewards.
// Symmetric priors explore on their own, so there is no forced
// initialization phase.
class NsdPsrlPolicy : public Policy {
public:
    NsdPsrlPolicy(std::string name, int num_actions, int num_signals, int window,
                  std::uint64_t seed);

    void reset_segment() override;

private:
    int choose(int round) override;
    void ingest(const RoundFeedback& feedback, int action) override;

    int num_actions_;
    int num_signals_;
    WindowStats window_;
    DelayedRewardStats rewards_;
    Rng rng_;
};

// Signal-agnostic UCB over delivered rewards, credited to the action taken at
// the reward's origin round. The sliding-window variant restricts counts to
// origin rounds u with t - u <= W. With `knows_changes` the statistics reset
// at change rounds and rewards originating before the current segment are
// discarded.
class SignalAgnosticUcbPolicy : public Policy {
public:
    SignalAgnosticUcbPolicy(std::string name, const ConfidenceConfig& cfg,
                            std::optional<int> window, OracleOptions oracle = {});

    void reset_segment() override;
    bool wants_segment_resets() const override { return oracle_.knows_changes; }
    bool wants_zero_delay() const override { return oracle_.zero_delay; }

    long long delivered_count(int action) const { return count_[action]; }
    double delivered_mean(int action) const {
        return count_[action] > 0 ? sum_[action] / static_cast<double>(count_[action]) : 0.0;
    }

private:
    int choose(int round) override;
    void ingest(const RoundFeedback& feedback, int action) override;
    void evict_before(int origin_floor);

    struct WindowItem {
        int origin_round;
        int action;
        double reward;
    };
    struct LaterOrigin {
        bool operator()(const WindowItem& a, const WindowItem& b) const {
            return a.origin_round > b.origin_round;
        }
    };

    ConfidenceConfig cfg_;
    std::optional<int> window_;
    OracleOptions oracle_;
    std::vector<long long> count_;
    std::vector<double> sum_;
    std::vector<int> action_at_round_;
    std::priority_queue<WindowItem, std::vector<WindowItem>, LaterOrigin> window_items_;
    int segment_start_ = 1;
};

enum class OracleInner { kUcb, kNsd };

// Oracle variants of the baselines. The UCB oracle fully restarts at changes;
// the NSD oracle runs without windowing (window = T) and resets only its
// transition statistics at changes, since the reward means are stationary.
// The *-nd variants additionally receive rewards without delay.
std::unique_ptr<Policy> make_oracle(OracleInner inner, bool knows_changes, bool no_delay,
                                    const ConfidenceConfig& cfg, std::string name);

// Registry entry: name resolves the algorithm, label is used in outputs and
// defaults to the name, window/delta override the experiment defaults.
// ucb_bonus replaces the UCB family's exploration numerator.
struct PolicySpec {
    std::string name;
    std::string label;
    std::optional<int> window;
    std::optional<double> delta;
    std::optional<double> ucb_bonus;

    std::string effective_label() const { return label.empty() ? name : label; }
    // Key for the policy's RNG sub-stream; identical specs share a stream.
    std::string stream_key() const;
};

std::vector<std::string> registered_policy_names();

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const NsdInstance& instance,
                                    double default_delta, std::uint64_t seed);

}  // namespace nsd
