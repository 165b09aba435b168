#pragma once

#include <vector>

#include "nsd/core.hpp"

namespace nsd {

// Sliding-window (action, signal) counts. A ring buffer of the raw pairs is
// kept alongside the counts so eviction is exact and the counts always match
// a recount of the buffer.
class WindowStats {
public:
    WindowStats(int num_actions, int num_signals, int window);

    void record(int action, int signal);

    // Drops the windowed contents; lifetime pull counts are kept.
    void clear();

    int window() const { return window_; }
    int size() const { return size_; }
    long long count(int action) const { return count_action_[action]; }
    long long count(int action, int signal) const {
        return count_pair_[action * num_signals_ + signal];
    }
    long long lifetime_count(int action) const { return lifetime_[action]; }
    bool any_lifetime() const { return any_lifetime_; }

    // Windowed empirical transition row, N^W(a, s) / max{1, N^W(a)}. Before
    // the very first recorded pull the uniform vector 1/S is returned; after
    // that an action unseen in the window gets the all-zeros vector.
    std::vector<double> transition_estimate(int action) const;

    // The (action, signal) pairs currently in the window, oldest first.
    std::vector<std::pair<int, int>> contents() const;

private:
    int num_actions_;
    int num_signals_;
    int window_;
    std::vector<std::pair<int, int>> ring_;
    int head_ = 0;
    int size_ = 0;
    std::vector<long long> count_action_;
    std::vector<long long> count_pair_;
    std::vector<long long> lifetime_;
    bool any_lifetime_ = false;
};

// Per-signal delivered-reward counts and sums (the delayed estimator of the
// stationary reward means).
class DelayedRewardStats {
public:
    explicit DelayedRewardStats(int num_signals);

    void record(int signal, double reward);
    void record(const DeliveredReward& delivered) { record(delivered.signal, delivered.reward); }

    long long count(int signal) const { return count_[signal]; }
    double sum(int signal) const { return sum_[signal]; }
    double mean(int signal) const {
        return sum_[signal] / static_cast<double>(count_[signal] > 0 ? count_[signal] : 1);
    }
    long long total_count() const;

private:
    std::vector<long long> count_;
    std::vector<double> sum_;
};

// Confidence-bonus constants shared by the estimators and policies.
struct ConfidenceConfig {
    double delta = 0.05;
    int horizon = 0;       // T
    int window = 0;        // W
    int num_actions = 0;   // K
    int num_signals = 0;   // S
    // When > 0, replaces the default signal-agnostic UCB numerator.
    double ucb_bonus_override = 0.0;

    // 2 log(2 T S / delta): reward UCB numerator.
    double reward_bonus_constant() const;
    // 2 S log(K W T / delta): L1 ball numerator for transitions.
    double transition_ball_constant() const;
    // 2 log(2 T K / delta): signal-agnostic UCB numerator (S replaced by K),
    // unless overridden.
    double ucb_bonus_constant() const;

    void validate() const;
};

// min{1, mean(s) + sqrt(C_{T,delta} / max{1, N^D(s)})}
double reward_ucb(const DelayedRewardStats& stats, const ConfidenceConfig& cfg, int signal);

// sqrt(C_{W,T,delta} / count), count clamped below by 1.
double transition_radius(const ConfidenceConfig& cfg, double count);

}  // namespace nsd
