#include "nsd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsd {

WindowStats::WindowStats(int num_actions, int num_signals, int window)
    : num_actions_(num_actions),
      num_signals_(num_signals),
      window_(window),
      ring_(window),
      count_action_(num_actions, 0),
      count_pair_(static_cast<std::size_t>(num_actions) * num_signals, 0),
      lifetime_(num_actions, 0) {
    if (num_actions < 1 || num_signals < 1) throw std::invalid_argument("bad window dimensions");
    if (window < 1) throw std::invalid_argument("window must be >= 1");
}

void WindowStats::record(int action, int signal) {
    if (action < 0 || action >= num_actions_ || signal < 0 || signal >= num_signals_) {
        throw std::invalid_argument("window record out of range");
    }
    if (size_ == window_) {
        auto [old_action, old_signal] = ring_[head_];
        --count_action_[old_action];
        --count_pair_[old_action * num_signals_ + old_signal];
        ring_[head_] = {action, signal};
        head_ = (head_ + 1) % window_;
    } else {
        ring_[(head_ + size_) % window_] = {action, signal};
        ++size_;
    }
    ++count_action_[action];
    ++count_pair_[action * num_signals_ + signal];
    ++lifetime_[action];
    any_lifetime_ = true;
}

void WindowStats::clear() {
    head_ = 0;
    size_ = 0;
    std::fill(count_action_.begin(), count_action_.end(), 0);
    std::fill(count_pair_.begin(), count_pair_.end(), 0);
}

std::vector<double> WindowStats::transition_estimate(int action) const {
    if (action < 0 || action >= num_actions_) throw std::invalid_argument("action out of range");
    std::vector<double> estimate(num_signals_, 0.0);
    if (!any_lifetime_) {
        std::fill(estimate.begin(), estimate.end(), 1.0 / num_signals_);
        return estimate;
    }
    double denom = static_cast<double>(std::max<long long>(1, count_action_[action]));
    for (int s = 0; s < num_signals_; ++s) {
        estimate[s] = static_cast<double>(count_pair_[action * num_signals_ + s]) / denom;
    }
    return estimate;
}

std::vector<std::pair<int, int>> WindowStats::contents() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(size_);
    for (int i = 0; i < size_; ++i) out.push_back(ring_[(head_ + i) % window_]);
    return out;
}

DelayedRewardStats::DelayedRewardStats(int num_signals)
    : count_(num_signals, 0), sum_(num_signals, 0.0) {}

void DelayedRewardStats::record(int signal, double reward) {
    if (signal < 0 || signal >= static_cast<int>(count_.size())) {
        throw std::invalid_argument("signal out of range");
    }
    ++count_[signal];
    sum_[signal] += reward;
}

long long DelayedRewardStats::total_count() const {
    long long total = 0;
    for (long long c : count_) total += c;
    return total;
}

void ConfidenceConfig::validate() const {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must lie in (0,1)");
    if (horizon < 1 || window < 1 || num_actions < 1 || num_signals < 1) {
        throw std::invalid_argument("confidence config dimensions must be positive");
    }
}

double ConfidenceConfig::reward_bonus_constant() const {
    return 2.0 * std::log(2.0 * horizon * num_signals / delta);
}

double ConfidenceConfig::transition_ball_constant() const {
    return 2.0 * num_signals *
           std::log(static_cast<double>(num_actions) * window * horizon / delta);
}

double ConfidenceConfig::ucb_bonus_constant() const {
    if (ucb_bonus_override > 0.0) return ucb_bonus_override;
    return 2.0 * std::log(2.0 * horizon * num_actions / delta);
}

double reward_ucb(const DelayedRewardStats& stats, const ConfidenceConfig& cfg, int signal) {
    double n = static_cast<double>(std::max<long long>(1, stats.count(signal)));
    double bonus = std::sqrt(cfg.reward_bonus_constant() / n);
    return std::min(1.0, stats.mean(signal) + bonus);
}

double transition_radius(const ConfidenceConfig& cfg, double count) {
    return std::sqrt(cfg.transition_ball_constant() / std::max(1.0, count));
}

}  // namespace nsd
