#pragma once

#include <queue>
#include <vector>

#include "nsd/core.hpp"
#include "nsd/rng.hpp"

namespace nsd {

// Change rounds plus the cyclic shift drawn at each change. Arm i's
// transition row moves to arm (i + r) mod K at a shift of r.
struct SwitchSchedule {
    std::vector<int> change_rounds;
    std::vector<int> shift_draws;  // each in {1, ..., K-1}

    // Draws one shift per change round from `rng`.
    static SwitchSchedule draw(const std::vector<int>& change_rounds, int num_actions, Rng& rng);

    void validate(int num_actions) const;
};

// Expands a single-segment instance into a switching one: segment k applies
// the composition of the first k shifts to the base transition rows (and to
// the mu rows when a mixture is present). theta is never changed.
NsdInstance generate_shifted_instance(const NsdInstance& base, const SwitchSchedule& schedule);

struct TrajectoryRound {
    int round = 0;
    int action = 0;
    int signal = 0;
    double per_round_regret = 0.0;
    std::vector<DeliveredReward> delivered;
};

// One live trajectory of the process: switching transitions, signal draws,
// delayed reward delivery. Per-step draw order (relevant when replaying the
// RNG stream externally): mixture branch (only when a mixture is configured),
// then signal, then reward, then delay (only when the delay is random).
class Environment {
public:
    Environment(NsdInstance instance, std::uint64_t seed);

    // Plays one round. Returns the immediate signal plus every reward whose
    // delay expires this round, records the instantaneous regret, and
    // advances the clock. Throws std::logic_error past the horizon.
    RoundFeedback step(int action);

    // Flushes rewards still pending after the horizon, in due order.
    // Idempotent; throws std::logic_error if the run is not finished.
    std::vector<DeliveredReward> drain_remaining();

    int current_round() const { return round_; }
    bool finished() const { return round_ > instance_.horizon; }
    const NsdInstance& instance() const { return instance_; }
    const RegretTrace& trace() const { return trace_; }
    const std::vector<TrajectoryRound>& trajectory() const { return trajectory_; }

private:
    struct Pending {
        int due_round;
        int origin_round;
        int signal;
        double reward;
    };
    struct PendingLater {
        bool operator()(const Pending& a, const Pending& b) const {
            if (a.due_round != b.due_round) return a.due_round > b.due_round;
            return a.origin_round > b.origin_round;
        }
    };

    NsdInstance instance_;
    Rng rng_;
    int round_ = 1;
    std::priority_queue<Pending, std::vector<Pending>, PendingLater> pending_;
    RegretTrace trace_;
    std::vector<TrajectoryRound> trajectory_;
};

}  // namespace nsd
