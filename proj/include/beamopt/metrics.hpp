#pragma once

#include <vector>

#include "beamopt/errors.hpp"

namespace beamopt {

// One aggregation window of agent-vs-oracle history. Actions are joint
// assignments (length M per step).
struct TraceWindow {
    std::vector<int> agent_rewards;
    std::vector<int> oracle_rewards;
    std::vector<std::vector<int>> agent_actions;
    std::vector<std::vector<int>> oracle_actions;

    size_t size() const { return agent_rewards.size(); }
    void validate() const;
};

// (1/N') * sum (R_agent - R_oracle)^2
double asd(const TraceWindow& window);

// Strict action mismatch: fraction of steps where the chosen assignment
// differs from the oracle's. per-sector variant returns one fraction per
// sector (component-wise comparison).
double am_joint(const TraceWindow& window);
std::vector<double> am_per_sector(const TraceWindow& window);

// Reward-equivalent mismatch: a step counts as matched when the action
// matches or the agent's reward equals the oracle reward (the honest
// convergence measure when several assignments tie at the optimum).
double am_joint_reward_eq(const TraceWindow& window);
std::vector<double> am_per_sector_reward_eq(const TraceWindow& window);

struct ErrorBand {
    double mean = 0.0;
    double max_abs_dev = 0.0;
};

// Mean and max |x - mean| over one window of values.
ErrorBand error_band(const std::vector<double>& values);

}  // namespace beamopt
