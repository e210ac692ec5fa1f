#include "beamopt/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace beamopt {

void TraceWindow::validate() const {
    size_t n = agent_rewards.size();
    if (n == 0) throw EmptyWindow("metrics window is empty");
    if (oracle_rewards.size() != n || agent_actions.size() != n ||
        oracle_actions.size() != n) {
        throw LengthMismatch("trace window sequences differ in length");
    }
    size_t m = agent_actions.front().size();
    for (size_t i = 0; i < n; ++i) {
        if (agent_actions[i].size() != m || oracle_actions[i].size() != m) {
            throw LengthMismatch("assignment width varies within window");
        }
    }
}

double asd(const TraceWindow& window) {
    window.validate();
    double acc = 0.0;
    for (size_t i = 0; i < window.size(); ++i) {
        double d = static_cast<double>(window.agent_rewards[i]) -
                   static_cast<double>(window.oracle_rewards[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(window.size());
}

double am_joint(const TraceWindow& window) {
    window.validate();
    size_t mismatches = 0;
    for (size_t i = 0; i < window.size(); ++i) {
        if (window.agent_actions[i] != window.oracle_actions[i]) ++mismatches;
    }
    return static_cast<double>(mismatches) / static_cast<double>(window.size());
}

std::vector<double> am_per_sector(const TraceWindow& window) {
    window.validate();
    size_t n_sectors = window.agent_actions.front().size();
    std::vector<double> out(n_sectors, 0.0);
    for (size_t i = 0; i < window.size(); ++i) {
        for (size_t m = 0; m < n_sectors; ++m) {
            if (window.agent_actions[i][m] != window.oracle_actions[i][m]) {
                out[m] += 1.0;
            }
        }
    }
    for (double& v : out) v /= static_cast<double>(window.size());
    return out;
}

double am_joint_reward_eq(const TraceWindow& window) {
    window.validate();
    size_t mismatches = 0;
    for (size_t i = 0; i < window.size(); ++i) {
        bool matched = window.agent_actions[i] == window.oracle_actions[i] ||
                       window.agent_rewards[i] == window.oracle_rewards[i];
        if (!matched) ++mismatches;
    }
    return static_cast<double>(mismatches) / static_cast<double>(window.size());
}

std::vector<double> am_per_sector_reward_eq(const TraceWindow& window) {
    window.validate();
    size_t n_sectors = window.agent_actions.front().size();
    std::vector<double> out(n_sectors, 0.0);
    for (size_t i = 0; i < window.size(); ++i) {
        bool reward_match =
            window.agent_rewards[i] == window.oracle_rewards[i];
        for (size_t m = 0; m < n_sectors; ++m) {
            bool matched = reward_match ||
                           window.agent_actions[i][m] == window.oracle_actions[i][m];
            if (!matched) out[m] += 1.0;
        }
    }
    for (double& v : out) v /= static_cast<double>(window.size());
    return out;
}

ErrorBand error_band(const std::vector<double>& values) {
    if (values.empty()) throw EmptyWindow("error_band needs at least one value");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double dev = 0.0;
    for (double v : values) dev = std::max(dev, std::abs(v - mean));
    return {mean, dev};
}

}  // namespace beamopt
