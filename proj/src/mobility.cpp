#include "beamopt/mobility.hpp"

#include <cmath>

namespace beamopt {

void ScenarioDef::validate() const {
    if (id.empty()) throw ConfigError("scenario id must not be empty");
    if (x_min > x_max || y_min > y_max || z_min > z_max) {
        throw EmptyRegion("scenario '" + id + "' has contradictory bounds");
    }
}

bool ScenarioDef::contains(const Vec3& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max &&
           p.z >= z_min && p.z <= z_max;
}

void PeriodicSchedule::validate() const {
    if (period_steps < 1) throw ConfigError("period_steps must be >= 1");
    if (cycle.empty()) throw ConfigError("periodic cycle must not be empty");
}

void MarkovSchedule::validate() const {
    size_t n = states.size();
    if (n == 0) throw ConfigError("markov schedule needs at least one state");
    if (transition.size() != n) {
        throw ConfigError("markov transition matrix must be SxS");
    }
    for (size_t i = 0; i < n; ++i) {
        if (transition[i].size() != n) {
            throw ConfigError("markov transition matrix must be SxS");
        }
        double row_sum = 0.0;
        for (double p : transition[i]) {
            if (p < 0.0 || p > 1.0) {
                throw ConfigError("markov transition entries must be in [0,1]");
            }
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > 1e-12) {
            throw ConfigError("markov transition row " + std::to_string(i) +
                              " does not sum to 1");
        }
    }
    state_index(initial);  // throws if unknown
}

int MarkovSchedule::state_index(const std::string& id) const {
    for (size_t i = 0; i < states.size(); ++i) {
        if (states[i] == id) return static_cast<int>(i);
    }
    throw ConfigError("unknown markov state '" + id + "'");
}

const std::string& scenario_at(const PeriodicSchedule& schedule, long long t) {
    schedule.validate();
    if (t < 0) throw IndexError("negative time step");
    size_t block = static_cast<size_t>(t / schedule.period_steps);
    return schedule.cycle[block % schedule.cycle.size()];
}

const std::string& advance(const MarkovSchedule& schedule,
                           const std::string& current, SeededRng& rng) {
    int row = schedule.state_index(current);
    double u = rng.uniform_double();
    double acc = 0.0;
    size_t n = schedule.states.size();
    for (size_t j = 0; j < n; ++j) {
        acc += schedule.transition[row][j];
        if (u < acc) return schedule.states[j];
    }
    return schedule.states[n - 1];  // u landed on accumulated rounding slack
}

std::vector<Vec3> sample_positions(const ScenarioDef& scenario, int n_ues,
                                   SeededRng& rng) {
    scenario.validate();
    if (n_ues < 1) throw ConfigError("need at least one UE");
    std::vector<Vec3> out(n_ues);
    for (int k = 0; k < n_ues; ++k) {
        out[k].x = rng.uniform_range(scenario.x_min, scenario.x_max);
        out[k].y = rng.uniform_range(scenario.y_min, scenario.y_max);
        out[k].z = rng.uniform_range(scenario.z_min, scenario.z_max);
    }
    return out;
}

}  // namespace beamopt
