#pragma once

#include <string>
#include <vector>

#include "beamopt/channel.hpp"
#include "beamopt/errors.hpp"
#include "beamopt/rng.hpp"

namespace beamopt {

// A scenario is a box the UE population occupies; the id doubles as the
// label in traces. Bounds are fully resolved here (config fills unspecified
// axes from the cell extent).
struct ScenarioDef {
    std::string id;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double z_min = 0.0, z_max = 0.0;

    void validate() const;
    bool contains(const Vec3& p) const;
};

struct PeriodicSchedule {
    int period_steps = 8;
    std::vector<std::string> cycle;

    void validate() const;
};

struct MarkovSchedule {
    std::vector<std::string> states;
    std::vector<std::vector<double>> transition;  // row-stochastic
    std::string initial;

    void validate() const;
    int state_index(const std::string& id) const;
};

// scenario_cycle[floor(t / period) mod cycle length]
const std::string& scenario_at(const PeriodicSchedule& schedule, long long t);

// One chain transition from the given state; draws exactly one uniform.
const std::string& advance(const MarkovSchedule& schedule,
                           const std::string& current, SeededRng& rng);

// K i.i.d. uniform positions in the scenario box. Draw order is x, y, z per
// UE so streams stay stable under K changes only at the tail.
std::vector<Vec3> sample_positions(const ScenarioDef& scenario, int n_ues,
                                   SeededRng& rng);

}  // namespace beamopt
