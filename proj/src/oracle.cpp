#include "beamopt/oracle.hpp"

#include <cmath>
#include <functional>

namespace beamopt {

namespace {

long long assignment_count(int n_sectors, int n_beams) {
    long long total = 1;
    for (int m = 0; m < n_sectors; ++m) {
        total *= n_beams;
        if (total > kOracleBudget) return total;
    }
    return total;
}

// Walks all assignments in lexicographic order (last sector fastest) and
// keeps the first maximizer.
OracleResult enumerate(int n_sectors, int n_beams,
                       const std::function<int(const BeamAssignment&)>& reward,
                       bool audit) {
    if (n_sectors < 1 || n_beams < 1) {
        throw ConfigError("oracle needs at least one sector and one beam");
    }
    if (assignment_count(n_sectors, n_beams) > kOracleBudget) {
        throw BudgetExceeded("assignment space exceeds enumeration budget");
    }
    OracleResult result;
    BeamAssignment current;
    current.indices.assign(n_sectors, 0);
    bool first = true;
    while (true) {
        int r = reward(current);
        if (audit) result.per_assignment_rewards[current.indices] = r;
        if (first || r > result.best_reward) {
            result.best_reward = r;
            result.best_assignment = current;
            first = false;
        }
        int pos = n_sectors - 1;
        while (pos >= 0 && current.indices[pos] == n_beams - 1) {
            current.indices[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++current.indices[pos];
    }
    return result;
}

}  // namespace

OracleResult exhaustive_best(const ScenarioSnapshot& snapshot,
                             const ArrayConfig& array,
                             const std::vector<BeamPool>& pools,
                             const RadioConstants& constants, bool audit) {
    if (pools.empty()) throw ConfigError("oracle needs at least one sector pool");
    int n_beams = pools[0].size();
    for (const auto& pool : pools) {
        if (pool.size() != n_beams) {
            throw DimensionMismatch("oracle requires equal pool sizes");
        }
    }
    return enumerate(
        static_cast<int>(pools.size()), n_beams,
        [&](const BeamAssignment& a) {
            return evaluate(snapshot, array, pools, a, constants)
                .connected_count;
        },
        audit);
}

OracleResult exhaustive_best_with_table(const PowerTable& table,
                                        const RadioConstants& constants,
                                        bool audit) {
    return enumerate(
        table.n_sectors, table.n_beams,
        [&](const BeamAssignment& a) {
            return evaluate_with_table(table, a, constants).connected_count;
        },
        audit);
}

}  // namespace beamopt
