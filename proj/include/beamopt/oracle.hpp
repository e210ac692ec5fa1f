#pragma once

#include <map>
#include <vector>

#include "beamopt/coverage.hpp"

namespace beamopt {

struct OracleResult {
    BeamAssignment best_assignment;
    int best_reward = 0;
    // Filled when audit is requested: reward for every enumerated assignment.
    std::map<std::vector<int>, int> per_assignment_rewards;
};

// Exhaustive search over all J^M assignments in lexicographic order; ties go
// to the first (lexicographically smallest) maximizer. Refuses instances with
// more than kOracleBudget assignments.
inline constexpr long long kOracleBudget = 1000000;

OracleResult exhaustive_best(const ScenarioSnapshot& snapshot,
                             const ArrayConfig& array,
                             const std::vector<BeamPool>& pools,
                             const RadioConstants& constants,
                             bool audit = false);

// Same search on a prebuilt power table (the training loop's path; avoids
// rebuilding channel vectors per assignment).
OracleResult exhaustive_best_with_table(const PowerTable& table,
                                        const RadioConstants& constants,
                                        bool audit = false);

}  // namespace beamopt
