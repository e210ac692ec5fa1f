#include <vector>

#include <doctest.h>

#include "beamopt/coverage.hpp"
#include "beamopt/errors.hpp"
#include "beamopt/oracle.hpp"
#include "beamopt/rng.hpp"

using namespace beamopt;

namespace {

// Enumerate assignments recursively, independent of the production search.
// Strictly-greater comparison in lexicographic visit order reproduces the
// first-maximizer tie rule by construction.
void brute_recurse(const PowerTable& table, const RadioConstants& radio,
                   std::vector<int>& partial, int m, int* best_reward,
                   std::vector<int>* best) {
    if (m == table.n_sectors) {
        auto rep = evaluate_with_table(table, BeamAssignment{partial}, radio);
        if (rep.connected_count > *best_reward) {
            *best_reward = rep.connected_count;
            *best = partial;
        }
        return;
    }
    for (int j = 0; j < table.n_beams; ++j) {
        partial.push_back(j);
        brute_recurse(table, radio, partial, m + 1, best_reward, best);
        partial.pop_back();
    }
}

PowerTable random_table(int m, int j, int k, SeededRng& rng) {
    PowerTable t;
    t.n_sectors = m;
    t.n_beams = j;
    t.n_ues = k;
    t.p.resize(static_cast<size_t>(m) * j * k);
    for (auto& p : t.p) p = rng.uniform_range(0.0, 3.0);
    return t;
}

}  // namespace

TEST_CASE("two-action search picks the higher reward") {
    // M=1, J=2, K=10: beam 0 connects all ten UEs, beam 1 only seven.
    PowerTable table;
    table.n_sectors = 1;
    table.n_beams = 2;
    table.n_ues = 10;
    table.p.assign(20, 0.0);
    for (int k = 0; k < 10; ++k) table.p[k] = 4.0;       // beam 0
    for (int k = 0; k < 7; ++k) table.p[10 + k] = 4.0;   // beam 1
    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = 0.0;

    auto r = exhaustive_best_with_table(table, radio);
    CHECK(r.best_assignment.indices == std::vector<int>{0});
    CHECK(r.best_reward == 10);
}

TEST_CASE("reward ties resolve to the lexicographically smallest assignment") {
    PowerTable table;
    table.n_sectors = 1;
    table.n_beams = 3;
    table.n_ues = 4;
    table.p.assign(12, 4.0);  // every beam connects everyone
    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = 0.0;
    auto r = exhaustive_best_with_table(table, radio);
    CHECK(r.best_assignment.indices == std::vector<int>{0});
    CHECK(r.best_reward == 4);
}

TEST_CASE("decoupled sectors factor into independent per-sector maxima") {
    // Two sectors whose powers never overlap on the same UE: sector 0 only
    // reaches UEs 0..3, sector 1 only UEs 4..7. Joint search must agree with
    // two single-sector searches.
    const int m = 2, j = 2, k = 8;
    PowerTable joint;
    joint.n_sectors = m;
    joint.n_beams = j;
    joint.n_ues = k;
    joint.p.assign(static_cast<size_t>(m) * j * k, 0.0);
    auto set = [&](int mm, int jj, int kk, double v) {
        joint.p[(static_cast<size_t>(mm) * j + jj) * k + kk] = v;
    };
    // Sector 0: beam 1 connects 4 of its UEs, beam 0 connects 2.
    for (int u = 0; u < 4; ++u) set(0, 1, u, 4.0);
    for (int u = 0; u < 2; ++u) set(0, 0, u, 4.0);
    // Sector 1: beam 0 connects 3 of its UEs, beam 1 connects 1.
    for (int u = 4; u < 7; ++u) set(1, 0, u, 4.0);
    set(1, 1, 4, 4.0);

    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = 0.0;

    auto r = exhaustive_best_with_table(joint, radio);
    CHECK(r.best_assignment.indices == std::vector<int>{1, 0});
    CHECK(r.best_reward == 7);

    // Independent single-sector searches over each sector's private UEs.
    for (int mm = 0; mm < 2; ++mm) {
        PowerTable solo;
        solo.n_sectors = 1;
        solo.n_beams = j;
        solo.n_ues = k;
        solo.p.assign(static_cast<size_t>(j) * k, 0.0);
        for (int jj = 0; jj < j; ++jj) {
            for (int kk = 0; kk < k; ++kk) {
                solo.p[static_cast<size_t>(jj) * k + kk] =
                    joint.p[(static_cast<size_t>(mm) * j + jj) * k + kk];
            }
        }
        auto solo_r = exhaustive_best_with_table(solo, radio);
        CHECK(solo_r.best_assignment.indices[0] ==
              r.best_assignment.indices[mm]);
    }
}

TEST_CASE("single-beam pools leave exactly one assignment") {
    PowerTable table;
    table.n_sectors = 2;
    table.n_beams = 1;
    table.n_ues = 3;
    table.p = {4.0, 0.0, 0.0, 0.0, 4.0, 0.0};
    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = -20.0;
    auto r = exhaustive_best_with_table(table, radio, true);
    CHECK(r.best_assignment.indices == std::vector<int>{0, 0});
    CHECK(r.per_assignment_rewards.size() == 1);
}

TEST_CASE("audit map confirms the reported optimum dominates") {
    SeededRng rng(31);
    auto table = random_table(2, 3, 12, rng);
    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = -3.0;
    auto r = exhaustive_best_with_table(table, radio, true);
    CHECK(r.per_assignment_rewards.size() == 9);
    bool found_best = false;
    for (const auto& [assignment, reward] : r.per_assignment_rewards) {
        CHECK(reward <= r.best_reward);
        if (assignment == r.best_assignment.indices) {
            CHECK(reward == r.best_reward);
            found_best = true;
        }
    }
    CHECK(found_best);
}

TEST_CASE("search agrees with an independent brute-force enumeration") {
    SeededRng rng(20240519);
    for (int trial = 0; trial < 8; ++trial) {
        int m = 1 + static_cast<int>(rng.uniform_int(0, 1));
        int j = 2 + static_cast<int>(rng.uniform_int(0, 1));
        int k = 5 + static_cast<int>(rng.uniform_int(0, 25));
        auto table = random_table(m, j, k, rng);
        RadioConstants radio;
        radio.noise_power_dbm = 0.0;
        radio.sinr_threshold_db = -3.0;

        auto fast = exhaustive_best_with_table(table, radio);
        int best_reward = -1;
        std::vector<int> best;
        std::vector<int> partial;
        brute_recurse(table, radio, partial, 0, &best_reward, &best);
        CHECK(fast.best_reward == best_reward);
        CHECK(fast.best_assignment.indices == best);
    }
}

TEST_CASE("search is deterministic over repeated invocations") {
    SeededRng rng(8);
    auto table = random_table(2, 2, 20, rng);
    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = -6.0;
    auto a = exhaustive_best_with_table(table, radio);
    auto b = exhaustive_best_with_table(table, radio);
    CHECK(a.best_assignment == b.best_assignment);
    CHECK(a.best_reward == b.best_reward);
}

TEST_CASE("assignment spaces beyond the budget are refused") {
    PowerTable table;
    table.n_sectors = 20;  // 2^20 > 1e6
    table.n_beams = 2;
    table.n_ues = 1;
    table.p.assign(40, 0.0);
    RadioConstants radio;
    CHECK_THROWS_AS(exhaustive_best_with_table(table, radio), BudgetExceeded);
}

TEST_CASE("snapshot-level search matches the table-level search") {
    ArrayConfig cfg;
    cfg.n_elev = 1;
    cfg.n_az = 1;
    PoolEntry e;
    e.spec = {180.0, 180.0, 0.0};
    e.explicit_w = {{1.0, 0.0}};
    auto pool = build_pool(cfg, std::vector<PoolEntry>{e});

    ScenarioSnapshot snap;
    snap.scenario_id = "x";
    snap.ue_positions.resize(2);
    snap.links.resize(2);
    snap.links[0].sector_id = 0;
    snap.links[0].ue_id = 0;
    snap.links[0].paths = {{0.0, 0.0, 0.0, 0.0}};
    snap.links[1].sector_id = 0;
    snap.links[1].ue_id = 1;
    snap.links[1].paths = {{0.0, 0.0, 40.0, 0.0}};

    RadioConstants radio;
    radio.noise_power_dbm = 0.0;
    radio.sinr_threshold_db = -6.0;

    auto direct = exhaustive_best(snap, cfg, {pool}, radio);
    auto table = build_power_table(snap, cfg, {pool});
    auto tabled = exhaustive_best_with_table(table, radio);
    CHECK(direct.best_assignment == tabled.best_assignment);
    CHECK(direct.best_reward == tabled.best_reward);
    CHECK(direct.best_reward == 1);
}
