#include "beamopt/coverage.hpp"

#include <cmath>

#include "beamopt/kernels.hpp"

namespace beamopt {

namespace {

constexpr double kSinrFloorDb = -300.0;

double to_db(double linear) {
    if (linear <= 0.0) return kSinrFloorDb;
    double db = 10.0 * std::log10(linear);
    return db < kSinrFloorDb ? kSinrFloorDb : db;
}

void check_assignment(const BeamAssignment& assignment,
                      const std::vector<BeamPool>& pools) {
    if (assignment.indices.size() != pools.size()) {
        throw DimensionMismatch("assignment length does not match sector count");
    }
    for (size_t m = 0; m < pools.size(); ++m) {
        int j = assignment.indices[m];
        if (j < 0 || j >= pools[m].size()) {
            throw IndexError("beam index " + std::to_string(j) +
                             " outside pool of sector " + std::to_string(m));
        }
    }
}

// Shared SINR/connection logic once per-UE powers under the assignment are
// known. powers is [m][k].
CoverageReport report_from_powers(const std::vector<std::vector<double>>& powers,
                                  int n_ues, const RadioConstants& constants) {
    int n_sectors = static_cast<int>(powers.size());
    double noise = constants.noise_linear();
    double thr = constants.threshold_linear();
    CoverageReport rep;
    rep.sinr_db.resize(n_ues);
    rep.serving_sector.resize(n_ues);
    rep.connection.bits.assign(n_ues, 0);
    for (int k = 0; k < n_ues; ++k) {
        int best_m = 0;
        for (int m = 1; m < n_sectors; ++m) {
            if (powers[m][k] > powers[best_m][k]) best_m = m;
        }
        double interference = 0.0;
        for (int m = 0; m < n_sectors; ++m) {
            if (m != best_m) interference += powers[m][k];
        }
        double sinr = powers[best_m][k] / (interference + noise);
        rep.serving_sector[k] = best_m;
        rep.sinr_db[k] = to_db(sinr);
        if (sinr > thr) {
            rep.connection.bits[k] = 1;
            ++rep.connected_count;
        }
    }
    return rep;
}

}  // namespace

double rx_power(const std::vector<std::complex<double>>& h,
                const BeamWeights& f) {
    if (h.size() != f.w.size()) {
        throw DimensionMismatch("channel vector and beam weights differ in length");
    }
    std::complex<double> s = kernels::cdot_t(h.data(), f.w.data(), h.size());
    return std::norm(s);
}

CoverageReport evaluate(const ScenarioSnapshot& snapshot,
                        const ArrayConfig& array,
                        const std::vector<BeamPool>& pools,
                        const BeamAssignment& assignment,
                        const RadioConstants& constants) {
    check_assignment(assignment, pools);
    int n_sectors = static_cast<int>(pools.size());
    int n_ues = static_cast<int>(snapshot.ue_positions.size());
    if (snapshot.links.size() != static_cast<size_t>(n_sectors) * n_ues) {
        throw MissingLink("snapshot does not cover all sector/UE pairs");
    }
    std::vector<std::vector<double>> powers(n_sectors,
                                            std::vector<double>(n_ues));
    for (int m = 0; m < n_sectors; ++m) {
        const BeamWeights& beam = pools[m].beams[assignment.indices[m]];
        for (int k = 0; k < n_ues; ++k) {
            const LinkPaths& link = snapshot.link(m, k, n_ues);
            if (link.sector_id != m || link.ue_id != k) {
                throw MissingLink("link (" + std::to_string(m) + "," +
                                  std::to_string(k) + ") missing or misplaced");
            }
            powers[m][k] = rx_power(channel_vector(array, link), beam);
        }
    }
    return report_from_powers(powers, n_ues, constants);
}

PowerTable build_power_table(const ScenarioSnapshot& snapshot,
                             const ArrayConfig& array,
                             const std::vector<BeamPool>& pools) {
    int n_sectors = static_cast<int>(pools.size());
    if (n_sectors == 0) throw DimensionMismatch("no sector pools");
    int n_beams = pools[0].size();
    for (const auto& pool : pools) {
        if (pool.size() != n_beams) {
            throw DimensionMismatch("power table requires equal pool sizes");
        }
    }
    int n_ues = static_cast<int>(snapshot.ue_positions.size());
    if (snapshot.links.size() != static_cast<size_t>(n_sectors) * n_ues) {
        throw MissingLink("snapshot does not cover all sector/UE pairs");
    }
    PowerTable table;
    table.n_sectors = n_sectors;
    table.n_beams = n_beams;
    table.n_ues = n_ues;
    table.p.resize(static_cast<size_t>(n_sectors) * n_beams * n_ues);
    for (int m = 0; m < n_sectors; ++m) {
        for (int k = 0; k < n_ues; ++k) {
            const LinkPaths& link = snapshot.link(m, k, n_ues);
            if (link.sector_id != m || link.ue_id != k) {
                throw MissingLink("link (" + std::to_string(m) + "," +
                                  std::to_string(k) + ") missing or misplaced");
            }
            auto h = channel_vector(array, link);
            for (int j = 0; j < n_beams; ++j) {
                table.p[(static_cast<size_t>(m) * n_beams + j) * n_ues + k] =
                    rx_power(h, pools[m].beams[j]);
            }
        }
    }
    return table;
}

CoverageReport evaluate_with_table(const PowerTable& table,
                                   const BeamAssignment& assignment,
                                   const RadioConstants& constants) {
    if (assignment.indices.size() != static_cast<size_t>(table.n_sectors)) {
        throw DimensionMismatch("assignment length does not match sector count");
    }
    std::vector<std::vector<double>> powers(table.n_sectors,
                                            std::vector<double>(table.n_ues));
    for (int m = 0; m < table.n_sectors; ++m) {
        int j = assignment.indices[m];
        if (j < 0 || j >= table.n_beams) {
            throw IndexError("beam index outside pool in assignment");
        }
        for (int k = 0; k < table.n_ues; ++k) {
            powers[m][k] = table.at(m, j, k);
        }
    }
    return report_from_powers(powers, table.n_ues, constants);
}

StateTensor encode_state(const std::deque<ConnectionState>& history,
                         int frame_cols) {
    if (frame_cols < 1) throw ConfigError("frame_cols must be >= 1");
    if (history.empty()) throw EmptyDataset("state history is empty");
    int n_ues = static_cast<int>(history.back().bits.size());
    for (const auto& c : history) {
        if (static_cast<int>(c.bits.size()) != n_ues) {
            throw LengthMismatch("connection vectors in history differ in length");
        }
    }
    constexpr int kFrames = kStateFrames;
    int rows = (n_ues + frame_cols - 1) / frame_cols;
    StateTensor t;
    t.frames = kFrames;
    t.rows = rows;
    t.cols = frame_cols;
    t.v.assign(static_cast<size_t>(kFrames) * rows * frame_cols, 0);
    // newest frame last; short history repeats the oldest entry at the front
    int have = static_cast<int>(history.size());
    for (int f = 0; f < kFrames; ++f) {
        int src = have - kFrames + f;
        if (src < 0) src = 0;
        const ConnectionState& conn = history[src];
        std::uint8_t* frame = t.v.data() + static_cast<size_t>(f) * rows * frame_cols;
        for (int k = 0; k < n_ues; ++k) frame[k] = conn.bits[k];
    }
    return t;
}

double discounted_return(const std::vector<double>& rewards, double gamma) {
    double acc = 0.0;
    double g = 1.0;
    for (double r : rewards) {
        acc += g * r;
        g *= gamma;
    }
    return acc;
}

}  // namespace beamopt
