#pragma once

#include <complex>
#include <cstdint>
#include <deque>
#include <vector>

#include "beamopt/array_beams.hpp"
#include "beamopt/channel.hpp"
#include "beamopt/errors.hpp"

namespace beamopt {

struct RadioConstants {
    double noise_power_dbm = -95.0;
    double sinr_threshold_db = -6.0;

    double noise_linear() const {
        return std::pow(10.0, noise_power_dbm / 10.0);
    }
    double threshold_linear() const {
        return std::pow(10.0, sinr_threshold_db / 10.0);
    }
};

// The joint action: one beam index per sector.
struct BeamAssignment {
    std::vector<int> indices;

    bool operator==(const BeamAssignment& o) const = default;
};

struct ConnectionState {
    std::vector<std::uint8_t> bits;  // length K, values 0/1
};

struct CoverageReport {
    std::vector<double> sinr_db;     // length K
    std::vector<int> serving_sector; // length K
    ConnectionState connection;
    int connected_count = 0;
};

// Frames stacked into one network input.
inline constexpr int kStateFrames = 4;

// Stacked binary frames fed to the Q-network: kStateFrames frames of
// rows x cols, rows = ceil(K/C), newest frame last, zero padding past K.
struct StateTensor {
    int frames = 0;
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> v;  // frames*rows*cols, frame-major

    bool operator==(const StateTensor& o) const = default;
};

// |h^T f|^2 - transpose, not conjugate transpose. With unit-power broadcast
// symbols this is the received signal power on the link.
double rx_power(const std::vector<std::complex<double>>& h,
                const BeamWeights& f);

// Full coverage evaluation straight from a snapshot: serving sector =
// max received power (ties to the lowest sector id), SINR against the sum of
// the other sectors' powers plus noise, connection strictly above threshold.
CoverageReport evaluate(const ScenarioSnapshot& snapshot,
                        const ArrayConfig& array,
                        const std::vector<BeamPool>& pools,
                        const BeamAssignment& assignment,
                        const RadioConstants& constants);

// Precomputed received powers for every (sector, beam, UE) triple of one
// snapshot. Lets the training loop and the exhaustive search reuse the
// channel vectors instead of rebuilding them per assignment.
struct PowerTable {
    int n_sectors = 0;
    int n_beams = 0;  // J, uniform across sectors
    int n_ues = 0;
    std::vector<double> p;  // [m][j][k]

    double at(int m, int j, int k) const {
        return p[(static_cast<size_t>(m) * n_beams + j) * n_ues + k];
    }
};

PowerTable build_power_table(const ScenarioSnapshot& snapshot,
                             const ArrayConfig& array,
                             const std::vector<BeamPool>& pools);

CoverageReport evaluate_with_table(const PowerTable& table,
                                   const BeamAssignment& assignment,
                                   const RadioConstants& constants);

// Reshape the most recent (up to 4) connection vectors into the stacked
// frame tensor; when history is shorter the oldest entry is repeated.
StateTensor encode_state(const std::deque<ConnectionState>& history,
                         int frame_cols);

// sum_k gamma^k r[k]
double discounted_return(const std::vector<double>& rewards, double gamma);

}  // namespace beamopt
