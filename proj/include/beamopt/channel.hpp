#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "beamopt/array_beams.hpp"
#include "beamopt/errors.hpp"
#include "beamopt/rng.hpp"

namespace beamopt {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

// One propagation path from a sector to a UE. Angles are departure angles at
// the sector array; pathloss_db is attenuation (positive).
struct PathRecord {
    double aod_az_deg = 0.0;
    double aod_elev_deg = 0.0;
    double pathloss_db = 0.0;
    double phase_deg = 0.0;
};

// All paths for one (sector, UE) pair. Empty = total blockage, h = 0.
struct LinkPaths {
    int sector_id = 0;
    int ue_id = 0;
    std::vector<PathRecord> paths;
};

// One time step of the environment: where the UEs are and what every link
// looks like. links holds exactly M*K entries, sector-major
// (links[m*K + k] is the pair (m, k)).
struct ScenarioSnapshot {
    long long timestamp = 0;
    std::string scenario_id;
    std::vector<Vec3> ue_positions;  // length K
    std::vector<LinkPaths> links;    // length M*K

    const LinkPaths& link(int m, int k, int K) const {
        return links[static_cast<size_t>(m) * K + k];
    }
};

// Synthetic stand-in for ray-traced data: free-space loss + log-normal
// shadowing on the LoS path, optional blockage, optional NLoS clusters with
// excess loss and randomly perturbed departure angles.
struct SynthChannelParams {
    double carrier_freq_hz = 2.0e9;
    int n_nlos_paths = 0;
    double nlos_excess_loss_db = 20.0;
    double shadowing_sigma_db = 0.0;
    double los_blockage_prob = 0.0;

    void validate() const;
};

// A sector's placement. Boresight azimuth rotates the local frame: departure
// azimuth is measured from the boresight direction in the horizontal plane.
struct SectorGeometry {
    Vec3 position;
    double boresight_az_deg = 0.0;
};

// Free-space path loss 20*log10(4*pi*d*f/c), clamped at 0 dB.
double fspl_db(double distance_m, double freq_hz);

// Departure angles (az from boresight, elev from horizon, degrees) and
// distance from a sector toward a point.
struct Departure {
    double az_deg;
    double elev_deg;
    double distance_m;
};
Departure departure_toward(const SectorGeometry& sector, const Vec3& target);

// Synthesize links for all (sector, UE) pairs, sector-major order. One draw
// sequence per link (blockage coin, shadowing normal, then per-NLoS-path
// draws) keeps the stream layout fixed regardless of parameter values.
std::vector<LinkPaths> synth_links(const std::vector<SectorGeometry>& sectors,
                                   const std::vector<Vec3>& ue_positions,
                                   const SynthChannelParams& params,
                                   SeededRng& rng);

// h = sum_l g_l * steering(aod_l), |g_l| = 10^(-pathloss/20),
// arg(g_l) = phase. Empty path list gives the zero vector.
std::vector<std::complex<double>> channel_vector(const ArrayConfig& config,
                                                 const LinkPaths& link);

// Ray-trace file IO. Format: UTF-8 CSV, header
//   timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,
//   aod_az_deg,aod_elev_deg,pathloss_db,phase_deg
// one row per path, rows grouped by timestamp. Blocked links simply have no
// rows, so positions of fully blocked UEs come from the companion location
// file (header: timestamp,ue_id,x,y,z) when one is supplied.
std::vector<ScenarioSnapshot> load_raytrace(std::istream& in, int n_sectors,
                                            int n_ues);
void apply_locations(std::istream& in, std::vector<ScenarioSnapshot>& snaps);

void write_raytrace(std::ostream& out,
                    const std::vector<ScenarioSnapshot>& snaps);
void write_locations(std::ostream& out,
                     const std::vector<ScenarioSnapshot>& snaps);

}  // namespace beamopt
