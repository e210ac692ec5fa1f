#pragma once

#include <complex>
#include <string>
#include <vector>

#include "beamopt/errors.hpp"

namespace beamopt {

// Planar sector array, n_elev rows by n_az columns of isotropic elements.
// Spacings are in wavelengths. Weight vectors are elevation-major: element
// (n1, n2) sits at index n2*n_elev + n1, n1 being the elevation (row) index.
struct ArrayConfig {
    int n_elev = 4;
    int n_az = 4;
    double d_elev = 0.5;
    double d_az = 1.48;
    double height_m = 35.0;

    int n_elements() const { return n_elev * n_az; }
    void validate() const;
};

// Requested beam shape: elevation/azimuth 3 dB widths and electrical tilt.
// etilt_deg is the beam's elevation pointing angle; negative points below
// the horizon.
struct BeamSpec {
    double elev_bw_deg = 0.0;
    double az_bw_deg = 0.0;
    double etilt_deg = 0.0;
};

struct BeamWeights {
    std::vector<std::complex<double>> w;  // length N, unit Euclidean norm
    BeamSpec spec;
    int index = -1;  // position in the pool; the RL action label
};

struct BeamPool {
    std::vector<BeamWeights> beams;
    int size() const { return static_cast<int>(beams.size()); }
};

// Narrowband array response for a plane wave toward (az, elev), degrees.
// Element (n1, n2) gets phase 2*pi*(n1*d_elev*sin(elev) +
// n2*d_az*sin(az)*cos(elev)).
std::vector<std::complex<double>> steering_vector(const ArrayConfig& config,
                                                  double az_deg,
                                                  double elev_deg);

// Broadside 3 dB width (degrees) of an n-element uniform line at spacing
// d wavelengths. n = 1 or an array too short to reach the half-power level
// reports 180. Exposed because the aperture-selection rule and its tests
// both consume it.
double uniform_line_width_3db(int n, double d_wl);

// Beam-width control by aperture selection: per axis, activate the smallest
// centered contiguous block of rows/columns whose broadside 3 dB width does
// not exceed the requested one (i.e. the fewest elements that still make the
// beam no wider than asked). Active elements carry the conjugate of the
// steering vector at (az 0, elev etilt); inactive elements are zero; the
// result is renormalized to unit norm.
// Throws UnachievableBeamwidth when the request is narrower than the full
// aperture provides or wider than a single element (180 deg).
BeamWeights synthesize_beam(const ArrayConfig& config, const BeamSpec& spec);

// 10*log10(|a(az,elev)^T w|^2) with a = steering_vector; the same bilinear
// form as received power, so a unit-gain path from (az, elev) sees exactly
// this gain. Values below the floor clamp to kPatternFloorDb.
inline constexpr double kPatternFloorDb = -300.0;
double beam_gain_db(const ArrayConfig& config, const BeamWeights& w,
                    double az_deg, double elev_deg);

// Pool of J beams in the given order; indices 0..J-1 are assigned here and
// are the action labels everywhere downstream.
BeamPool build_pool(const ArrayConfig& config,
                    const std::vector<BeamSpec>& specs);

// Pool with explicit weight overrides: entries with a non-empty weight list
// use it verbatim (validated for length and unit norm) instead of synthesis.
struct PoolEntry {
    BeamSpec spec;
    std::vector<std::complex<double>> explicit_w;  // empty = synthesize
};
BeamPool build_pool(const ArrayConfig& config,
                    const std::vector<PoolEntry>& entries);

}  // namespace beamopt
