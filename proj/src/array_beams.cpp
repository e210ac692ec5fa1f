#include "beamopt/array_beams.hpp"

#include <cmath>

#include "beamopt/kernels.hpp"

namespace beamopt {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
}

void ArrayConfig::validate() const {
    if (n_elev < 1 || n_az < 1) {
        throw DegenerateGeometry("array needs at least one element per axis");
    }
    if (!(d_elev > 0.0) || !(d_az > 0.0)) {
        throw DegenerateGeometry("element spacing must be positive");
    }
}

std::vector<std::complex<double>> steering_vector(const ArrayConfig& config,
                                                  double az_deg,
                                                  double elev_deg) {
    config.validate();
    double se = std::sin(elev_deg * kDegToRad);
    double sa_ce = std::sin(az_deg * kDegToRad) * std::cos(elev_deg * kDegToRad);
    std::vector<std::complex<double>> a(config.n_elements());
    for (int n2 = 0; n2 < config.n_az; ++n2) {
        for (int n1 = 0; n1 < config.n_elev; ++n1) {
            double phase =
                2.0 * M_PI * (n1 * config.d_elev * se + n2 * config.d_az * sa_ce);
            a[n2 * config.n_elev + n1] = {std::cos(phase), std::sin(phase)};
        }
    }
    return a;
}

double uniform_line_width_3db(int n, double d_wl) {
    if (n <= 1) return 180.0;
    // |sin(n*psi)/(n*sin(psi))| falls monotonically from 1 to 0 on
    // (0, pi/n); bisect for the half-power point, then map psi = pi*d*sin(t)
    // back to angle.
    const double target = std::sqrt(0.5);
    double lo = 0.0, hi = M_PI / n;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = std::sin(mid);
        double af = s == 0.0 ? 1.0 : std::sin(n * mid) / (n * s);
        if (af > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double psi_half = 0.5 * (lo + hi);
    double u = psi_half / (M_PI * d_wl);  // sin of the half-power angle
    if (u >= 1.0) return 180.0;
    return 2.0 * std::asin(u) / kDegToRad;
}

namespace {

// Fewest contiguous centered elements whose broadside width still fits
// within the requested one.
int select_aperture(int n_total, double d_wl, double requested_deg,
                    const char* axis) {
    if (requested_deg > 180.0) {
        throw UnachievableBeamwidth(std::string(axis) +
                                    " beam-width wider than a single element "
                                    "(max 180 deg)");
    }
    if (!(requested_deg > 0.0)) {
        throw UnachievableBeamwidth(std::string(axis) +
                                    " beam-width must be positive");
    }
    for (int n = 1; n <= n_total; ++n) {
        if (uniform_line_width_3db(n, d_wl) <= requested_deg) return n;
    }
    throw UnachievableBeamwidth(
        std::string(axis) + " beam-width narrower than the full aperture");
}

}  // namespace

BeamWeights synthesize_beam(const ArrayConfig& config, const BeamSpec& spec) {
    config.validate();
    if (spec.etilt_deg < -90.0 || spec.etilt_deg > 90.0) {
        throw UnachievableBeamwidth("etilt outside [-90, 90] deg");
    }
    int active_elev =
        select_aperture(config.n_elev, config.d_elev, spec.elev_bw_deg, "elevation");
    int active_az =
        select_aperture(config.n_az, config.d_az, spec.az_bw_deg, "azimuth");
    int elev0 = (config.n_elev - active_elev) / 2;
    int az0 = (config.n_az - active_az) / 2;

    auto a = steering_vector(config, 0.0, spec.etilt_deg);
    BeamWeights out;
    out.spec = spec;
    out.w.assign(config.n_elements(), {0.0, 0.0});
    for (int n2 = az0; n2 < az0 + active_az; ++n2) {
        for (int n1 = elev0; n1 < elev0 + active_elev; ++n1) {
            int idx = n2 * config.n_elev + n1;
            out.w[idx] = std::conj(a[idx]);
        }
    }
    double norm = std::sqrt(static_cast<double>(active_elev * active_az));
    for (auto& c : out.w) c /= norm;
    return out;
}

double beam_gain_db(const ArrayConfig& config, const BeamWeights& w,
                    double az_deg, double elev_deg) {
    if (static_cast<int>(w.w.size()) != config.n_elements()) {
        throw DimensionMismatch("beam weights do not match array size");
    }
    auto a = steering_vector(config, az_deg, elev_deg);
    std::complex<double> s = kernels::cdot_t(a.data(), w.w.data(), a.size());
    double p = std::norm(s);
    if (p <= 0.0) return kPatternFloorDb;
    double db = 10.0 * std::log10(p);
    return db < kPatternFloorDb ? kPatternFloorDb : db;
}

BeamPool build_pool(const ArrayConfig& config,
                    const std::vector<BeamSpec>& specs) {
    std::vector<PoolEntry> entries(specs.size());
    for (size_t i = 0; i < specs.size(); ++i) entries[i].spec = specs[i];
    return build_pool(config, entries);
}

BeamPool build_pool(const ArrayConfig& config,
                    const std::vector<PoolEntry>& entries) {
    if (entries.empty()) throw ConfigError("beam pool needs at least one spec");
    BeamPool pool;
    pool.beams.reserve(entries.size());
    for (size_t j = 0; j < entries.size(); ++j) {
        BeamWeights bw;
        if (!entries[j].explicit_w.empty()) {
            if (static_cast<int>(entries[j].explicit_w.size()) !=
                config.n_elements()) {
                throw ConfigError("explicit beam weights have wrong length");
            }
            double norm2 = 0.0;
            for (const auto& c : entries[j].explicit_w) norm2 += std::norm(c);
            if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) {
                throw ConfigError("explicit beam weights are not unit-norm");
            }
            bw.w = entries[j].explicit_w;
            bw.spec = entries[j].spec;
        } else {
            bw = synthesize_beam(config, entries[j].spec);
        }
        bw.index = static_cast<int>(j);
        pool.beams.push_back(std::move(bw));
    }
    return pool;
}

}  // namespace beamopt
