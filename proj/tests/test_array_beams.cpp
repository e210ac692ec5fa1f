#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "beamopt/array_beams.hpp"
#include "beamopt/errors.hpp"

using namespace beamopt;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scan a pattern cut and return the angle of the gain maximum.
double elevation_peak(const ArrayConfig& cfg, const BeamWeights& w,
                      double step_deg) {
    double best_angle = -90.0;
    double best_gain = -1e30;
    for (double e = -90.0; e <= 90.0 + 1e-9; e += step_deg) {
        double g = beam_gain_db(cfg, w, 0.0, e);
        if (g > best_gain) {
            best_gain = g;
            best_angle = e;
        }
    }
    return best_angle;
}

// 3 dB width of the azimuth cut at elev 0, measured by first crossings
// around the peak.
double measured_az_width(const ArrayConfig& cfg, const BeamWeights& w) {
    const double step = 0.01;
    double peak = beam_gain_db(cfg, w, 0.0, 0.0);
    double lo = -90.0, hi = 90.0;
    for (double a = 0.0; a >= -90.0; a -= step) {
        if (beam_gain_db(cfg, w, a, 0.0) < peak - 3.0) {
            lo = a;
            break;
        }
    }
    for (double a = 0.0; a <= 90.0; a += step) {
        if (beam_gain_db(cfg, w, a, 0.0) < peak - 3.0) {
            hi = a;
            break;
        }
    }
    return hi - lo;
}

}  // namespace

TEST_CASE("steering vector is all ones at broadside") {
    ArrayConfig cfg;  // 4x4 defaults
    auto a = steering_vector(cfg, 0.0, 0.0);
    REQUIRE(a.size() == 16);
    for (const auto& e : a) {
        CHECK(e.real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(e.imag() == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("mirrored azimuth conjugates the steering vector") {
    ArrayConfig cfg;
    auto plus = steering_vector(cfg, 23.0, 0.0);
    auto minus = steering_vector(cfg, -23.0, 0.0);
    REQUIRE(plus.size() == minus.size());
    for (size_t i = 0; i < plus.size(); ++i) {
        CHECK(plus[i].real() == doctest::Approx(minus[i].real()).epsilon(1e-12));
        CHECK(plus[i].imag() ==
              doctest::Approx(-minus[i].imag()).epsilon(1e-12));
    }
}

TEST_CASE("two-element column at 30 deg elevation has phases 0 and pi/2") {
    ArrayConfig cfg;
    cfg.n_elev = 2;
    cfg.n_az = 1;
    cfg.d_elev = 0.5;
    auto a = steering_vector(cfg, 0.0, 30.0);
    REQUIRE(a.size() == 2);
    CHECK(std::arg(a[0]) == doctest::Approx(0.0).epsilon(1e-12));
    // 2*pi * 1 * 0.5 * sin(30 deg) = pi/2
    CHECK(std::arg(a[1]) == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("full-aperture beam is the normalized conjugate of broadside") {
    ArrayConfig cfg;
    BeamSpec spec;
    spec.elev_bw_deg = uniform_line_width_3db(cfg.n_elev, cfg.d_elev);
    spec.az_bw_deg = uniform_line_width_3db(cfg.n_az, cfg.d_az);
    spec.etilt_deg = 0.0;
    auto beam = synthesize_beam(cfg, spec);
    REQUIRE(beam.w.size() == 16);
    for (const auto& e : beam.w) {
        CHECK(e.real() == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(e.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
    // Matched filter: boresight gain is N = 16.
    CHECK(beam_gain_db(cfg, beam, 0.0, 0.0) ==
          doctest::Approx(10.0 * std::log10(16.0)).epsilon(1e-9));
}

TEST_CASE("electrical tilt moves the elevation peak") {
    ArrayConfig cfg;
    for (double tilt : {-10.0, -5.0, 0.0, 5.0, 10.0}) {
        BeamSpec spec;
        spec.elev_bw_deg = uniform_line_width_3db(cfg.n_elev, cfg.d_elev);
        spec.az_bw_deg = uniform_line_width_3db(cfg.n_az, cfg.d_az);
        spec.etilt_deg = tilt;
        auto beam = synthesize_beam(cfg, spec);
        CHECK(std::abs(elevation_peak(cfg, beam, 0.25) - tilt) <= 0.25 + 1e-9);
    }
}

TEST_CASE("halving the azimuth aperture roughly doubles the azimuth width") {
    ArrayConfig cfg;
    cfg.d_az = 0.5;  // keep the scan free of grating lobes
    const double full_w = uniform_line_width_3db(4, 0.5);
    const double half_w = uniform_line_width_3db(2, 0.5);

    BeamSpec narrow;
    narrow.elev_bw_deg = uniform_line_width_3db(4, 0.5);
    narrow.az_bw_deg = full_w;
    auto nb = synthesize_beam(cfg, narrow);

    BeamSpec wide = narrow;
    wide.az_bw_deg = half_w;
    auto wb = synthesize_beam(cfg, wide);

    // Two columns active means the outer columns carry zero weight.
    for (int n1 = 0; n1 < 4; ++n1) {
        CHECK(std::abs(wb.w[0 * 4 + n1]) == 0.0);
        CHECK(std::abs(wb.w[3 * 4 + n1]) == 0.0);
        CHECK(std::abs(wb.w[1 * 4 + n1]) > 0.0);
    }

    double ratio = measured_az_width(cfg, wb) / measured_az_width(cfg, nb);
    CHECK(ratio > 1.7);
    CHECK(ratio < 2.7);
    // The measured widths also agree with the analytic line widths.
    CHECK(measured_az_width(cfg, nb) == doctest::Approx(full_w).epsilon(0.02));
    CHECK(measured_az_width(cfg, wb) == doctest::Approx(half_w).epsilon(0.02));
}

TEST_CASE("alternating phases cancel to the pattern floor") {
    ArrayConfig cfg;
    cfg.n_elev = 1;
    cfg.n_az = 4;
    cfg.d_az = 0.5;
    BeamSpec spec;
    spec.elev_bw_deg = 180.0;
    spec.az_bw_deg = uniform_line_width_3db(4, 0.5);
    auto beam = synthesize_beam(cfg, spec);
    // At az 90 the element phases alternate 0, pi, 0, pi and the sum is 0.
    CHECK(beam_gain_db(cfg, beam, 90.0, 0.0) == kPatternFloorDb);
}

TEST_CASE("synthesized beams are unit norm") {
    ArrayConfig cfg;
    std::vector<BeamSpec> specs = {
        {uniform_line_width_3db(4, 0.5), uniform_line_width_3db(4, 1.48), 0.0},
        {uniform_line_width_3db(4, 0.5), 180.0, -6.0},
        {180.0, 180.0, 0.0},
        {60.0, 180.0, 3.0},
    };
    auto pool = build_pool(cfg, specs);
    REQUIRE(pool.size() == 4);
    for (const auto& beam : pool.beams) {
        double norm2 = 0.0;
        for (const auto& e : beam.w) norm2 += std::norm(e);
        CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-12);
    }
}

TEST_CASE("gain is invariant to a global phase rotation of the weights") {
    ArrayConfig cfg;
    BeamSpec spec{uniform_line_width_3db(4, 0.5),
                  uniform_line_width_3db(4, 1.48), -4.0};
    auto beam = synthesize_beam(cfg, spec);
    BeamWeights rotated = beam;
    const std::complex<double> phase = std::polar(1.0, 1.234);
    for (auto& e : rotated.w) e *= phase;
    for (double az : {0.0, 10.0, -35.0}) {
        for (double el : {0.0, -4.0, 12.0}) {
            double g0 = beam_gain_db(cfg, beam, az, el);
            double g1 = beam_gain_db(cfg, rotated, az, el);
            if (g0 <= kPatternFloorDb + 1.0) continue;  // both in the floor
            CHECK(std::abs(g0 - g1) < 1e-9);
        }
    }
}

TEST_CASE("pool construction is deterministic and labels actions in order") {
    ArrayConfig cfg;
    std::vector<BeamSpec> specs = {
        {uniform_line_width_3db(4, 0.5), uniform_line_width_3db(4, 1.48), 0.0},
        {120.0, 180.0, -3.0},
    };
    auto a = build_pool(cfg, specs);
    auto b = build_pool(cfg, specs);
    REQUIRE(a.size() == b.size());
    for (int j = 0; j < a.size(); ++j) {
        CHECK(a.beams[j].index == j);
        CHECK(a.beams[j].w == b.beams[j].w);  // bit identical
    }
}

TEST_CASE("unachievable widths are rejected") {
    ArrayConfig cfg;
    const double full = uniform_line_width_3db(4, 0.5);
    BeamSpec too_narrow{full * 0.5, 180.0, 0.0};
    CHECK_THROWS_AS(synthesize_beam(cfg, too_narrow), UnachievableBeamwidth);
    BeamSpec too_wide{181.0, 180.0, 0.0};
    CHECK_THROWS_AS(synthesize_beam(cfg, too_wide), UnachievableBeamwidth);
    BeamSpec zero{0.0, 180.0, 0.0};
    CHECK_THROWS_AS(synthesize_beam(cfg, zero), UnachievableBeamwidth);
}

TEST_CASE("single element line reports the full half-space width") {
    CHECK(uniform_line_width_3db(1, 0.5) == 180.0);
    // More elements always narrow the beam.
    double prev = 181.0;
    for (int n = 1; n <= 8; ++n) {
        double w = uniform_line_width_3db(n, 0.5);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("aperture selection picks the smallest block that is narrow enough") {
    ArrayConfig cfg;  // 4 rows at 0.5 wavelength
    const double w2 = uniform_line_width_3db(2, cfg.d_elev);
    BeamSpec spec{w2 + 1e-9, uniform_line_width_3db(4, cfg.d_az), 0.0};
    auto beam = synthesize_beam(cfg, spec);
    // Two centered rows active: n1 in {1, 2}; outer rows zero.
    for (int n2 = 0; n2 < 4; ++n2) {
        CHECK(std::abs(beam.w[n2 * 4 + 0]) == 0.0);
        CHECK(std::abs(beam.w[n2 * 4 + 1]) > 0.0);
        CHECK(std::abs(beam.w[n2 * 4 + 2]) > 0.0);
        CHECK(std::abs(beam.w[n2 * 4 + 3]) == 0.0);
    }
}

TEST_CASE("explicit pool weights are used verbatim and validated") {
    ArrayConfig cfg;
    cfg.n_elev = 1;
    cfg.n_az = 2;
    PoolEntry explicit_entry;
    explicit_entry.spec = {180.0, 180.0, 0.0};
    explicit_entry.explicit_w = {{1.0, 0.0}, {0.0, 0.0}};
    auto pool = build_pool(cfg, std::vector<PoolEntry>{explicit_entry});
    CHECK(pool.beams[0].w[0] == std::complex<double>(1.0, 0.0));
    CHECK(pool.beams[0].w[1] == std::complex<double>(0.0, 0.0));

    PoolEntry wrong_len = explicit_entry;
    wrong_len.explicit_w = {{1.0, 0.0}};
    CHECK_THROWS_AS(build_pool(cfg, std::vector<PoolEntry>{wrong_len}),
                    ConfigError);

    PoolEntry not_unit = explicit_entry;
    not_unit.explicit_w = {{2.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(build_pool(cfg, std::vector<PoolEntry>{not_unit}),
                    ConfigError);
}

TEST_CASE("degenerate array geometry is rejected") {
    ArrayConfig cfg;
    cfg.n_elev = 0;
    CHECK_THROWS_AS(cfg.validate(), DegenerateGeometry);
    cfg.n_elev = 4;
    cfg.d_az = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DegenerateGeometry);
}
