#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "beamopt/channel.hpp"
#include "beamopt/errors.hpp"
#include "beamopt/rng.hpp"

using namespace beamopt;

namespace {

SynthChannelParams clean_params() {
    SynthChannelParams p;
    p.carrier_freq_hz = 2.0e9;
    p.n_nlos_paths = 0;
    p.shadowing_sigma_db = 0.0;
    p.los_blockage_prob = 0.0;
    return p;
}

}  // namespace

TEST_CASE("free-space loss hits 80 dB at the hand-computed distance") {
    // 20*log10(4*pi*d*f/c) = 80 solved for d at 2 GHz.
    CHECK(fspl_db(119.28362898092355, 2.0e9) ==
          doctest::Approx(80.0).epsilon(1e-12));
    CHECK(fspl_db(100.0, 2.0e9) ==
          doctest::Approx(78.468383135163).epsilon(1e-12));
}

TEST_CASE("free-space loss clamps at zero for very short distances") {
    CHECK(fspl_db(1e-3, 2.0e9) == 0.0);
}

TEST_CASE("doubling the distance adds exactly 20*log10(2) dB") {
    double base = fspl_db(250.0, 2.0e9);
    CHECK(fspl_db(500.0, 2.0e9) - base ==
          doctest::Approx(6.020599913279624).epsilon(1e-12));
}

TEST_CASE("synthesized LoS link carries the free-space loss and the geometric AoD") {
    SectorGeometry sector;
    sector.position = {0.0, 0.0, 35.0};
    sector.boresight_az_deg = 0.0;
    // Same height as the array, straight down boresight.
    std::vector<Vec3> ues = {{119.28362898092355, 0.0, 35.0}};
    SeededRng rng(42);
    auto links = synth_links({sector}, ues, clean_params(), rng);
    REQUIRE(links.size() == 1);
    REQUIRE(links[0].paths.size() == 1);
    const auto& p = links[0].paths[0];
    CHECK(p.pathloss_db == doctest::Approx(80.0).epsilon(1e-12));
    CHECK(p.aod_az_deg == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.aod_elev_deg == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("boresight rotation shifts the departure azimuth") {
    SectorGeometry sector;
    sector.position = {0.0, 0.0, 10.0};
    sector.boresight_az_deg = 90.0;  // facing +y
    Departure d = departure_toward(sector, {0.0, 500.0, 10.0});
    CHECK(d.az_deg == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d.distance_m == doctest::Approx(500.0).epsilon(1e-12));
    // A target on +x sits 90 degrees clockwise of this boresight.
    Departure side = departure_toward(sector, {500.0, 0.0, 10.0});
    CHECK(std::abs(side.az_deg) == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("synth_links is deterministic per seed") {
    SectorGeometry sector;
    sector.position = {0.0, 0.0, 35.0};
    std::vector<Vec3> ues = {{300.0, 40.0, 1.5}, {800.0, -200.0, 10.0}};
    SynthChannelParams params = clean_params();
    params.n_nlos_paths = 3;
    params.shadowing_sigma_db = 4.0;
    params.los_blockage_prob = 0.25;

    SeededRng r1(7), r2(7);
    auto a = synth_links({sector}, ues, params, r1);
    auto b = synth_links({sector}, ues, params, r2);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].paths.size() == b[i].paths.size());
        for (size_t l = 0; l < a[i].paths.size(); ++l) {
            CHECK(a[i].paths[l].pathloss_db == b[i].paths[l].pathloss_db);
            CHECK(a[i].paths[l].aod_az_deg == b[i].paths[l].aod_az_deg);
            CHECK(a[i].paths[l].aod_elev_deg == b[i].paths[l].aod_elev_deg);
            CHECK(a[i].paths[l].phase_deg == b[i].paths[l].phase_deg);
        }
    }
}

TEST_CASE("co-located UE and sector is rejected") {
    SectorGeometry sector;
    sector.position = {10.0, 20.0, 30.0};
    std::vector<Vec3> ues = {{10.0, 20.0, 30.0}};
    SeededRng rng(1);
    CHECK_THROWS_AS(synth_links({sector}, ues, clean_params(), rng),
                    DegenerateGeometry);
}

TEST_CASE("channel vector of a clean broadside path is the steering vector") {
    ArrayConfig cfg;
    LinkPaths link;
    link.paths = {{0.0, 0.0, 0.0, 0.0}};
    auto h = channel_vector(cfg, link);
    auto a = steering_vector(cfg, 0.0, 0.0);
    REQUIRE(h.size() == a.size());
    for (size_t i = 0; i < h.size(); ++i) {
        CHECK(h[i].real() == doctest::Approx(a[i].real()).epsilon(1e-15));
        CHECK(h[i].imag() == doctest::Approx(a[i].imag()).epsilon(1e-15));
    }
}

TEST_CASE("opposite-phase equal-loss paths cancel") {
    ArrayConfig cfg;
    LinkPaths link;
    link.paths = {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 180.0}};
    auto h = channel_vector(cfg, link);
    for (const auto& e : h) {
        CHECK(std::abs(e) < 1e-12);
    }
}

TEST_CASE("a 6.02 dB weaker copy adds half the amplitude") {
    ArrayConfig cfg;
    LinkPaths link;
    link.paths = {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 6.02, 0.0}};
    auto h = channel_vector(cfg, link);
    // 1 + 10^(-6.02/20) = 1.5000345...
    for (const auto& e : h) {
        CHECK(e.real() == doctest::Approx(1.5000345349769786).epsilon(1e-12));
        CHECK(e.real() == doctest::Approx(1.5).epsilon(1e-3));
    }
}

TEST_CASE("empty path list gives the zero vector") {
    ArrayConfig cfg;
    LinkPaths link;
    auto h = channel_vector(cfg, link);
    REQUIRE(h.size() == 16);
    for (const auto& e : h) CHECK(e == std::complex<double>(0.0, 0.0));
}

TEST_CASE("channel vector is linear in the path list") {
    ArrayConfig cfg;
    LinkPaths a, b, both;
    a.paths = {{12.0, -3.0, 70.0, 45.0}, {-30.0, 5.0, 85.0, 200.0}};
    b.paths = {{2.0, 1.0, 60.0, 10.0}};
    both.paths = a.paths;
    both.paths.insert(both.paths.end(), b.paths.begin(), b.paths.end());
    auto ha = channel_vector(cfg, a);
    auto hb = channel_vector(cfg, b);
    auto hc = channel_vector(cfg, both);
    for (size_t i = 0; i < hc.size(); ++i) {
        CHECK(std::abs(hc[i] - (ha[i] + hb[i])) < 1e-12);
    }
}

TEST_CASE("uniform extra loss scales the channel norm") {
    ArrayConfig cfg;
    LinkPaths link, heavier;
    link.paths = {{12.0, -3.0, 70.0, 45.0}, {-30.0, 5.0, 85.0, 200.0}};
    heavier.paths = link.paths;
    const double c_db = 9.0;
    for (auto& p : heavier.paths) p.pathloss_db += c_db;
    auto h0 = channel_vector(cfg, link);
    auto h1 = channel_vector(cfg, heavier);
    double n0 = 0.0, n1 = 0.0;
    for (size_t i = 0; i < h0.size(); ++i) {
        n0 += std::norm(h0[i]);
        n1 += std::norm(h1[i]);
    }
    double expected = std::sqrt(n0) * std::pow(10.0, -c_db / 20.0);
    CHECK(std::sqrt(n1) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("ray-trace file with two path rows loads as one two-path link") {
    std::istringstream in(
        "timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,"
        "aod_az_deg,aod_elev_deg,pathloss_db,phase_deg\n"
        "0,demo,0,0,100,0,1.5,5,-2,80,0\n"
        "0,demo,0,0,100,0,1.5,-40,3,95,180\n");
    auto snaps = load_raytrace(in, 1, 1);
    REQUIRE(snaps.size() == 1);
    CHECK(snaps[0].scenario_id == "demo");
    CHECK(snaps[0].ue_positions[0].x == 100.0);
    REQUIRE(snaps[0].link(0, 0, 1).paths.size() == 2);
    CHECK(snaps[0].link(0, 0, 1).paths[1].pathloss_db == 95.0);
}

TEST_CASE("non-numeric pathloss is a parse error naming the line") {
    std::istringstream in(
        "timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,"
        "aod_az_deg,aod_elev_deg,pathloss_db,phase_deg\n"
        "0,demo,0,0,100,0,1.5,5,-2,oops,0\n");
    try {
        load_raytrace(in, 1, 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("sector id outside the declared range is an index error") {
    std::istringstream in(
        "timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,"
        "aod_az_deg,aod_elev_deg,pathloss_db,phase_deg\n"
        "0,demo,5,0,100,0,1.5,5,-2,80,0\n");
    CHECK_THROWS_AS(load_raytrace(in, 2, 1), IndexError);
}

TEST_CASE("header-only ray-trace file is an empty dataset") {
    std::istringstream in(
        "timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,"
        "aod_az_deg,aod_elev_deg,pathloss_db,phase_deg\n");
    CHECK_THROWS_AS(load_raytrace(in, 1, 1), EmptyDataset);
}

TEST_CASE("ray-trace write/load round-trip preserves every field") {
    SectorGeometry s0, s1;
    s0.position = {0.0, 500.0, 35.0};
    s1.position = {0.0, -500.0, 35.0};
    std::vector<Vec3> ues = {{700.0, 10.0, 1.5}, {900.0, -350.0, 20.0},
                             {1400.0, 80.0, 3.0}};
    SynthChannelParams params = clean_params();
    params.n_nlos_paths = 2;
    params.shadowing_sigma_db = 3.0;
    SeededRng rng(99);
    ScenarioSnapshot snap;
    snap.timestamp = 4;
    snap.scenario_id = "roundtrip";
    snap.ue_positions = ues;
    snap.links = synth_links({s0, s1}, ues, params, rng);

    std::ostringstream out;
    write_raytrace(out, {snap});
    std::istringstream in(out.str());
    auto back = load_raytrace(in, 2, 3);
    REQUIRE(back.size() == 1);
    CHECK(back[0].timestamp == snap.timestamp);
    CHECK(back[0].scenario_id == snap.scenario_id);
    REQUIRE(back[0].links.size() == snap.links.size());
    for (size_t i = 0; i < snap.links.size(); ++i) {
        REQUIRE(back[0].links[i].paths.size() == snap.links[i].paths.size());
        for (size_t l = 0; l < snap.links[i].paths.size(); ++l) {
            // Shortest round-trip float formatting: fields come back
            // bit-identical.
            CHECK(back[0].links[i].paths[l].pathloss_db ==
                  snap.links[i].paths[l].pathloss_db);
            CHECK(back[0].links[i].paths[l].aod_az_deg ==
                  snap.links[i].paths[l].aod_az_deg);
            CHECK(back[0].links[i].paths[l].aod_elev_deg ==
                  snap.links[i].paths[l].aod_elev_deg);
            CHECK(back[0].links[i].paths[l].phase_deg ==
                  snap.links[i].paths[l].phase_deg);
        }
    }
    for (size_t k = 0; k < ues.size(); ++k) {
        CHECK(back[0].ue_positions[k].x == snap.ue_positions[k].x);
        CHECK(back[0].ue_positions[k].y == snap.ue_positions[k].y);
        CHECK(back[0].ue_positions[k].z == snap.ue_positions[k].z);
    }
}

TEST_CASE("location history fills in positions of fully blocked UEs") {
    // UE 1 has no path rows at all; its position must come from the
    // companion location file.
    std::istringstream rays(
        "timestamp,scenario_id,sector_id,ue_id,ue_x,ue_y,ue_z,"
        "aod_az_deg,aod_elev_deg,pathloss_db,phase_deg\n"
        "0,blocked,0,0,100,0,1.5,0,0,80,0\n");
    auto snaps = load_raytrace(rays, 1, 2);
    REQUIRE(snaps.size() == 1);
    CHECK(snaps[0].link(0, 1, 2).paths.empty());

    std::istringstream locs(
        "timestamp,ue_id,x,y,z\n"
        "0,0,100,0,1.5\n"
        "0,1,250,-40,3\n");
    apply_locations(locs, snaps);
    CHECK(snaps[0].ue_positions[1].x == 250.0);
    CHECK(snaps[0].ue_positions[1].y == -40.0);
    CHECK(snaps[0].ue_positions[1].z == 3.0);
}

TEST_CASE("synthetic channel parameters are validated") {
    SynthChannelParams p = clean_params();
    p.los_blockage_prob = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = clean_params();
    p.carrier_freq_hz = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = clean_params();
    p.n_nlos_paths = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
