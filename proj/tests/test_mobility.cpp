#include <string>
#include <vector>

#include <doctest.h>

#include "beamopt/errors.hpp"
#include "beamopt/mobility.hpp"
#include "beamopt/rng.hpp"

using namespace beamopt;

namespace {

ScenarioDef box(const std::string& id, double x0, double x1, double y0,
                double y1, double z0, double z1) {
    ScenarioDef s;
    s.id = id;
    s.x_min = x0;
    s.x_max = x1;
    s.y_min = y0;
    s.y_max = y1;
    s.z_min = z0;
    s.z_max = z1;
    return s;
}

}  // namespace

TEST_CASE("periodic schedule alternates in blocks of the period") {
    PeriodicSchedule sched;
    sched.period_steps = 8;
    sched.cycle = {"one", "two"};
    for (long long t = 0; t < 8; ++t) CHECK(scenario_at(sched, t) == "one");
    for (long long t = 8; t < 16; ++t) CHECK(scenario_at(sched, t) == "two");
    CHECK(scenario_at(sched, 16) == "one");
}

TEST_CASE("single-entry cycle is constant") {
    PeriodicSchedule sched;
    sched.period_steps = 8;
    sched.cycle = {"only"};
    for (long long t : {0LL, 7LL, 8LL, 100LL, 123456LL}) {
        CHECK(scenario_at(sched, t) == "only");
    }
}

TEST_CASE("three-scenario cycle indexes by floor(t/period) mod length") {
    PeriodicSchedule sched;
    sched.period_steps = 8;
    sched.cycle = {"1", "2", "3"};
    CHECK(scenario_at(sched, 16) == "3");
    CHECK(scenario_at(sched, 23) == "3");
    CHECK(scenario_at(sched, 24) == "1");
}

TEST_CASE("periodic schedule repeats with period times cycle length") {
    PeriodicSchedule sched;
    sched.period_steps = 5;
    sched.cycle = {"a", "b", "c"};
    const long long full = 5 * 3;
    for (long long t = 0; t < 40; ++t) {
        CHECK(scenario_at(sched, t) == scenario_at(sched, t + full));
    }
}

TEST_CASE("negative step is rejected") {
    PeriodicSchedule sched;
    sched.period_steps = 8;
    sched.cycle = {"a"};
    CHECK_THROWS_AS(scenario_at(sched, -1), IndexError);
}

TEST_CASE("absorbing markov row never leaves the state") {
    MarkovSchedule sched;
    sched.states = {"stay", "other"};
    sched.transition = {{1.0, 0.0}, {0.0, 1.0}};
    sched.initial = "stay";
    SeededRng rng(3);
    std::string s = "stay";
    for (int i = 0; i < 100; ++i) {
        s = advance(sched, s, rng);
        CHECK(s == "stay");
    }
}

TEST_CASE("deterministic markov row always alternates") {
    MarkovSchedule sched;
    sched.states = {"a", "b"};
    sched.transition = {{0.0, 1.0}, {1.0, 0.0}};
    sched.initial = "a";
    SeededRng rng(3);
    std::string s = "a";
    for (int i = 0; i < 50; ++i) {
        std::string next = advance(sched, s, rng);
        CHECK(next != s);
        s = next;
    }
}

TEST_CASE("markov switch frequency matches the configured probability") {
    MarkovSchedule sched;
    sched.states = {"a", "b"};
    sched.transition = {{0.7, 0.3}, {0.3, 0.7}};
    sched.initial = "a";
    SeededRng rng(20240518);
    std::string s = "a";
    long long switches = 0;
    const long long n = 50000;
    for (long long i = 0; i < n; ++i) {
        std::string next = advance(sched, s, rng);
        if (next != s) ++switches;
        s = next;
    }
    double freq = static_cast<double>(switches) / n;
    CHECK(freq > 0.27);
    CHECK(freq < 0.33);
}

TEST_CASE("symmetric chain occupies both states evenly in the long run") {
    MarkovSchedule sched;
    sched.states = {"a", "b"};
    sched.transition = {{0.7, 0.3}, {0.3, 0.7}};
    sched.initial = "a";
    SeededRng rng(77);
    std::string s = "a";
    long long in_a = 0;
    const long long n = 100000;
    for (long long i = 0; i < n; ++i) {
        s = advance(sched, s, rng);
        if (s == "a") ++in_a;
    }
    double occ = static_cast<double>(in_a) / n;
    CHECK(occ > 0.48);
    CHECK(occ < 0.52);
}

TEST_CASE("markov schedule validation catches malformed matrices") {
    MarkovSchedule sched;
    sched.states = {"a", "b"};
    sched.initial = "a";

    sched.transition = {{0.7, 0.2}, {0.3, 0.7}};  // row sums 0.9
    CHECK_THROWS_AS(sched.validate(), ConfigError);

    sched.transition = {{0.7, 0.3}};  // not SxS
    CHECK_THROWS_AS(sched.validate(), ConfigError);

    sched.transition = {{1.5, -0.5}, {0.3, 0.7}};  // out of [0,1]
    CHECK_THROWS_AS(sched.validate(), ConfigError);

    sched.transition = {{0.7, 0.3}, {0.3, 0.7}};
    sched.initial = "nope";
    CHECK_THROWS_AS(sched.validate(), ConfigError);

    sched.initial = "b";
    CHECK_NOTHROW(sched.validate());
}

TEST_CASE("sampled positions always satisfy the scenario bounds") {
    auto far = box("far", 2600.0, 3200.0, -500.0, 500.0, 10.0, 30.0);
    SeededRng rng(5);
    auto pts = sample_positions(far, 500, rng);
    REQUIRE(pts.size() == 500);
    for (const auto& p : pts) {
        CHECK(p.x >= 2600.0);
        CHECK(p.x <= 3200.0);
        CHECK(p.y >= -500.0);
        CHECK(p.y <= 500.0);
        CHECK(p.z >= 10.0);
        CHECK(p.z <= 30.0);
        CHECK(far.contains(p));
    }
}

TEST_CASE("degenerate interval pins the coordinate exactly") {
    auto line = box("line", 100.0, 100.0, -50.0, 50.0, 1.5, 1.5);
    SeededRng rng(9);
    auto pts = sample_positions(line, 64, rng);
    for (const auto& p : pts) {
        CHECK(p.x == 100.0);
        CHECK(p.z == 1.5);
    }
}

TEST_CASE("position sampling is deterministic per seed") {
    auto region = box("r", 0.0, 1000.0, -200.0, 200.0, 1.5, 20.0);
    SeededRng r1(123), r2(123);
    auto a = sample_positions(region, 50, r1);
    auto b = sample_positions(region, 50, r2);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].z == b[i].z);
    }
}

TEST_CASE("contradictory bounds are an empty region") {
    auto bad = box("bad", 10.0, 5.0, 0.0, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(bad.validate(), EmptyRegion);
}

TEST_CASE("contains matches the box predicate on the boundary") {
    auto region = box("r", 0.0, 10.0, 0.0, 10.0, 0.0, 10.0);
    CHECK(region.contains({0.0, 0.0, 0.0}));
    CHECK(region.contains({10.0, 10.0, 10.0}));
    CHECK(!region.contains({10.0001, 5.0, 5.0}));
    CHECK(!region.contains({5.0, -0.0001, 5.0}));
}
