#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "beamopt/errors.hpp"

namespace beamopt {

// splitmix64 step. Used only to spread a master seed into per-stream seeds so
// that streams with nearby ids do not produce correlated engines.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// Deterministic RNG with explicitly spelled-out distributions.
// std::uniform_real_distribution and friends are not guaranteed to produce
// the same sequence across standard library versions, so every draw here is
// implemented directly on top of the mt19937_64 output.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // [0, 1) with 53 significant bits
    double uniform_double() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform_range(double lo, double hi) {
        return lo + (hi - lo) * uniform_double();
    }

    // inclusive on both ends
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw IndexError("uniform_int: hi < lo");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ULL;
        return lo + static_cast<std::int64_t>(eng_() % span);
    }

    // Box-Muller, stateless: two uniform draws per normal sample.
    double normal(double mean, double stddev) {
        double u1 = uniform_double();
        double u2 = uniform_double();
        while (u1 <= 0.0) u1 = uniform_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    std::string save_state() const {
        std::ostringstream os;
        os << eng_;
        return os.str();
    }

    void load_state(const std::string& text) {
        std::istringstream is(text);
        is >> eng_;
        if (is.fail()) throw ParseError("SeededRng: bad serialized state");
    }

    bool operator==(const SeededRng& other) const { return eng_ == other.eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace beamopt
