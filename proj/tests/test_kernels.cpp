#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "beamopt/errors.hpp"
#include "beamopt/kernels.hpp"
#include "beamopt/rng.hpp"

using namespace beamopt;
using kernels::Backend;

namespace {

// Restores the auto-detected backend when a test body returns or throws.
struct BackendGuard {
    ~BackendGuard() { kernels::reset_backend(); }
};

}  // namespace

TEST_CASE("dot computes the plain inner product") {
    const double x[] = {1.0, 2.0, 3.0};
    const double y[] = {4.0, -5.0, 6.0};
    CHECK(kernels::dot(x, y, 3) == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(kernels::dot(x, y, 0) == 0.0);
}

TEST_CASE("axpy accumulates a*x into y") {
    const double x[] = {1.0, -1.0, 0.5};
    double y[] = {10.0, 10.0, 10.0};
    kernels::axpy(2.0, x, y, 3);
    CHECK(y[0] == 12.0);
    CHECK(y[1] == 8.0);
    CHECK(y[2] == 11.0);
}

TEST_CASE("relu clamps negatives, relu_mask gates gradients") {
    const double pre[] = {-1.0, 0.0, 2.5, -0.0};
    double out[4];
    kernels::relu(pre, out, 4);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 2.5);
    CHECK(out[3] == 0.0);

    double g[] = {7.0, 7.0, 7.0, 7.0};
    kernels::relu_mask(pre, g, 4);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);  // pre == 0 does not pass gradient
    CHECK(g[2] == 7.0);
    CHECK(g[3] == 0.0);
}

TEST_CASE("cdot_t is the unconjugated bilinear form") {
    // (1+j)*(1+j) = 2j; conjugation would give 2 instead.
    std::complex<double> a[] = {{1.0, 1.0}};
    std::complex<double> b[] = {{1.0, 1.0}};
    auto r = kernels::cdot_t(a, b, 1);
    CHECK(r.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.imag() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("adam_update matches the hand-evaluated first step") {
    // One parameter, first step: m = 0.1*g, v = 0.001*g^2, with bias
    // correction the update is exactly lr * g/|g| up to eps.
    double p = 1.0, m = 0.0, v = 0.0;
    const double g = 2.0;
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8, lr = 0.001;
    kernels::adam_update(&p, &m, &v, &g, 1, beta1, beta2, eps, lr,
                         1.0 - beta1, 1.0 - beta2);
    CHECK(p == doctest::Approx(1.0 - 0.001).epsilon(1e-6));
    CHECK(m == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(v == doctest::Approx(0.004).epsilon(1e-12));
}

TEST_CASE("vector variants agree with the scalar reference") {
    kernels::reset_backend();
    const Backend native = kernels::active_backend();
    if (native == Backend::Scalar) return;  // nothing to compare on this host
    BackendGuard guard;

    SeededRng rng(20240517);
    // Lengths straddle the SIMD width so remainder tails are exercised.
    for (size_t n : {size_t{0}, size_t{1}, size_t{3}, size_t{4}, size_t{5},
                     size_t{8}, size_t{13}, size_t{64}, size_t{257}}) {
        std::vector<double> x(n), y(n), seed_y(n), g(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform_range(-3.0, 3.0);
            seed_y[i] = rng.uniform_range(-3.0, 3.0);
            g[i] = rng.uniform_range(-1.0, 1.0);
        }

        // Elementwise kernels promise bit identity across backends.
        kernels::force_backend(Backend::Scalar);
        y = seed_y;
        kernels::axpy(0.37, x.data(), y.data(), n);
        std::vector<double> y_scalar = y;
        std::vector<double> r_scalar(n);
        kernels::relu(x.data(), r_scalar.data(), n);
        std::vector<double> m_scalar = g;
        kernels::relu_mask(x.data(), m_scalar.data(), n);
        double dot_scalar = kernels::dot(x.data(), seed_y.data(), n);

        std::vector<double> p_s = x, mom_s(n, 0.1), vel_s(n, 0.2);
        kernels::adam_update(p_s.data(), mom_s.data(), vel_s.data(), g.data(),
                             n, 0.9, 0.999, 1e-8, 0.001, 0.1, 0.001);

        kernels::force_backend(native);
        y = seed_y;
        kernels::axpy(0.37, x.data(), y.data(), n);
        CHECK(y == y_scalar);
        std::vector<double> r_native(n);
        kernels::relu(x.data(), r_native.data(), n);
        CHECK(r_native == r_scalar);
        std::vector<double> m_native = g;
        kernels::relu_mask(x.data(), m_native.data(), n);
        CHECK(m_native == m_scalar);

        std::vector<double> p_n = x, mom_n(n, 0.1), vel_n(n, 0.2);
        kernels::adam_update(p_n.data(), mom_n.data(), vel_n.data(), g.data(),
                             n, 0.9, 0.999, 1e-8, 0.001, 0.1, 0.001);
        CHECK(p_n == p_s);
        CHECK(mom_n == mom_s);
        CHECK(vel_n == vel_s);

        // Reductions reorder the sum; agreement is up to rounding only.
        double dot_native = kernels::dot(x.data(), seed_y.data(), n);
        CHECK(dot_native ==
              doctest::Approx(dot_scalar).epsilon(1e-12).scale(1.0));

        std::vector<std::complex<double>> ca(n), cb(n);
        for (size_t i = 0; i < n; ++i) {
            ca[i] = {rng.uniform_range(-1.0, 1.0), rng.uniform_range(-1.0, 1.0)};
            cb[i] = {rng.uniform_range(-1.0, 1.0), rng.uniform_range(-1.0, 1.0)};
        }
        kernels::force_backend(Backend::Scalar);
        auto c_scalar = kernels::cdot_t(ca.data(), cb.data(), n);
        kernels::force_backend(native);
        auto c_native = kernels::cdot_t(ca.data(), cb.data(), n);
        CHECK(c_native.real() ==
              doctest::Approx(c_scalar.real()).epsilon(1e-12).scale(1.0));
        CHECK(c_native.imag() ==
              doctest::Approx(c_scalar.imag()).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("forcing an unavailable backend is a config error") {
    kernels::reset_backend();
    BackendGuard guard;
#if defined(__x86_64__) || defined(_M_X64)
    CHECK_THROWS_AS(kernels::force_backend(Backend::Neon), ConfigError);
#else
    CHECK_THROWS_AS(kernels::force_backend(Backend::Avx2), ConfigError);
#endif
    // Scalar always works.
    kernels::force_backend(Backend::Scalar);
    CHECK(kernels::active_backend() == Backend::Scalar);
    kernels::reset_backend();
}

TEST_CASE("backend names are stable identifiers") {
    CHECK(std::string(kernels::backend_name(Backend::Scalar)) == "scalar");
    CHECK(std::string(kernels::backend_name(Backend::Avx2)) == "avx2");
    CHECK(std::string(kernels::backend_name(Backend::Neon)) == "neon");
}
