#include "beamopt/kernels.hpp"

#include <cmath>

#include "beamopt/errors.hpp"
#include "kernels_impl.hpp"

namespace beamopt::kernels {

namespace detail {

static double scalar_dot(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

static void scalar_axpy(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

static void scalar_relu(const double* x, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

static void scalar_relu_mask(const double* pre, double* g, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        if (!(pre[i] > 0.0)) g[i] = 0.0;
    }
}

static void scalar_adam_update(double* p, double* m, double* v,
                               const double* g, size_t n, double beta1,
                               double beta2, double eps, double lr, double bc1,
                               double bc2) {
    // Op order matches the vectorized variants exactly so results are
    // bit-identical across backends.
    for (size_t i = 0; i < n; ++i) {
        double gi = g[i];
        double mi = beta1 * m[i] + (1.0 - beta1) * gi;
        double vi = beta2 * v[i] + (1.0 - beta2) * (gi * gi);
        m[i] = mi;
        v[i] = vi;
        double mhat = mi / bc1;
        double vhat = vi / bc2;
        p[i] = p[i] - lr * (mhat / (std::sqrt(vhat) + eps));
    }
}

static void scalar_cdot_t(const double* a, const double* b, size_t n,
                          double* re_out, double* im_out) {
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double ar = a[2 * i], ai = a[2 * i + 1];
        double br = b[2 * i], bi = b[2 * i + 1];
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    *re_out = re;
    *im_out = im;
}

const KernelTable scalar_table = {
    scalar_dot,  scalar_axpy,        scalar_relu,
    scalar_relu_mask, scalar_adam_update, scalar_cdot_t,
};

}  // namespace detail

namespace {

struct Dispatch {
    const detail::KernelTable* table;
    Backend backend;
};

Dispatch detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) {
        return {&detail::avx2_table, Backend::Avx2};
    }
#endif
#if defined(__ARM_NEON)
    return {&detail::neon_table, Backend::Neon};
#endif
    return {&detail::scalar_table, Backend::Scalar};
}

Dispatch& dispatch() {
    static Dispatch d = detect();
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

void force_backend(Backend b) {
    switch (b) {
        case Backend::Scalar:
            dispatch() = {&detail::scalar_table, Backend::Scalar};
            return;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (__builtin_cpu_supports("avx2")) {
                dispatch() = {&detail::avx2_table, Backend::Avx2};
                return;
            }
#endif
            throw ConfigError("kernel backend avx2 not available on this host");
        case Backend::Neon:
#if defined(__ARM_NEON)
            dispatch() = {&detail::neon_table, Backend::Neon};
            return;
#else
            throw ConfigError("kernel backend neon not available on this host");
#endif
    }
    throw ConfigError("unknown kernel backend");
}

void reset_backend() { dispatch() = detect(); }

double dot(const double* x, const double* y, std::size_t n) {
    return dispatch().table->dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    dispatch().table->axpy(a, x, y, n);
}

void relu(const double* x, double* out, std::size_t n) {
    dispatch().table->relu(x, out, n);
}

void relu_mask(const double* pre, double* g, std::size_t n) {
    dispatch().table->relu_mask(pre, g, n);
}

void adam_update(double* p, double* m, double* v, const double* g,
                 std::size_t n, double beta1, double beta2, double eps,
                 double lr, double bc1, double bc2) {
    dispatch().table->adam_update(p, m, v, g, n, beta1, beta2, eps, lr, bc1,
                                  bc2);
}

std::complex<double> cdot_t(const std::complex<double>* a,
                            const std::complex<double>* b, std::size_t n) {
    // std::complex<double> is layout-compatible with double[2]
    double re = 0.0, im = 0.0;
    dispatch().table->cdot_t(reinterpret_cast<const double*>(a),
                             reinterpret_cast<const double*>(b), n, &re, &im);
    return {re, im};
}

}  // namespace beamopt::kernels
