#pragma once

// Internal: per-backend kernel entry points and the dispatch table.
// Only kernels.cpp and the variant translation units include this.
//
// Kept freestanding-safe (no hosted C++ headers): the NEON variant is
// syntax-checked against a bare aarch64 target that has no libstdc++, so the
// complex dot product passes interleaved doubles instead of std::complex.

#include <stddef.h>

namespace beamopt::kernels::detail {

struct KernelTable {
    double (*dot)(const double*, const double*, size_t);
    void (*axpy)(double, const double*, double*, size_t);
    void (*relu)(const double*, double*, size_t);
    void (*relu_mask)(const double*, double*, size_t);
    void (*adam_update)(double*, double*, double*, const double*, size_t,
                        double, double, double, double, double, double);
    // a, b: interleaved (re,im) pairs, n complex values
    void (*cdot_t)(const double* a, const double* b, size_t n, double* re,
                   double* im);
};

extern const KernelTable scalar_table;

#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__ARM_NEON)
extern const KernelTable neon_table;
#endif

}  // namespace beamopt::kernels::detail
