#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace beamopt::kernels {

// Numeric inner loops used by the neural and physics code. Every kernel has a
// scalar reference implementation plus optional vectorized variants; the
// active variant is picked once at startup from CPU capabilities and can be
// overridden (tests, cross-machine reproducibility).
//
// Elementwise kernels (axpy, relu, relu_mask, adam_update) perform the exact
// same per-element operation sequence in every variant and are bit-identical
// to the scalar reference. Reductions (dot, cdot_t) change summation order
// under vectorization and agree only up to rounding.

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
const char* backend_name(Backend b);

// Throws ConfigError if the requested backend is not available on this host.
void force_backend(Backend b);
// Back to the auto-detected default.
void reset_backend();

// sum_i x[i]*y[i]
double dot(const double* x, const double* y, std::size_t n);

// y[i] += a*x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// out[i] = max(x[i], 0)
void relu(const double* x, double* out, std::size_t n);

// g[i] = pre[i] > 0 ? g[i] : 0   (backprop through relu)
void relu_mask(const double* pre, double* g, std::size_t n);

// Adam update on one parameter block. bc1/bc2 are the bias-correction terms
// 1-beta1^t and 1-beta2^t, precomputed by the caller.
//   m = beta1*m + (1-beta1)*g
//   v = beta2*v + (1-beta2)*g*g
//   p -= lr * (m/bc1) / (sqrt(v/bc2) + eps)
void adam_update(double* p, double* m, double* v, const double* g,
                 std::size_t n, double beta1, double beta2, double eps,
                 double lr, double bc1, double bc2);

// Unconjugated complex dot product sum_i a[i]*b[i]. This is the bilinear form
// used for received power (channel^T weights), not the Hermitian inner
// product.
std::complex<double> cdot_t(const std::complex<double>* a,
                            const std::complex<double>* b, std::size_t n);

}  // namespace beamopt::kernels
