// NEON (aarch64) kernel variants. Same contract as the AVX2 file: elementwise
// kernels keep the scalar op order so results are bit-identical; reductions
// agree up to rounding.

#if defined(__ARM_NEON)

#include <arm_neon.h>
#include <stddef.h>

#include "kernels_impl.hpp"

namespace beamopt::kernels::detail {

namespace {

double neon_dot(const double* x, const double* y, size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        acc1 = vaddq_f64(acc1,
                         vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    float64x2_t acc = vaddq_f64(acc0, acc1);
    double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void neon_axpy(double a, const double* x, double* y, size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vy = vld1q_f64(y + i);
        float64x2_t vx = vld1q_f64(x + i);
        vst1q_f64(y + i, vaddq_f64(vy, vmulq_f64(va, vx)));
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void neon_relu(const double* x, double* out, size_t n) {
    float64x2_t zero = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vmaxq_f64(vld1q_f64(x + i), zero));
    }
    for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void neon_relu_mask(const double* pre, double* g, size_t n) {
    float64x2_t zero = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t keep = vcgtq_f64(vld1q_f64(pre + i), zero);
        uint64x2_t vg = vreinterpretq_u64_f64(vld1q_f64(g + i));
        vst1q_f64(g + i, vreinterpretq_f64_u64(vandq_u64(vg, keep)));
    }
    for (; i < n; ++i) {
        if (!(pre[i] > 0.0)) g[i] = 0.0;
    }
}

void neon_adam_update(double* p, double* m, double* v, const double* g,
                      size_t n, double beta1, double beta2, double eps,
                      double lr, double bc1, double bc2) {
    float64x2_t vb1 = vdupq_n_f64(beta1);
    float64x2_t vb2 = vdupq_n_f64(beta2);
    float64x2_t vomb1 = vdupq_n_f64(1.0 - beta1);
    float64x2_t vomb2 = vdupq_n_f64(1.0 - beta2);
    float64x2_t veps = vdupq_n_f64(eps);
    float64x2_t vlr = vdupq_n_f64(lr);
    float64x2_t vbc1 = vdupq_n_f64(bc1);
    float64x2_t vbc2 = vdupq_n_f64(bc2);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vg = vld1q_f64(g + i);
        float64x2_t vm = vaddq_f64(vmulq_f64(vb1, vld1q_f64(m + i)),
                                   vmulq_f64(vomb1, vg));
        float64x2_t vv = vaddq_f64(vmulq_f64(vb2, vld1q_f64(v + i)),
                                   vmulq_f64(vomb2, vmulq_f64(vg, vg)));
        vst1q_f64(m + i, vm);
        vst1q_f64(v + i, vv);
        float64x2_t mhat = vdivq_f64(vm, vbc1);
        float64x2_t vhat = vdivq_f64(vv, vbc2);
        float64x2_t denom = vaddq_f64(vsqrtq_f64(vhat), veps);
        float64x2_t vp = vld1q_f64(p + i);
        vst1q_f64(p + i,
                  vsubq_f64(vp, vmulq_f64(vlr, vdivq_f64(mhat, denom))));
    }
    for (; i < n; ++i) {
        double gi = g[i];
        double mi = beta1 * m[i] + (1.0 - beta1) * gi;
        double vi = beta2 * v[i] + (1.0 - beta2) * (gi * gi);
        m[i] = mi;
        v[i] = vi;
        double mhat = mi / bc1;
        double vhat = vi / bc2;
        p[i] = p[i] - lr * (mhat / (__builtin_sqrt(vhat) + eps));
    }
}

void neon_cdot_t(const double* pa, const double* pb, size_t n, double* re_out,
                 double* im_out) {
    static const double sgn[2] = {1.0, -1.0};
    float64x2_t sign = vld1q_f64(sgn);
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    for (size_t i = 0; i < n; ++i) {
        float64x2_t va = vld1q_f64(pa + 2 * i);
        float64x2_t vb = vld1q_f64(pb + 2 * i);
        // [ar*br, -ai*bi] and [ar*bi, ai*br]
        acc_re = vaddq_f64(acc_re, vmulq_f64(vmulq_f64(va, vb), sign));
        acc_im = vaddq_f64(acc_im, vmulq_f64(va, vextq_f64(vb, vb, 1)));
    }
    *re_out = vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1);
    *im_out = vgetq_lane_f64(acc_im, 0) + vgetq_lane_f64(acc_im, 1);
}

}  // namespace

const KernelTable neon_table = {
    neon_dot,  neon_axpy,        neon_relu,
    neon_relu_mask, neon_adam_update, neon_cdot_t,
};

}  // namespace beamopt::kernels::detail

#endif  // __ARM_NEON
