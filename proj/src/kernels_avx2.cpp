// AVX2 kernel variants. This translation unit is compiled with -mavx2 and
// without FMA contraction: elementwise kernels must round every intermediate
// exactly like the scalar reference so results stay bit-identical.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>
#include <stddef.h>

#include "kernels_impl.hpp"

namespace beamopt::kernels::detail {

namespace {

double avx2_dot(const double* x, const double* y, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i),
                                                 _mm256_loadu_pd(y + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4),
                                                 _mm256_loadu_pd(y + i + 4)));
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void avx2_axpy(double a, const double* x, double* y, size_t n) {
    __m256d va = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void avx2_relu(const double* x, double* out, size_t n) {
    __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
    }
    for (; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void avx2_relu_mask(const double* pre, double* g, size_t n) {
    __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vpre = _mm256_loadu_pd(pre + i);
        __m256d keep = _mm256_cmp_pd(vpre, zero, _CMP_GT_OQ);
        __m256d vg = _mm256_loadu_pd(g + i);
        _mm256_storeu_pd(g + i, _mm256_and_pd(vg, keep));
    }
    for (; i < n; ++i) {
        if (!(pre[i] > 0.0)) g[i] = 0.0;
    }
}

void avx2_adam_update(double* p, double* m, double* v, const double* g,
                      size_t n, double beta1, double beta2, double eps,
                      double lr, double bc1, double bc2) {
    __m256d vb1 = _mm256_set1_pd(beta1);
    __m256d vb2 = _mm256_set1_pd(beta2);
    __m256d vomb1 = _mm256_set1_pd(1.0 - beta1);
    __m256d vomb2 = _mm256_set1_pd(1.0 - beta2);
    __m256d veps = _mm256_set1_pd(eps);
    __m256d vlr = _mm256_set1_pd(lr);
    __m256d vbc1 = _mm256_set1_pd(bc1);
    __m256d vbc2 = _mm256_set1_pd(bc2);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vg = _mm256_loadu_pd(g + i);
        __m256d vm = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)),
                                   _mm256_mul_pd(vomb1, vg));
        __m256d vv = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
                                   _mm256_mul_pd(vomb2, _mm256_mul_pd(vg, vg)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        __m256d mhat = _mm256_div_pd(vm, vbc1);
        __m256d vhat = _mm256_div_pd(vv, vbc2);
        __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        __m256d vp = _mm256_loadu_pd(p + i);
        _mm256_storeu_pd(
            p + i,
            _mm256_sub_pd(vp, _mm256_mul_pd(vlr, _mm256_div_pd(mhat, denom))));
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

void avx2_cdot_t(const double* pa, const double* pb, size_t n, double* re_out,
                 double* im_out) {
    // Interleaved (re,im) pairs, two complex values per 256-bit vector.
    // acc_re accumulates (ar*br, -ai*bi) pairs, acc_im accumulates
    // (ar*bi, ai*br) pairs; both reduce by lane addition at the end.
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    // memory order (+1, -1, +1, -1): negates the ai*bi slots
    __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        __m256d vb_swap = _mm256_permute_pd(vb, 0b0101);
        acc_re = _mm256_add_pd(acc_re,
                               _mm256_mul_pd(_mm256_mul_pd(va, vb), sign));
        acc_im = _mm256_add_pd(acc_im, _mm256_mul_pd(va, vb_swap));
    }
    alignas(32) double lr_[4], li_[4];
    _mm256_store_pd(lr_, acc_re);
    _mm256_store_pd(li_, acc_im);
    double re = (lr_[0] + lr_[1]) + (lr_[2] + lr_[3]);
    double im = (li_[0] + li_[1]) + (li_[2] + li_[3]);
    for (; i < n; ++i) {
        double ar = pa[2 * i], ai = pa[2 * i + 1];
        double br = pb[2 * i], bi = pb[2 * i + 1];
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    *re_out = re;
    *im_out = im;
}

}  // namespace

const KernelTable avx2_table = {
    avx2_dot,  avx2_axpy,        avx2_relu,
    avx2_relu_mask, avx2_adam_update, avx2_cdot_t,
};

}  // namespace beamopt::kernels::detail

#endif  // x86_64
