#include "tripod/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace tripod::kernels {
namespace avx2_impl {

// out += (cr + i ci) * (xr + i xi), accumulated into (acc_r, acc_i)
static inline void cmadd(__m256d cr, __m256d ci, __m256d xr, __m256d xi,
                         __m256d& acc_r, __m256d& acc_i) {
    acc_r = _mm256_fmadd_pd(cr, xr, acc_r);
    acc_r = _mm256_fnmadd_pd(ci, xi, acc_r);
    acc_i = _mm256_fmadd_pd(cr, xi, acc_i);
    acc_i = _mm256_fmadd_pd(ci, xr, acc_i);
}

void bloch_derivs(std::size_t n, const double* s, const double* field_re,
                  const double* field_im, const BlochCoeffs& c, double* d) {
    const double* ba_re = s;
    const double* ba_im = s + n;
    const double* s1_re = s + 2 * n;
    const double* s1_im = s + 3 * n;
    const double* s2_re = s + 4 * n;
    const double* s2_im = s + 5 * n;
    double* dba_re = d;
    double* dba_im = d + n;
    double* ds1_re = d + 2 * n;
    double* ds1_im = d + 3 * n;
    double* ds2_re = d + 4 * n;
    double* ds2_im = d + 5 * n;

    const __m256d cba_r = _mm256_set1_pd(c.c_ba.real());
    const __m256d cba_i = _mm256_set1_pd(c.c_ba.imag());
    const __m256d cf_r = _mm256_set1_pd(c.c_field.real());
    const __m256d cf_i = _mm256_set1_pd(c.c_field.imag());
    const __m256d c1f_r = _mm256_set1_pd(c.c1_fwd.real());
    const __m256d c1f_i = _mm256_set1_pd(c.c1_fwd.imag());
    const __m256d c2f_r = _mm256_set1_pd(c.c2_fwd.real());
    const __m256d c2f_i = _mm256_set1_pd(c.c2_fwd.imag());
    const __m256d cs1_r = _mm256_set1_pd(c.c_s1.real());
    const __m256d cs1_i = _mm256_set1_pd(c.c_s1.imag());
    const __m256d c1b_r = _mm256_set1_pd(c.c1_bwd.real());
    const __m256d c1b_i = _mm256_set1_pd(c.c1_bwd.imag());
    const __m256d cs2_r = _mm256_set1_pd(c.c_s2.real());
    const __m256d cs2_i = _mm256_set1_pd(c.c_s2.imag());
    const __m256d c2b_r = _mm256_set1_pd(c.c2_bwd.real());
    const __m256d c2b_i = _mm256_set1_pd(c.c2_bwd.imag());
    const __m256d zero = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d br = _mm256_loadu_pd(ba_re + i);
        const __m256d bi = _mm256_loadu_pd(ba_im + i);
        const __m256d r1 = _mm256_loadu_pd(s1_re + i);
        const __m256d i1 = _mm256_loadu_pd(s1_im + i);
        const __m256d r2 = _mm256_loadu_pd(s2_re + i);
        const __m256d i2 = _mm256_loadu_pd(s2_im + i);
        const __m256d er = _mm256_loadu_pd(field_re + i);
        const __m256d ei = _mm256_loadu_pd(field_im + i);

        __m256d ar = zero, ai = zero;
        cmadd(cba_r, cba_i, br, bi, ar, ai);
        cmadd(cf_r, cf_i, er, ei, ar, ai);
        cmadd(c1f_r, c1f_i, r1, i1, ar, ai);
        cmadd(c2f_r, c2f_i, r2, i2, ar, ai);
        _mm256_storeu_pd(dba_re + i, ar);
        _mm256_storeu_pd(dba_im + i, ai);

        ar = zero;
        ai = zero;
        cmadd(cs1_r, cs1_i, r1, i1, ar, ai);
        cmadd(c1b_r, c1b_i, br, bi, ar, ai);
        _mm256_storeu_pd(ds1_re + i, ar);
        _mm256_storeu_pd(ds1_im + i, ai);

        ar = zero;
        ai = zero;
        cmadd(cs2_r, cs2_i, r2, i2, ar, ai);
        cmadd(c2b_r, c2b_i, br, bi, ar, ai);
        _mm256_storeu_pd(ds2_re + i, ar);
        _mm256_storeu_pd(ds2_im + i, ai);
    }
    for (; i < n; ++i) {
        const double br = ba_re[i], bi = ba_im[i];
        const double r1 = s1_re[i], i1 = s1_im[i];
        const double r2 = s2_re[i], i2 = s2_im[i];
        const double er = field_re[i], ei = field_im[i];
        dba_re[i] = c.c_ba.real() * br - c.c_ba.imag() * bi +
                    c.c_field.real() * er - c.c_field.imag() * ei +
                    c.c1_fwd.real() * r1 - c.c1_fwd.imag() * i1 +
                    c.c2_fwd.real() * r2 - c.c2_fwd.imag() * i2;
        dba_im[i] = c.c_ba.real() * bi + c.c_ba.imag() * br +
                    c.c_field.real() * ei + c.c_field.imag() * er +
                    c.c1_fwd.real() * i1 + c.c1_fwd.imag() * r1 +
                    c.c2_fwd.real() * i2 + c.c2_fwd.imag() * r2;
        ds1_re[i] = c.c_s1.real() * r1 - c.c_s1.imag() * i1 +
                    c.c1_bwd.real() * br - c.c1_bwd.imag() * bi;
        ds1_im[i] = c.c_s1.real() * i1 + c.c_s1.imag() * r1 +
                    c.c1_bwd.real() * bi + c.c1_bwd.imag() * br;
        ds2_re[i] = c.c_s2.real() * r2 - c.c_s2.imag() * i2 +
                    c.c2_bwd.real() * br - c.c2_bwd.imag() * bi;
        ds2_im[i] = c.c_s2.real() * i2 + c.c_s2.imag() * r2 +
                    c.c2_bwd.real() * bi + c.c2_bwd.imag() * br;
    }
}

void axpy(std::size_t m, double a, const double* x, const double* y, double* out) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < m; ++i)
        out[i] = y[i] + a * x[i];
}

void rk4_combine(std::size_t m, double h, const double* k1, const double* k2,
                 const double* k3, const double* k4, double* y) {
    const double w = h / 6.0;
    const __m256d wv = _mm256_set1_pd(w);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d mid = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
        __m256d sum = _mm256_fmadd_pd(two, mid,
            _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i)));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(wv, sum, _mm256_loadu_pd(y + i)));
    }
    for (; i < m; ++i)
        y[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

double sum_sq(std::size_t m, const double* x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < m; ++i)
        total += x[i] * x[i];
    return total;
}

} // namespace avx2_impl

const Kernels* avx2_kernels_impl() {
    static const Kernels k{"avx2", avx2_impl::bloch_derivs, avx2_impl::axpy,
                           avx2_impl::rk4_combine, avx2_impl::sum_sq};
    return &k;
}

} // namespace tripod::kernels

#endif // __AVX2__ && __FMA__
