#include "tripod/kernels.hpp"

namespace tripod::kernels {
namespace scalar_impl {

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

    const double cba_r = c.c_ba.real(), cba_i = c.c_ba.imag();
    const double cf_r = c.c_field.real(), cf_i = c.c_field.imag();
    const double c1f_r = c.c1_fwd.real(), c1f_i = c.c1_fwd.imag();
    const double c2f_r = c.c2_fwd.real(), c2f_i = c.c2_fwd.imag();
    const double cs1_r = c.c_s1.real(), cs1_i = c.c_s1.imag();
    const double c1b_r = c.c1_bwd.real(), c1b_i = c.c1_bwd.imag();
    const double cs2_r = c.c_s2.real(), cs2_i = c.c_s2.imag();
    const double c2b_r = c.c2_bwd.real(), c2b_i = c.c2_bwd.imag();

    for (std::size_t i = 0; i < n; ++i) {
        const double br = ba_re[i], bi = ba_im[i];
        const double r1 = s1_re[i], i1 = s1_im[i];
        const double r2 = s2_re[i], i2 = s2_im[i];
        const double er = field_re[i], ei = field_im[i];

        dba_re[i] = cba_r * br - cba_i * bi + cf_r * er - cf_i * ei +
                    c1f_r * r1 - c1f_i * i1 + c2f_r * r2 - c2f_i * i2;
        dba_im[i] = cba_r * bi + cba_i * br + cf_r * ei + cf_i * er +
                    c1f_r * i1 + c1f_i * r1 + c2f_r * i2 + c2f_i * r2;

        ds1_re[i] = cs1_r * r1 - cs1_i * i1 + c1b_r * br - c1b_i * bi;
        ds1_im[i] = cs1_r * i1 + cs1_i * r1 + c1b_r * bi + c1b_i * br;

        ds2_re[i] = cs2_r * r2 - cs2_i * i2 + c2b_r * br - c2b_i * bi;
        ds2_im[i] = cs2_r * i2 + cs2_i * r2 + c2b_r * bi + c2b_i * br;
    }
}

void axpy(std::size_t m, double a, const double* x, const double* y, double* out) {
    for (std::size_t i = 0; i < m; ++i)
        out[i] = y[i] + a * x[i];
}

void rk4_combine(std::size_t m, double h, const double* k1, const double* k2,
                 const double* k3, const double* k4, double* y) {
    const double w = h / 6.0;
    for (std::size_t i = 0; i < m; ++i)
        y[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

double sum_sq(std::size_t m, const double* x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        acc += x[i] * x[i];
    return acc;
}

} // namespace scalar_impl

const Kernels& scalar() {
    static const Kernels k{"scalar", scalar_impl::bloch_derivs, scalar_impl::axpy,
                           scalar_impl::rk4_combine, scalar_impl::sum_sq};
    return k;
}

} // namespace tripod::kernels
