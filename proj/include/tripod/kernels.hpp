#pragma once

#include <complex>
#include <cstddef>

namespace tripod::kernels {

// State layout: one contiguous buffer of 6*n doubles,
//   [ba_re | ba_im | s1_re | s1_im | s2_re | s2_im]
// where n is the number of z slices. The field E lives in separate
// re/im arrays of length n (slice-centered values).

struct BlochCoeffs {
    // d_ba = c_ba*ba + c_field*E + c1_fwd*s1 + c2_fwd*s2
    // d_s1 = c_s1*s1 + c1_bwd*ba
    // d_s2 = c_s2*s2 + c2_bwd*ba
    std::complex<double> c_ba, c_field, c1_fwd, c2_fwd;
    std::complex<double> c_s1, c1_bwd;
    std::complex<double> c_s2, c2_bwd;
};

using BlochDerivsFn = void (*)(std::size_t n, const double* state,
                               const double* field_re, const double* field_im,
                               const BlochCoeffs& c, double* deriv);
// out[i] = y[i] + a * x[i], over m doubles
using AxpyFn = void (*)(std::size_t m, double a, const double* x,
                        const double* y, double* out);
// y[i] += (h/6) * (k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
using Rk4CombineFn = void (*)(std::size_t m, double h, const double* k1,
                              const double* k2, const double* k3,
                              const double* k4, double* y);
// sum of squares over m doubles
using SumSqFn = double (*)(std::size_t m, const double* x);

struct Kernels {
    const char* name;
    BlochDerivsFn bloch_derivs;
    AxpyFn axpy;
    Rk4CombineFn rk4_combine;
    SumSqFn sum_sq;
};

const Kernels& scalar();
const Kernels* avx2_or_null(); // nullptr when unsupported at build or run time
const Kernels& active();       // best available, resolved once at startup

} // namespace tripod::kernels
