// Copyright 2026 The cvteleport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvtele/kernels.hpp"

namespace cvtele::kernels {

// Reference kernels. Real/imaginary parts are accumulated separately in
// plain left-to-right order; the SIMD variants are checked against these.

namespace {

cplx cdotc_scalar(const cplx* u, const cplx* v, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u[i].real(), b = u[i].imag();
        const double c = v[i].real(), d = v[i].imag();
        re += a * c + b * d;
        im += a * d - b * c;
    }
    return {re, im};
}

cplx dotu_scalar(const cplx* u, const cplx* v, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u[i].real(), b = u[i].imag();
        const double c = v[i].real(), d = v[i].imag();
        re += a * c - b * d;
        im += a * d + b * c;
    }
    return {re, im};
}

cplx wdotc_scalar(const double* w, const cplx* u, const cplx* v, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = u[i].real(), b = u[i].imag();
        const double c = v[i].real(), d = v[i].imag();
        re += w[i] * (a * c + b * d);
        im += w[i] * (b * c - a * d);
    }
    return {re, im};
}

double weighted_abs2_scalar(const double* w, const cplx* v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += w[i] * (v[i].real() * v[i].real() + v[i].imag() * v[i].imag());
    }
    return s;
}

double abs2_sum_scalar(const cplx* v, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
    }
    return s;
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

void axpy_conj_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(ar * xr + ai * xi, ai * xr - ar * xi);
    }
}

}  // namespace

extern const KernelTable kScalarTable = {
    cdotc_scalar,    dotu_scalar,     wdotc_scalar,
    weighted_abs2_scalar, abs2_sum_scalar, axpy_scalar, axpy_conj_scalar,
};

}  // namespace cvtele::kernels
