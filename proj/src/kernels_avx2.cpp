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

#include <immintrin.h>

namespace cvtele::kernels {

// AVX2+FMA kernels. Complex doubles are processed two at a time from their
// interleaved (re,im) layout. Lane bookkeeping per 256-bit vector:
//   u = [a0, b0, a1, b1]  (re/im of two complex numbers)
// so even lanes carry products of real parts and odd lanes products of
// imaginary parts after an elementwise multiply.

namespace {

inline __m256d swap_pairs(__m256d x) {
    return _mm256_permute_pd(x, 0x5);  // [b0, a0, b1, a1]
}

// (even lane sum, odd lane sum) of acc
inline void hsum_even_odd(__m256d acc, double* even, double* odd) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);  // [e0+e1, o0+o1]
    *even = _mm_cvtsd_f64(s);
    *odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

// duplicate two weights into pair lanes: [w0, w0, w1, w1]
inline __m256d load_weight_pair(const double* w) {
    __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w));
    return _mm256_permute4x64_pd(v, 0x50);
}

cplx cdotc_avx2(const cplx* u, const cplx* v, std::size_t n) {
    const double* up = reinterpret_cast<const double*>(u);
    const double* vp = reinterpret_cast<const double*>(v);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mu = _mm256_loadu_pd(up + 2 * i);
        __m256d mv = _mm256_loadu_pd(vp + 2 * i);
        acc1 = _mm256_fmadd_pd(mu, mv, acc1);               // [ac, bd]
        acc2 = _mm256_fmadd_pd(mu, swap_pairs(mv), acc2);   // [ad, bc]
    }
    double e1, o1, e2, o2;
    hsum_even_odd(acc1, &e1, &o1);
    hsum_even_odd(acc2, &e2, &o2);
    double re = e1 + o1;  // ac + bd
    double im = e2 - o2;  // ad - bc
    for (; i < n; ++i) {
        const double a = u[i].real(), b = u[i].imag();
        const double c = v[i].real(), d = v[i].imag();
        re += a * c + b * d;
        im += a * d - b * c;
    }
    return {re, im};
}

cplx dotu_avx2(const cplx* u, const cplx* v, std::size_t n) {
    const double* up = reinterpret_cast<const double*>(u);
    const double* vp = reinterpret_cast<const double*>(v);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mu = _mm256_loadu_pd(up + 2 * i);
        __m256d mv = _mm256_loadu_pd(vp + 2 * i);
        acc1 = _mm256_fmadd_pd(mu, mv, acc1);
        acc2 = _mm256_fmadd_pd(mu, swap_pairs(mv), acc2);
    }
    double e1, o1, e2, o2;
    hsum_even_odd(acc1, &e1, &o1);
    hsum_even_odd(acc2, &e2, &o2);
    double re = e1 - o1;  // ac - bd
    double im = e2 + o2;  // ad + bc
    for (; i < n; ++i) {
        const double a = u[i].real(), b = u[i].imag();
        const double c = v[i].real(), d = v[i].imag();
        re += a * c - b * d;
        im += a * d + b * c;
    }
    return {re, im};
}

cplx wdotc_avx2(const double* w, const cplx* u, const cplx* v, std::size_t n) {
    const double* up = reinterpret_cast<const double*>(u);
    const double* vp = reinterpret_cast<const double*>(v);
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mw = load_weight_pair(w + i);
        __m256d mu = _mm256_mul_pd(_mm256_loadu_pd(up + 2 * i), mw);
        __m256d mv = _mm256_loadu_pd(vp + 2 * i);
        acc1 = _mm256_fmadd_pd(mu, mv, acc1);              // [w ac, w bd]
        acc2 = _mm256_fmadd_pd(mu, swap_pairs(mv), acc2);  // [w ad, w bc]
    }
    double e1, o1, e2, o2;
    hsum_even_odd(acc1, &e1, &o1);
    hsum_even_odd(acc2, &e2, &o2);
    double re = e1 + o1;  // w(ac + bd)
    double im = o2 - e2;  // w(bc - ad)
    for (; i < n; ++i) {
        const double a = u[i].real(), b = u[i].imag();
        const double c = v[i].real(), d = v[i].imag();
        re += w[i] * (a * c + b * d);
        im += w[i] * (b * c - a * d);
    }
    return {re, im};
}

double weighted_abs2_avx2(const double* w, const cplx* v, std::size_t n) {
    const double* vp = reinterpret_cast<const double*>(v);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mw = load_weight_pair(w + i);
        __m256d mv = _mm256_loadu_pd(vp + 2 * i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(mv, mw), mv, acc);
    }
    double e, o;
    hsum_even_odd(acc, &e, &o);
    double s = e + o;
    for (; i < n; ++i) {
        s += w[i] * (v[i].real() * v[i].real() + v[i].imag() * v[i].imag());
    }
    return s;
}

double abs2_sum_avx2(const cplx* v, std::size_t n) {
    const double* vp = reinterpret_cast<const double*>(v);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mv = _mm256_loadu_pd(vp + 2 * i);
        acc = _mm256_fmadd_pd(mv, mv, acc);
    }
    double e, o;
    hsum_even_odd(acc, &e, &o);
    double s = e + o;
    for (; i < n; ++i) {
        s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
    }
    return s;
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mx = _mm256_loadu_pd(xp + 2 * i);
        __m256d t = _mm256_mul_pd(ai, swap_pairs(mx));      // [ai xi, ai xr]
        __m256d prod = _mm256_fmaddsub_pd(ar, mx, t);       // [ar xr - ai xi, ar xi + ai xr]
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
    }
    const double arr = a.real(), aii = a.imag();
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(arr * xr - aii * xi, arr * xi + aii * xr);
    }
}

void axpy_conj_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    double* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    const __m256d flip_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d mx = _mm256_loadu_pd(xp + 2 * i);
        __m256d t = _mm256_mul_pd(ai, swap_pairs(mx));      // [ai xi, ai xr]
        __m256d prod = _mm256_fmsubadd_pd(ar, mx, t);       // [ar xr + ai xi, ar xi - ai xr]
        prod = _mm256_xor_pd(prod, flip_odd);               // negate odd -> ai xr - ar xi
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
    }
    const double arr = a.real(), aii = a.imag();
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(arr * xr + aii * xi, aii * xr - arr * xi);
    }
}

}  // namespace

extern const KernelTable kAvx2Table = {
    cdotc_avx2,    dotu_avx2,     wdotc_avx2,
    weighted_abs2_avx2, abs2_sum_avx2, axpy_avx2, axpy_conj_avx2,
};

}  // namespace cvtele::kernels
