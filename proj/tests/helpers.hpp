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
//
// Oracle implementations for the tests. Everything here is deliberately
// naive (plain loops, no kernel dispatch, no shared code with the library
// paths under test) so it can serve as an independent reference.

#ifndef CVTELE_TESTS_HELPERS_HPP
#define CVTELE_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = std::vector<std::vector<cplx>>;

inline Mat zeros(int dim) { return Mat(dim, std::vector<cplx>(dim, cplx(0.0))); }

inline Mat matmul(const Mat& a, const Mat& b) {
    const int d = static_cast<int>(a.size());
    Mat c = zeros(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline std::vector<cplx> matvec(const Mat& a, const std::vector<cplx>& x) {
    const int d = static_cast<int>(a.size());
    std::vector<cplx> y(d, cplx(0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) y[i] += a[i][j] * x[j];
    return y;
}

// Generator beta a^dag - conj(beta) a on the truncated space.
inline Mat displacement_generator(cplx beta, int cutoff) {
    Mat g = zeros(cutoff + 1);
    for (int n = 0; n < cutoff; ++n) {
        const double s = std::sqrt(n + 1.0);
        g[n + 1][n] += beta * s;            // a^dag
        g[n][n + 1] -= std::conj(beta) * s; // a
    }
    return g;
}

// exp(G) by plain Taylor series on the truncated generator. Interior
// entries converge to the exact matrix elements once the cutoff comfortably
// exceeds the photon numbers mixed by the displacement.
inline Mat displacement_series(cplx beta, int cutoff, int terms = 120) {
    const int d = cutoff + 1;
    Mat g = displacement_generator(beta, cutoff);
    Mat acc = zeros(d);
    Mat term = zeros(d);
    for (int i = 0; i < d; ++i) {
        acc[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for (int k = 1; k <= terms; ++k) {
        term = matmul(term, g);
        const double inv = 1.0 / k;
        double biggest = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                term[i][j] *= inv;
                acc[i][j] += term[i][j];
                biggest = std::max(biggest, std::abs(term[i][j]));
            }
        if (biggest < 1e-18) break;
    }
    return acc;
}

// Independent column recurrence for D(beta): column 0 is the coherent
// state, and D a^dag D^dag = a^dag - conj(beta) gives
//   col_{n+1}[m] = (sqrt(m) col_n[m-1] - conj(beta) col_n[m]) / sqrt(n+1).
inline Mat displacement_recurrence(cplx beta, int cutoff) {
    const int d = cutoff + 1;
    Mat m = zeros(d);
    double lognorm = -0.5 * std::norm(beta);
    cplx amp = std::exp(cplx(lognorm, 0.0));
    for (int row = 0; row < d; ++row) {
        m[row][0] = amp;
        amp *= beta / std::sqrt(row + 1.0);
    }
    for (int n = 0; n + 1 < d; ++n) {
        const double inv = 1.0 / std::sqrt(n + 1.0);
        for (int row = 0; row < d; ++row) {
            cplx up = (row > 0) ? std::sqrt(static_cast<double>(row)) * m[row - 1][n] : cplx(0.0);
            m[row][n + 1] = (up - std::conj(beta) * m[row][n]) * inv;
        }
    }
    return m;
}

// Physicists' Hermite polynomials H_n(z), direct three-term recurrence.
inline std::vector<double> hermite_h(int max_n, double z) {
    std::vector<double> h(max_n + 1);
    h[0] = 1.0;
    if (max_n >= 1) h[1] = 2.0 * z;
    for (int n = 2; n <= max_n; ++n) h[n] = 2.0 * z * h[n - 1] - 2.0 * (n - 1) * h[n - 2];
    return h;
}

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace oracle

#endif
