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

#include "cvtele/fock.hpp"

#include <cmath>
#include <iostream>
#include <mutex>

#include "cvtele/kernels.hpp"

namespace cvtele {

double FockVector::norm2() const {
    return kernels::abs2_sum(amps_.data(), amps_.size());
}

bool FockVector::is_normalized(double tol) const {
    return std::abs(norm2() - 1.0) <= tol;
}

FockVector FockVector::normalized() const {
    const double n2 = norm2();
    if (n2 < 1e-280) throw std::domain_error("cannot normalize a zero-norm state");
    FockVector out = *this;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : out.amps_) a *= inv;
    return out;
}

FockVector FockVector::conjugated() const {
    FockVector out = *this;
    for (auto& a : out.amps_) a = std::conj(a);
    return out;
}

OperatorMatrix OperatorMatrix::identity(int cutoff) {
    OperatorMatrix m(cutoff);
    for (std::size_t i = 0; i < m.dim_; ++i) m.at(i, i) = 1.0;
    return m;
}

OperatorMatrix OperatorMatrix::adjoint() const {
    OperatorMatrix out(cutoff());
    for (std::size_t m = 0; m < dim_; ++m) {
        for (std::size_t n = 0; n < dim_; ++n) {
            out.at(n, m) = std::conj(at(m, n));
        }
    }
    return out;
}

void OperatorMatrix::mirror_upper_to_lower() {
    for (std::size_t m = 1; m < dim_; ++m) {
        for (std::size_t n = 0; n < m; ++n) {
            at(m, n) = std::conj(at(n, m));
        }
    }
}

cplx OperatorMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double OperatorMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

FockVector apply(const OperatorMatrix& a, const FockVector& v) {
    if (a.dim() != v.size()) throw std::invalid_argument("apply: cutoff mismatch");
    FockVector out(a.cutoff());
    kernels::matvec(a.data(), v.data(), out.data(), a.dim());
    return out;
}

OperatorMatrix multiply(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("multiply: cutoff mismatch");
    const std::size_t d = a.dim();
    OperatorMatrix out(a.cutoff());
    // out[m] += a[m][k] * b[k] row-wise, streaming over b's rows.
    for (std::size_t m = 0; m < d; ++m) {
        cplx* dst = out.row(m);
        const cplx* arow = a.row(m);
        for (std::size_t k = 0; k < d; ++k) {
            if (arow[k] != 0.0) kernels::axpy(arow[k], b.row(k), dst, d);
        }
    }
    return out;
}

cplx expectation(const FockVector& u, const OperatorMatrix& a, const FockVector& v) {
    FockVector av = apply(a, v);
    return kernels::cdotc(u.data(), av.data(), av.size());
}

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b, int interior) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: cutoff mismatch");
    std::size_t lim = a.dim();
    if (interior >= 0) lim = std::min<std::size_t>(lim, static_cast<std::size_t>(interior));
    double worst = 0.0;
    for (std::size_t m = 0; m < lim; ++m) {
        for (std::size_t n = 0; n < lim; ++n) {
            worst = std::max(worst, std::abs(a.at(m, n) - b.at(m, n)));
        }
    }
    return worst;
}

namespace fock {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn_handler;

std::vector<double> log_factorials(int up_to) {
    std::vector<double> lf(static_cast<std::size_t>(up_to) + 1, 0.0);
    for (int n = 2; n <= up_to; ++n) lf[n] = std::lgamma(static_cast<double>(n) + 1.0);
    return lf;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    std::swap(g_warn_handler, handler);
    return handler;
}

void emit_warning(const std::string& message) {
    WarningHandler h;
    {
        std::lock_guard<std::mutex> lock(g_warn_mutex);
        h = g_warn_handler;
    }
    if (h) {
        h(message);
    } else {
        std::cerr << "cvteleport: warning: " << message << "\n";
    }
}

void require_normalized(const FockVector& psi, double tol) {
    if (psi.empty()) throw std::invalid_argument("state is empty");
    if (!psi.is_normalized(tol)) {
        throw std::invalid_argument("state is not normalized (|norm^2 - 1| > tolerance)");
    }
}

FockVector number_state(int n, int cutoff) {
    FockVector::check_cutoff(cutoff);
    if (n < 0 || n > cutoff) throw std::domain_error("number_state: n out of [0, cutoff]");
    FockVector v(cutoff);
    v[static_cast<std::size_t>(n)] = 1.0;
    return v;
}

CoherentState coherent_state(cplx alpha, int cutoff) {
    FockVector::check_cutoff(cutoff);
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw std::domain_error("coherent_state: non-finite alpha");
    }
    FockVector v(cutoff);
    cplx amp = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
    for (int n = 0; n <= cutoff; ++n) {
        v[static_cast<std::size_t>(n)] = amp;
        amp *= alpha / std::sqrt(static_cast<double>(n) + 1.0);
    }
    const double leak = 1.0 - v.norm2();
    return {std::move(v), leak};
}

OperatorMatrix displacement_matrix(cplx beta, int cutoff) {
    FockVector::check_cutoff(cutoff);
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
        throw std::domain_error("displacement_matrix: non-finite beta");
    }
    const double babs = std::abs(beta);
    if (babs == 0.0) return OperatorMatrix::identity(cutoff);
    if (babs > validated_beta_max(cutoff)) {
        emit_warning("displacement |beta|=" + std::to_string(babs) +
                     " exceeds the validated extent for cutoff " + std::to_string(cutoff));
    }

    const int dim = cutoff + 1;
    const double x = babs * babs;
    const double lnb = std::log(babs);
    const auto lfact = log_factorials(cutoff);
    OperatorMatrix out(cutoff);

    // Unit phases of beta^k on the lower triangle and (-conj(beta))^k on the
    // upper one; building the m<n elements from the -beta formula keeps
    // D(-beta) == D(beta)^dagger exact at the bit level.
    const cplx unit_lo = beta / babs;
    const cplx unit_up = -std::conj(beta) / babs;

    constexpr double kRescale = 1e250;
    const double log_rescale = std::log(kRescale);

    cplx phase_lo = 1.0, phase_up = 1.0;
    for (int k = 0; k < dim; ++k) {
        if (k > 0) {
            phase_lo *= unit_lo;
            phase_up *= unit_up;
        }
        // Associated Laguerre L_n^{(k)}(x) by upward recurrence in n, with
        // magnitude tracked against a running log-scale so sqrt(n!/m!) and
        // L can both leave double range individually.
        double log_scale = 0.0;
        double lprev = 0.0;                               // L_{-1}
        double lcur = 1.0;                                // L_0
        for (int n = 0; n + k < dim; ++n) {
            const int m = n + k;
            double mag = 0.0;
            if (lcur != 0.0) {
                const double lp = 0.5 * (lfact[n] - lfact[m]) + k * lnb - 0.5 * x +
                                  log_scale + std::log(std::abs(lcur));
                mag = std::exp(lp);
            }
            const double val = (lcur < 0.0) ? -mag : mag;
            out.at(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) = val * phase_lo;
            if (k > 0) {
                out.at(static_cast<std::size_t>(n), static_cast<std::size_t>(m)) = val * phase_up;
            }
            // advance recurrence: (n+1) L_{n+1} = (2n+1+k-x) L_n - (n+k) L_{n-1}
            const double lnext =
                ((2.0 * n + 1.0 + k - x) * lcur - (n + k) * lprev) / (n + 1.0);
            lprev = lcur;
            lcur = lnext;
            const double biggest = std::max(std::abs(lcur), std::abs(lprev));
            if (biggest > kRescale) {
                lcur /= kRescale;
                lprev /= kRescale;
                log_scale += log_rescale;
            } else if (biggest != 0.0 && biggest < 1.0 / kRescale) {
                lcur *= kRescale;
                lprev *= kRescale;
                log_scale -= log_rescale;
            }
        }
    }
    return out;
}

FockVector displaced_number_state(cplx beta, int n, int cutoff) {
    FockVector::check_cutoff(cutoff);
    if (n < 0 || n > cutoff) throw std::domain_error("displaced_number_state: n out of range");
    if (std::abs(beta) == 0.0) return number_state(n, cutoff);
    OperatorMatrix d = displacement_matrix(beta, cutoff);
    FockVector v(cutoff);
    for (int m = 0; m <= cutoff; ++m) {
        v[static_cast<std::size_t>(m)] = d.at(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
    }
    return v;
}

QuadraturePair quadrature_operators(int cutoff) {
    if (cutoff < 1) throw std::domain_error("quadrature_operators: cutoff must be >= 1");
    OperatorMatrix x(cutoff), y(cutoff);
    for (int n = 1; n <= cutoff; ++n) {
        const double s = 0.5 * std::sqrt(static_cast<double>(n));
        const std::size_t un = static_cast<std::size_t>(n);
        x.at(un - 1, un) = s;       // <n-1| a |n> / 2
        x.at(un, un - 1) = s;
        y.at(un - 1, un) = cplx(0.0, -s);
        y.at(un, un - 1) = cplx(0.0, s);
    }
    return {std::move(x), std::move(y)};
}

cplx overlap(const FockVector& u, const FockVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("overlap: cutoff mismatch");
    return kernels::cdotc(u.data(), v.data(), u.size());
}

FockVector cat_state(cplx alpha, int sign, int cutoff) {
    if (sign != 1 && sign != -1) throw std::domain_error("cat_state: sign must be +1 or -1");
    const CoherentState plus = coherent_state(alpha, cutoff);
    const CoherentState minus = coherent_state(-alpha, cutoff);
    FockVector v(cutoff);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = plus.state[i] + static_cast<double>(sign) * minus.state[i];
    }
    const double exact_norm2 = 2.0 * (1.0 + sign * std::exp(-2.0 * std::norm(alpha)));
    if (exact_norm2 < 1e-280) {
        throw std::domain_error("cat_state: zero-norm superposition");
    }
    const double trunc_norm2 = v.norm2();
    const double leakage = 1.0 - trunc_norm2 / exact_norm2;
    if (leakage > 1e-6) {
        throw CutoffTooSmallError("cat_state: leakage " + std::to_string(leakage) +
                                  " exceeds 1e-6; raise the cutoff");
    }
    return v.normalized();
}

FockVector squeezed_vacuum(double r, int cutoff) {
    FockVector::check_cutoff(cutoff);
    if (!std::isfinite(r)) throw std::domain_error("squeezed_vacuum: non-finite r");
    FockVector v(cutoff);
    const double t = std::tanh(r);
    double c = 1.0 / std::sqrt(std::cosh(r));
    for (int m = 0; 2 * m <= cutoff; ++m) {
        v[static_cast<std::size_t>(2 * m)] = c;
        c *= -t * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1.0));
    }
    const double leakage = 1.0 - v.norm2();
    if (leakage > 1e-6) {
        throw CutoffTooSmallError("squeezed_vacuum: leakage " + std::to_string(leakage) +
                                  " exceeds 1e-6; raise the cutoff");
    }
    return v.normalized();
}

int interior_dim(int cutoff, double displacement) {
    const int excluded = static_cast<int>(std::ceil(4.0 * displacement * displacement + 8.0));
    return std::max(0, cutoff + 1 - excluded);
}

double validated_beta_max(int cutoff) {
    if (cutoff <= 8) return 0.0;
    return std::sqrt((cutoff - 8) / 4.0);
}

}  // namespace fock
}  // namespace cvtele
