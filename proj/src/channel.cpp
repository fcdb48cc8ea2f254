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

#include "cvtele/channel.hpp"

#include <cmath>
#include <numbers>

#include "cvtele/kernels.hpp"

namespace cvtele::channel {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> geometric_weights(double ratio, std::size_t dim) {
    std::vector<double> w(dim);
    double p = 1.0;
    for (std::size_t n = 0; n < dim; ++n) {
        w[n] = p;
        p *= ratio;
    }
    return w;
}

// The tails of plane integrals run displacements past the validated extent
// on purpose; the boundary-mass diagnostic guards those, so the per-call
// extent warnings are muted inside the integration loops.
struct MuteWarnings {
    fock::WarningHandler previous;
    MuteWarnings() : previous(fock::set_warning_handler([](const std::string&) {})) {}
    ~MuteWarnings() { fock::set_warning_handler(std::move(previous)); }
};

void fill_coherent(cplx alpha, FockVector& v) {
    cplx amp = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
    const int n = static_cast<int>(v.size());
    for (int k = 0; k < n; ++k) {
        v[k] = amp;
        amp *= alpha / std::sqrt(k + 1.0);
    }
}

// Hermitian assembly of D diag(w) D^dag: real diagonal plus upper triangle,
// mirrored afterwards.
OperatorMatrix sandwich_diagonal(const OperatorMatrix& d, const std::vector<double>& w) {
    const std::size_t dim = d.dim();
    OperatorMatrix out(d.cutoff());
    for (std::size_t m = 0; m < dim; ++m) {
        out.at(m, m) = kernels::weighted_abs2(w.data(), d.row(m), dim);
        for (std::size_t n = m + 1; n < dim; ++n) {
            out.at(m, n) = kernels::wdotc(w.data(), d.row(m), d.row(n), dim);
        }
    }
    out.mirror_upper_to_lower();
    return out;
}

}  // namespace

ChannelParams::ChannelParams(double q_in, int cutoff_in, bool allow_high_q)
    : q(q_in), cutoff(cutoff_in) {
    if (!std::isfinite(q) || q < 0.0 || q >= 1.0) {
        throw std::domain_error("ChannelParams: q must lie in [0, 1)");
    }
    FockVector::check_cutoff(cutoff);
    if (q > kDefaultQMax) {
        if (!allow_high_q) {
            throw std::domain_error(
                "ChannelParams: q above 0.95 requires the explicit high-q override");
        }
        const double occupation = q * q / (1.0 - q * q);
        if (cutoff < 10.0 * occupation) {
            throw std::domain_error(
                "ChannelParams: cutoff too small for this q (need >= 10x the thermal occupation)");
        }
    }
}

SchmidtCoefficients epr_schmidt(const ChannelParams& params) {
    SchmidtCoefficients c(params.dim());
    const double head = std::sqrt(1.0 - params.q * params.q);
    double p = 1.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        c[n] = head * p;
        p *= params.q;
    }
    return c;
}

cplx coherent_centroid(const FockVector& psi) {
    cplx c = 0.0;
    for (std::size_t n = 0; n + 1 < psi.size(); ++n) {
        c += std::conj(psi[n]) * std::sqrt(static_cast<double>(n) + 1.0) * psi[n + 1];
    }
    return c;
}

OperatorMatrix transfer_operator(cplx beta, const ChannelParams& params) {
    OperatorMatrix d = fock::displacement_matrix(beta, params.cutoff);
    std::vector<double> c = geometric_weights(params.q, params.dim());
    const double head = std::sqrt((1.0 - params.q * params.q) / kPi);
    for (auto& x : c) x *= head;
    return sandwich_diagonal(d, c);
}

double coherent_rep_radius(double q) { return 4.0 * std::sqrt(q / (1.0 - q)) + 2.0; }

quad::IntegralResult<OperatorMatrix> transfer_operator_coherent_rep(
    cplx beta, const ChannelParams& params, const quad::QuadGrid& grid) {
    if (params.q <= 0.0) {
        throw std::domain_error("coherent representation is singular at q = 0");
    }
    const double q = params.q;
    const double pref = std::sqrt((1.0 - q * q) / (kPi * kPi * kPi * q * q));
    const double rate = (1.0 - q) / q;

    MuteWarnings mute;
    auto res = quad::integrate_rank1(grid, params.cutoff, [&](cplx alpha, FockVector& v) {
        fill_coherent(alpha, v);
        return pref * std::exp(-rate * std::norm(alpha - beta));
    });
    if (!grid.covers(beta, coherent_rep_radius(q))) res.converged = false;
    return res;
}

namespace detail {

DisplacedSums displaced_sums(const FockVector& psi, cplx beta, const ChannelParams& params) {
    if (static_cast<int>(psi.size()) != params.cutoff + 1) {
        throw std::invalid_argument("state cutoff does not match channel cutoff");
    }
    OperatorMatrix dm = fock::displacement_matrix(-beta, params.cutoff);
    FockVector w = apply(dm, psi);
    DisplacedSums s;
    const std::vector<double> q1 = geometric_weights(params.q, params.dim());
    const std::vector<double> q2 = geometric_weights(params.q * params.q, params.dim());
    s.s1 = kernels::weighted_abs2(q1.data(), w.data(), w.size());
    s.s2 = kernels::weighted_abs2(q2.data(), w.data(), w.size());
    return s;
}

}  // namespace detail

double measurement_probability(const FockVector& psi, cplx beta, const ChannelParams& params) {
    fock::require_normalized(psi);
    const auto s = detail::displaced_sums(psi, beta, params);
    return (1.0 - params.q * params.q) / kPi * s.s2;
}

TeleportResult teleport_pure(const FockVector& psi, cplx beta, const ChannelParams& params) {
    fock::require_normalized(psi);
    if (static_cast<int>(psi.size()) != params.cutoff + 1) {
        throw std::invalid_argument("state cutoff does not match channel cutoff");
    }
    TeleportResult out;
    out.beta = beta;

    OperatorMatrix d = fock::displacement_matrix(beta, params.cutoff);
    OperatorMatrix da = d.adjoint();
    FockVector w = apply(da, psi);
    std::vector<double> c = geometric_weights(params.q, params.dim());
    const double head = std::sqrt((1.0 - params.q * params.q) / kPi);
    for (std::size_t n = 0; n < w.size(); ++n) w[n] *= head * c[n];
    FockVector t = apply(d, w);

    out.weight = t.norm2();
    if (out.weight < kUnderflowThreshold) {
        out.underflow = true;
        return out;
    }
    const cplx amp = kernels::cdotc(psi.data(), t.data(), t.size());
    out.conditional_fidelity = std::min(1.0, std::norm(amp) / out.weight);
    const double inv = 1.0 / std::sqrt(out.weight);
    for (std::size_t n = 0; n < t.size(); ++n) t[n] *= inv;
    out.output = std::move(t);
    return out;
}

double conditional_fidelity(const FockVector& psi, cplx beta, const ChannelParams& params) {
    fock::require_normalized(psi);
    const auto s = detail::displaced_sums(psi, beta, params);
    const double p = (1.0 - params.q * params.q) / kPi * s.s2;
    if (p < kUnderflowThreshold) {
        throw std::underflow_error("conditional_fidelity: P(beta) underflowed");
    }
    return std::min(1.0, s.s1 * s.s1 / s.s2);
}

quad::IntegralResult<double> average_fidelity(const FockVector& psi,
                                              const ChannelParams& params,
                                              const quad::QuadGrid& grid) {
    fock::require_normalized(psi);
    const double pref = (1.0 - params.q * params.q) / kPi;
    MuteWarnings mute;
    return quad::integrate(grid, [&](cplx beta) {
        const auto s = detail::displaced_sums(psi, beta, params);
        return pref * s.s1 * s.s1;
    });
}

quad::IntegralResult<OperatorMatrix> output_density_matrix(const FockVector& psi,
                                                           const ChannelParams& params,
                                                           const quad::QuadGrid& grid) {
    fock::require_normalized(psi);
    const std::vector<double> base = geometric_weights(params.q, params.dim());
    const double head = std::sqrt((1.0 - params.q * params.q) / kPi);
    MuteWarnings mute;
    return quad::integrate_rank1(grid, params.cutoff, [&](cplx beta, FockVector& v) {
        OperatorMatrix d = fock::displacement_matrix(beta, params.cutoff);
        FockVector w = apply(d.adjoint(), psi);
        for (std::size_t n = 0; n < w.size(); ++n) w[n] *= head * base[n];
        kernels::matvec(d.data(), w.data(), v.data(), d.dim());
        return 1.0;
    });
}

quad::IntegralResult<OperatorMatrix> reference_povm_completeness(const FockVector& psi_r,
                                                                 const quad::QuadGrid& grid,
                                                                 int interior_dim) {
    fock::require_normalized(psi_r);
    const FockVector conj = psi_r.conjugated();
    const int cutoff = conj.cutoff();
    MuteWarnings mute;
    return quad::integrate_rank1(
        grid, cutoff,
        [&](cplx beta, FockVector& v) {
            OperatorMatrix d = fock::displacement_matrix(beta, cutoff);
            kernels::matvec(d.data(), conj.data(), v.data(), d.dim());
            return 1.0 / kPi;
        },
        interior_dim);
}

quad::IntegralResult<OperatorMatrix> transfer_squared_integral(const ChannelParams& params,
                                                               const quad::QuadGrid& grid,
                                                               int interior_dim) {
    std::vector<double> c2 = geometric_weights(params.q * params.q, params.dim());
    const double head = (1.0 - params.q * params.q) / kPi;
    for (auto& x : c2) x *= head;
    MuteWarnings mute;
    return quad::integrate_matrix(
        grid, params.cutoff,
        [&](cplx beta, OperatorMatrix& out) {
            OperatorMatrix d = fock::displacement_matrix(beta, params.cutoff);
            out = sandwich_diagonal(d, c2);
        },
        interior_dim);
}

}  // namespace cvtele::channel
