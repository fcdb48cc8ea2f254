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

#include "cvtele/verify.hpp"

#include <cmath>
#include <numbers>

#include "cvtele/kernels.hpp"

namespace cvtele::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct MuteWarnings {
    fock::WarningHandler previous;
    MuteWarnings() : previous(fock::set_warning_handler([](const std::string&) {})) {}
    ~MuteWarnings() { fock::set_warning_handler(std::move(previous)); }
};

// normalized Hermite function h_n(z) = H_n(z) e^{-z^2/2} / sqrt(2^n n! sqrt(pi))
void hermite_functions(double z, int cutoff, std::vector<double>& h) {
    h.resize(static_cast<std::size_t>(cutoff) + 1);
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * z * z);
    if (cutoff >= 1) h[1] = std::sqrt(2.0) * z * h[0];
    for (int n = 1; n < cutoff; ++n) {
        h[n + 1] = std::sqrt(2.0 / (n + 1.0)) * z * h[n] -
                   std::sqrt(static_cast<double>(n) / (n + 1.0)) * h[n - 1];
    }
}

std::pair<double, double> quadrature_moments(const FockVector& psi, bool y_axis) {
    auto [x, y] = fock::quadrature_operators(std::max(1, psi.cutoff()));
    const OperatorMatrix& op = y_axis ? y : x;
    const double mean = expectation(psi, op, psi).real();
    const double second = expectation(psi, multiply(op, op), psi).real();
    return {mean, std::sqrt(std::max(0.0, second - mean * mean))};
}

}  // namespace

std::vector<double> quadrature_amplitudes(double x, int cutoff) {
    if (!std::isfinite(x)) throw std::domain_error("quadrature_amplitudes: non-finite x");
    FockVector::check_cutoff(cutoff);
    std::vector<double> h;
    hermite_functions(std::sqrt(2.0) * x, cutoff, h);
    const double scale = std::pow(2.0, 0.25);
    for (auto& v : h) v *= scale;
    return h;
}

std::vector<double> homodyne_distribution(const FockVector& psi,
                                          const std::vector<double>& x_nodes) {
    fock::require_normalized(psi);
    std::vector<double> out(x_nodes.size());
    std::vector<double> h;
    for (std::size_t i = 0; i < x_nodes.size(); ++i) {
        hermite_functions(std::sqrt(2.0) * x_nodes[i], psi.cutoff(), h);
        cplx amp = 0.0;
        for (std::size_t n = 0; n < psi.size(); ++n) amp += h[n] * psi[n];
        out[i] = std::sqrt(2.0) * std::norm(amp);  // (2^{1/4})^2
    }
    return out;
}

std::vector<double> homodyne_distribution(const OperatorMatrix& rho,
                                          const std::vector<double>& x_nodes) {
    std::vector<double> out(x_nodes.size());
    std::vector<double> h;
    std::vector<cplx> hv(rho.dim());
    std::vector<cplx> tmp(rho.dim());
    for (std::size_t i = 0; i < x_nodes.size(); ++i) {
        hermite_functions(std::sqrt(2.0) * x_nodes[i], rho.cutoff(), h);
        for (std::size_t n = 0; n < rho.dim(); ++n) hv[n] = h[n];
        kernels::matvec(rho.data(), hv.data(), tmp.data(), rho.dim());
        out[i] = std::sqrt(2.0) * kernels::cdotc(hv.data(), tmp.data(), rho.dim()).real();
    }
    return out;
}

std::string basis_kind_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::homodyne_x: return "homodyne-x";
        case BasisKind::homodyne_y: return "homodyne-y";
        case BasisKind::eight_port: return "eight-port";
        case BasisKind::number: return "number";
    }
    return "unknown";
}

BasisKind parse_basis_kind(const std::string& name) {
    if (name == "homodyne-x") return BasisKind::homodyne_x;
    if (name == "homodyne-y") return BasisKind::homodyne_y;
    if (name == "eight-port") return BasisKind::eight_port;
    if (name == "number") return BasisKind::number;
    throw std::invalid_argument("unknown verification basis: " + name);
}

OperatorMatrix VerificationBasis::completeness_matrix() const {
    OperatorMatrix m(cutoff_);
    const std::size_t dim = static_cast<std::size_t>(cutoff_) + 1;
    for (std::size_t k = 0; k < size(); ++k) {
        const cplx* v = state_row(k);
        const double w = weights_[k];
        for (std::size_t r = 0; r < dim; ++r) {
            m.at(r, r) += w * std::norm(v[r]);
            kernels::axpy_conj(w * v[r], v + r + 1, m.row(r) + r + 1, dim - r - 1);
        }
    }
    m.mirror_upper_to_lower();
    return m;
}

double VerificationBasis::completeness_deviation(int interior) const {
    if (interior < 0) interior = cutoff_ / 2 + 1;
    OperatorMatrix m = completeness_matrix();
    return max_abs_diff(m, OperatorMatrix::identity(cutoff_), interior);
}

VerificationBasis VerificationBasis::homodyne(BasisKind xy, double center, double half_width,
                                              int points, int cutoff) {
    if (xy != BasisKind::homodyne_x && xy != BasisKind::homodyne_y) {
        throw std::invalid_argument("homodyne basis kind must be homodyne-x or homodyne-y");
    }
    if (points < 3) throw std::domain_error("homodyne basis needs at least 3 points");
    if (!(half_width > 0.0)) throw std::domain_error("homodyne basis needs positive width");
    FockVector::check_cutoff(cutoff);

    VerificationBasis b;
    b.kind_ = xy;
    b.cutoff_ = cutoff;
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    const double h = 2.0 * half_width / (points - 1);
    b.weights_.resize(points);
    b.labels_.resize(points);
    b.states_.resize(points * dim);

    std::vector<double> amps;
    for (int k = 0; k < points; ++k) {
        const double x = center - half_width + k * h;
        b.labels_[k] = x;
        b.weights_[k] = (k == 0 || k == points - 1) ? 0.5 * h : h;
        amps = quadrature_amplitudes(x, cutoff);
        cplx* row = b.states_.data() + static_cast<std::size_t>(k) * dim;
        if (xy == BasisKind::homodyne_x) {
            for (std::size_t n = 0; n < dim; ++n) row[n] = amps[n];
        } else {
            // |y;n> picks up (-i)^n relative to the x eigenfunctions
            cplx phase(1.0, 0.0);
            for (std::size_t n = 0; n < dim; ++n) {
                row[n] = phase * amps[n];
                phase *= cplx(0.0, -1.0);
            }
        }
    }
    return b;
}

VerificationBasis VerificationBasis::homodyne_for_state(BasisKind xy, const FockVector& target,
                                                        int points) {
    auto [mean, sd] = quadrature_moments(target, xy == BasisKind::homodyne_y);
    // mean +/- 8 sd of the target, but never narrower than the classical
    // turning point of the deepest interior level the completeness claim
    // covers (n = cutoff/2), whose eigenfunction must fit in the window
    const double turning = std::sqrt((2.0 * (target.cutoff() / 2) + 1.0) / 4.0);
    const double half = std::max(8.0 * std::max(sd, 0.5), turning + 4.0);
    return homodyne(xy, mean, half, points, target.cutoff());
}

VerificationBasis VerificationBasis::eight_port(const quad::QuadGrid& alpha_grid, int cutoff) {
    FockVector::check_cutoff(cutoff);
    VerificationBasis b;
    b.kind_ = BasisKind::eight_port;
    b.cutoff_ = cutoff;
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    const std::size_t count = alpha_grid.node_count();
    b.weights_.resize(count);
    b.labels_.resize(count);
    b.states_.resize(count * dim);
    for (std::size_t k = 0; k < count; ++k) {
        const cplx alpha = alpha_grid.node(k);
        b.labels_[k] = alpha;
        b.weights_[k] = alpha_grid.weight(k) / kPi;
        cplx* row = b.states_.data() + k * dim;
        cplx amp = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
        for (std::size_t n = 0; n < dim; ++n) {
            row[n] = amp;
            amp *= alpha / std::sqrt(static_cast<double>(n) + 1.0);
        }
    }
    return b;
}

VerificationBasis VerificationBasis::number(int cutoff) {
    FockVector::check_cutoff(cutoff);
    VerificationBasis b;
    b.kind_ = BasisKind::number;
    b.cutoff_ = cutoff;
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    b.weights_.assign(dim, 1.0);
    b.labels_.resize(dim);
    b.states_.assign(dim * dim, cplx(0.0));
    for (std::size_t n = 0; n < dim; ++n) {
        b.labels_[n] = static_cast<double>(n);
        b.states_[n * dim + n] = 1.0;
    }
    return b;
}

QFunction eight_port_distribution(const FockVector& psi, const quad::QuadGrid& alpha_grid) {
    fock::require_normalized(psi);
    QFunction out;
    out.values.resize(alpha_grid.node_count());
    double total_abs = 0.0, boundary_abs = 0.0;
    FockVector coh(psi.cutoff());
    for (std::size_t k = 0; k < alpha_grid.node_count(); ++k) {
        const cplx alpha = alpha_grid.node(k);
        cplx amp = std::exp(cplx(-0.5 * std::norm(alpha), 0.0));
        for (std::size_t n = 0; n < psi.size(); ++n) {
            coh[n] = amp;
            amp *= alpha / std::sqrt(static_cast<double>(n) + 1.0);
        }
        const double q_val = std::norm(fock::overlap(coh, psi)) / kPi;
        out.values[k] = q_val;
        out.total_mass += alpha_grid.weight(k) * q_val;
        total_abs += q_val;
        if (alpha_grid.on_boundary(k)) boundary_abs += q_val;
    }
    out.boundary_mass = (total_abs > 0.0) ? boundary_abs / total_abs : 0.0;
    out.converged = out.boundary_mass <= quad::kBoundaryMassTolerance;
    return out;
}

JointDistribution joint_distribution(const FockVector& psi,
                                     const channel::ChannelParams& params,
                                     const VerificationBasis& basis,
                                     const quad::QuadGrid& beta_grid) {
    fock::require_normalized(psi);
    if (basis.cutoff() != params.cutoff || psi.cutoff() != params.cutoff) {
        throw std::invalid_argument("joint_distribution: cutoff mismatch");
    }
    if (basis.completeness_deviation() > 1e-4) {
        throw std::invalid_argument(
            "joint_distribution: basis fails the completeness check (deviation > 1e-4)");
    }

    MuteWarnings mute;
    JointDistribution j;
    j.beta_grid = beta_grid;
    j.n_beta = beta_grid.node_count();
    j.n_v = basis.size();
    j.table.resize(j.n_beta * j.n_v);
    j.beta_marginal.resize(j.n_beta);
    j.v_marginal.assign(j.n_v, 0.0);

    const std::size_t dim = params.dim();
    std::vector<double> qpow(dim);
    {
        double p = 1.0;
        for (auto& x : qpow) {
            x = p;
            p *= params.q;
        }
    }
    const double head = std::sqrt((1.0 - params.q * params.q) / kPi);

    FockVector w(params.cutoff), t(params.cutoff);
    double total_abs = 0.0, boundary_abs = 0.0;
    for (std::size_t i = 0; i < j.n_beta; ++i) {
        const cplx beta = beta_grid.node(i);
        OperatorMatrix d = fock::displacement_matrix(beta, params.cutoff);
        OperatorMatrix da = d.adjoint();
        kernels::matvec(da.data(), psi.data(), w.data(), dim);
        for (std::size_t n = 0; n < dim; ++n) w[n] *= head * qpow[n];
        kernels::matvec(d.data(), w.data(), t.data(), dim);

        double marg = 0.0;
        double* row = j.table.data() + i * j.n_v;
        for (std::size_t k = 0; k < j.n_v; ++k) {
            const double p = std::norm(kernels::cdotc(basis.state_row(k), t.data(), dim));
            row[k] = p;
            marg += basis.weight(k) * p;
            j.v_marginal[k] += beta_grid.weight(i) * p;
        }
        j.beta_marginal[i] = marg;
        j.total_mass += beta_grid.weight(i) * marg;
        total_abs += marg;
        if (beta_grid.on_boundary(i)) boundary_abs += marg;
    }
    j.boundary_mass = (total_abs > 0.0) ? boundary_abs / total_abs : 0.0;
    j.converged = j.boundary_mass <= quad::kBoundaryMassTolerance;
    return j;
}

EffectiveState effective_measurement_state(cplx beta, cplx alpha,
                                           const channel::ChannelParams& params) {
    const double q = params.q;
    EffectiveState out;
    out.gamma = reconstruct_gamma(beta, alpha, q);
    out.prefactor = std::sqrt(1.0 - q * q) / kPi *
                    std::exp(-0.5 * (1.0 - q * q) * std::norm(alpha - beta));
    // Global phase accumulated by D(beta) q^N D(-beta) acting on |alpha>;
    // carrying it in the state makes T(beta)|alpha> = sqrt(pi) pref |state>
    // an entrywise identity.
    const double phase_angle = -(1.0 - q) * std::imag(beta * std::conj(alpha));
    const cplx phase = std::exp(cplx(0.0, phase_angle));
    FockVector coh = fock::coherent_state(out.gamma, params.cutoff).state.normalized();
    for (std::size_t n = 0; n < coh.size(); ++n) coh[n] *= phase;
    out.state = std::move(coh);
    return out;
}

cplx reconstruct_gamma(cplx beta, cplx alpha, double q) {
    return beta + q * (alpha - beta);
}

}  // namespace cvtele::verify
