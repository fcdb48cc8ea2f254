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

#ifndef CVTELE_VERIFY_HPP
#define CVTELE_VERIFY_HPP

#include <string>

#include "cvtele/channel.hpp"
#include "cvtele/quad.hpp"

namespace cvtele::verify {

/// <x|n> for n = 0..cutoff under the vacuum-variance-1/4 convention:
/// (2/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2) x) e^{-x^2}, evaluated through
/// the normalized Hermite-function recurrence.
std::vector<double> quadrature_amplitudes(double x, int cutoff);

/// Homodyne density p(x) = |sum_n <x|n> psi_n|^2 at the given nodes.
std::vector<double> homodyne_distribution(const FockVector& psi,
                                          const std::vector<double>& x_nodes);
/// Ensemble version: p(x) = <x| rho |x>.
std::vector<double> homodyne_distribution(const OperatorMatrix& rho,
                                          const std::vector<double>& x_nodes);

enum class BasisKind { homodyne_x, homodyne_y, eight_port, number };
std::string basis_kind_name(BasisKind kind);
BasisKind parse_basis_kind(const std::string& name);

/// Discretized POVM: outcome states |V_k> with weights w_k chosen so
/// sum_k w_k |V_k><V_k| resolves the interior identity.
class VerificationBasis {
  public:
    BasisKind kind() const { return kind_; }
    int cutoff() const { return cutoff_; }
    std::size_t size() const { return weights_.size(); }
    double weight(std::size_t k) const { return weights_[k]; }
    /// Amplitudes of |V_k> in the Fock basis.
    const cplx* state_row(std::size_t k) const { return states_.data() + k * (cutoff_ + 1); }
    /// Label of outcome k: x value, alpha (re, im), or photon number.
    cplx label(std::size_t k) const { return labels_[k]; }

    OperatorMatrix completeness_matrix() const;
    /// max |sum w VV^dag - I| over the leading `interior` block
    /// (default: n <= cutoff/2).
    double completeness_deviation(int interior = -1) const;

    static VerificationBasis homodyne(BasisKind xy, double center, double half_width,
                                      int points, int cutoff);
    /// 801 points over mean +/- 8 standard deviations of the target state.
    static VerificationBasis homodyne_for_state(BasisKind xy, const FockVector& target,
                                                int points = 801);
    static VerificationBasis eight_port(const quad::QuadGrid& alpha_grid, int cutoff);
    static VerificationBasis number(int cutoff);

  private:
    BasisKind kind_ = BasisKind::number;
    int cutoff_ = 0;
    std::vector<double> weights_;
    std::vector<cplx> states_;  // row-major size() x (cutoff+1)
    std::vector<cplx> labels_;
};

struct QFunction {
    std::vector<double> values;  // Q(alpha) = |<alpha|psi>|^2 / pi per node
    double total_mass = 0.0;
    double boundary_mass = 0.0;
    bool converged = false;
};
QFunction eight_port_distribution(const FockVector& psi, const quad::QuadGrid& alpha_grid);

struct JointDistribution {
    quad::QuadGrid beta_grid;
    std::size_t n_beta = 0;
    std::size_t n_v = 0;
    std::vector<double> table;          // row-major [beta][v]
    std::vector<double> beta_marginal;  // sum_k w_k P(beta_i, V_k)
    std::vector<double> v_marginal;     // integral over beta of P(., V_k)
    double total_mass = 0.0;
    double boundary_mass = 0.0;
    bool converged = false;

    double at(std::size_t beta_index, std::size_t v_index) const {
        return table[beta_index * n_v + v_index];
    }
};

/// P(beta, V) = |<V| T(beta) |psi>|^2 over the outcome grid x basis.
/// Requires the basis completeness check (deviation < 1e-4) to pass.
JointDistribution joint_distribution(const FockVector& psi,
                                     const channel::ChannelParams& params,
                                     const VerificationBasis& basis,
                                     const quad::QuadGrid& beta_grid);

/// The effective eight-port measurement state: T(beta)|alpha>/sqrt(pi) =
/// prefactor * |state>, with prefactor real and gamma = beta + q(alpha-beta).
/// The returned coherent state carries the teleportation phase so the
/// identity holds entrywise, not just up to phase.
struct EffectiveState {
    double prefactor = 0.0;
    cplx gamma;
    FockVector state;
};
EffectiveState effective_measurement_state(cplx beta, cplx alpha,
                                           const channel::ChannelParams& params);

/// gamma = beta + q (alpha - beta)
cplx reconstruct_gamma(cplx beta, cplx alpha, double q);

}  // namespace cvtele::verify

#endif
