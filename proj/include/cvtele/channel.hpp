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

#ifndef CVTELE_CHANNEL_HPP
#define CVTELE_CHANNEL_HPP

#include "cvtele/fock.hpp"
#include "cvtele/quad.hpp"

namespace cvtele::channel {

/// Weight below which a conditioning outcome is treated as numerically
/// impossible rather than divided through.
inline constexpr double kUnderflowThreshold = 1e-300;

/// Entanglement parameter q in [0,1) plus the truncation cutoff.
/// q above 0.95 requires an explicit opt-in together with a cutoff at
/// least 10x the effective thermal occupation q^2/(1-q^2).
struct ChannelParams {
    double q;
    int cutoff;

    static constexpr double kDefaultQMax = 0.95;

    ChannelParams(double q_in, int cutoff_in, bool allow_high_q = false);
    std::size_t dim() const { return static_cast<std::size_t>(cutoff) + 1; }
};

/// Schmidt coefficients c_n = sqrt(1-q^2) q^n of the two-mode resource.
using SchmidtCoefficients = std::vector<double>;
SchmidtCoefficients epr_schmidt(const ChannelParams& params);

/// Mean-field label <psi|a|psi> of a normalized state.
cplx coherent_centroid(const FockVector& psi);

/// The transfer operator conditioned on measurement outcome beta:
/// sqrt((1-q^2)/pi) sum_n q^n D(beta)|n><n|D(-beta). Hermitian PSD by
/// construction.
OperatorMatrix transfer_operator(cplx beta, const ChannelParams& params);

/// Same operator assembled from its coherent-state integral representation,
/// a Gaussian-weighted mixture of coherent projectors. Requires q > 0 and a
/// grid covering beta with extent >= 4 sqrt(q/(1-q)) + 2.
quad::IntegralResult<OperatorMatrix> transfer_operator_coherent_rep(
    cplx beta, const ChannelParams& params, const quad::QuadGrid& grid);
double coherent_rep_radius(double q);

/// Outcome density P(beta), evaluated as the displaced photon-number sum
/// (1-q^2)/pi sum_n q^{2n} |<n|D(-beta)|psi>|^2.
double measurement_probability(const FockVector& psi, cplx beta, const ChannelParams& params);

struct TeleportResult {
    cplx beta;
    double weight = 0.0;           // squared norm of T(beta)|psi>, equals P(beta)
    FockVector output;             // normalized; empty when underflowed
    double conditional_fidelity = 0.0;
    bool underflow = false;        // weight below kUnderflowThreshold
};
TeleportResult teleport_pure(const FockVector& psi, cplx beta, const ChannelParams& params);

/// F(beta) = |<psi|T(beta)|psi>|^2 / P(beta), in [0,1].
/// Throws std::underflow_error when P(beta) is below the threshold.
double conditional_fidelity(const FockVector& psi, cplx beta, const ChannelParams& params);

/// F_av = integral over the plane of |<psi|T(beta)|psi>|^2.
quad::IntegralResult<double> average_fidelity(const FockVector& psi,
                                              const ChannelParams& params,
                                              const quad::QuadGrid& grid);

/// rho_out = integral of T|psi><psi|T over outcomes; Hermitian, trace ~1.
quad::IntegralResult<OperatorMatrix> output_density_matrix(const FockVector& psi,
                                                           const ChannelParams& params,
                                                           const quad::QuadGrid& grid);

/// (1/pi) integral of D(beta)|psi_R*><psi_R*|D(-beta): the resolution of
/// identity furnished by any normalized reference state. The caller checks
/// closeness to the identity on the interior subspace.
quad::IntegralResult<OperatorMatrix> reference_povm_completeness(const FockVector& psi_r,
                                                                 const quad::QuadGrid& grid,
                                                                 int interior_dim = 0);

/// integral of T^2(beta) over the grid; identity on the interior subspace.
/// The integrand's full-matrix norm does not decay with |beta| (the high
/// levels keep collecting mass), so the convergence diagnostic is scoped to
/// the leading interior_dim x interior_dim block being checked.
quad::IntegralResult<OperatorMatrix> transfer_squared_integral(const ChannelParams& params,
                                                               const quad::QuadGrid& grid,
                                                               int interior_dim);

namespace detail {
/// Displaced-frame amplitudes w = D(-beta) psi plus the two weighted sums
/// S1 = sum q^n |w_n|^2 and S2 = sum q^{2n} |w_n|^2 that everything in this
/// module reduces to.
struct DisplacedSums {
    double s1 = 0.0;
    double s2 = 0.0;
};
DisplacedSums displaced_sums(const FockVector& psi, cplx beta, const ChannelParams& params);
}  // namespace detail

}  // namespace cvtele::channel

#endif
