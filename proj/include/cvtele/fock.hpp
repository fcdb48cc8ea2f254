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

#ifndef CVTELE_FOCK_HPP
#define CVTELE_FOCK_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvtele {

using cplx = std::complex<double>;

/// Thrown when a state constructor cannot fit its target state into the
/// requested truncation (leakage above the documented bound).
struct CutoffTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pure state on the truncated Fock space, amplitudes indexed by photon
/// number n = 0..cutoff. Values are immutable by convention once built;
/// mutating access exists for constructors and accumulation loops.
class FockVector {
  public:
    FockVector() = default;
    explicit FockVector(int cutoff) : amps_(static_cast<std::size_t>(check_cutoff(cutoff)) + 1) {}
    explicit FockVector(std::vector<cplx> amps) : amps_(std::move(amps)) {
        if (amps_.empty()) throw std::invalid_argument("FockVector: empty amplitude list");
    }

    bool empty() const { return amps_.empty(); }
    int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
    std::size_t size() const { return amps_.size(); }

    cplx& operator[](std::size_t n) { return amps_[n]; }
    const cplx& operator[](std::size_t n) const { return amps_[n]; }
    cplx* data() { return amps_.data(); }
    const cplx* data() const { return amps_.data(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }

    /// Squared 2-norm.
    double norm2() const;
    bool is_normalized(double tol = 1e-8) const;
    /// Unit-norm copy; throws std::domain_error on (near-)zero norm.
    FockVector normalized() const;
    /// Entrywise complex conjugate (the |psi*> of reference-state POVMs).
    FockVector conjugated() const;

    static int check_cutoff(int cutoff) {
        if (cutoff < 0) throw std::domain_error("cutoff must be >= 0");
        return cutoff;
    }

  private:
    std::vector<cplx> amps_;
};

/// Dense square operator on the truncated space, row-major.
class OperatorMatrix {
  public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(int cutoff)
        : dim_(static_cast<std::size_t>(FockVector::check_cutoff(cutoff)) + 1),
          data_(dim_ * dim_) {}

    static OperatorMatrix identity(int cutoff);

    bool empty() const { return data_.empty(); }
    int cutoff() const { return static_cast<int>(dim_) - 1; }
    std::size_t dim() const { return dim_; }

    cplx& at(std::size_t m, std::size_t n) { return data_[m * dim_ + n]; }
    const cplx& at(std::size_t m, std::size_t n) const { return data_[m * dim_ + n]; }
    cplx* row(std::size_t m) { return data_.data() + m * dim_; }
    const cplx* row(std::size_t m) const { return data_.data() + m * dim_; }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    OperatorMatrix adjoint() const;
    /// Copy the (strict) upper triangle into the lower one as conjugates.
    /// Used by Hermitian builders that fill m <= n only.
    void mirror_upper_to_lower();

    cplx trace() const;
    double max_abs() const;

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

// -------------------------------------------------------- linear algebra
FockVector apply(const OperatorMatrix& a, const FockVector& v);
OperatorMatrix multiply(const OperatorMatrix& a, const OperatorMatrix& b);
/// <u|A|v>
cplx expectation(const FockVector& u, const OperatorMatrix& a, const FockVector& v);
/// max |a - b| over the leading `interior` x `interior` block (whole matrix
/// if interior < 0).
double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b, int interior = -1);

namespace fock {

/// |n> on the truncated space.
FockVector number_state(int n, int cutoff);

struct CoherentState {
    FockVector state;  // exact amplitudes e^{-|a|^2/2} a^n / sqrt(n!), unrenormalized
    double leakage;    // 1 - squared norm: probability mass above the cutoff
};
CoherentState coherent_state(cplx alpha, int cutoff);

/// Exact infinite-dimensional matrix elements <m|D(beta)|n> of the
/// displacement operator D(beta) = exp(beta a^dag - conj(beta) a).
OperatorMatrix displacement_matrix(cplx beta, int cutoff);

/// Column n of the displacement matrix: D(beta)|n>.
FockVector displaced_number_state(cplx beta, int n, int cutoff);

struct QuadraturePair {
    OperatorMatrix x;  // (a + a^dag)/2, vacuum variance 1/4
    OperatorMatrix y;  // (a - a^dag)/(2i)
};
QuadraturePair quadrature_operators(int cutoff);

cplx overlap(const FockVector& u, const FockVector& v);

/// Normalized (|alpha> + sign |-alpha>)/norm; sign is +1 or -1.
FockVector cat_state(cplx alpha, int sign, int cutoff);

/// Squeezed vacuum with x-quadrature variance e^{-2r}/4.
FockVector squeezed_vacuum(double r, int cutoff);

/// Dimension of the truncation-safe subspace when displacements of
/// magnitude up to `displacement` are involved: the top ceil(4 b^2 + 8)
/// levels are excluded from accuracy claims.
int interior_dim(int cutoff, double displacement);

/// Largest |beta| for which the full truncated space keeps a nonempty
/// interior at this cutoff.
double validated_beta_max(int cutoff);

/// Warning channel for soft accuracy notices (e.g. displacements past the
/// validated extent). Pass nullptr to restore the default stderr handler.
/// Returns the previously installed handler.
using WarningHandler = std::function<void(const std::string&)>;
WarningHandler set_warning_handler(WarningHandler handler);
void emit_warning(const std::string& message);

/// Throws std::invalid_argument unless |psi| has unit norm within tol.
void require_normalized(const FockVector& psi, double tol = 1e-8);

}  // namespace fock
}  // namespace cvtele

#endif
