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

#ifndef CVTELE_QUAD_HPP
#define CVTELE_QUAD_HPP

#include <functional>

#include "cvtele/fock.hpp"

namespace cvtele::quad {

/// Composite-trapezoid tensor grid on a square of half-width `extent`
/// centered at `center`. points_per_axis is odd so the center is a node.
/// Node index i runs x-fastest: ix = i % M, iy = i / M.
struct QuadGrid {
    cplx center;
    double extent = 0.0;
    int points_per_axis = 0;
    std::vector<double> offsets;       // per-axis offsets from the center
    std::vector<double> axis_weights;  // per-axis trapezoid weights, sum 2*extent

    std::size_t node_count() const {
        return offsets.size() * offsets.size();
    }
    cplx node(std::size_t i) const {
        const std::size_t m = offsets.size();
        return center + cplx(offsets[i % m], offsets[i / m]);
    }
    double weight(std::size_t i) const {
        const std::size_t m = offsets.size();
        return axis_weights[i % m] * axis_weights[i / m];
    }
    bool on_boundary(std::size_t i) const {
        const std::size_t m = offsets.size();
        const std::size_t ix = i % m, iy = i / m;
        return ix == 0 || iy == 0 || ix + 1 == m || iy + 1 == m;
    }
    double spacing() const { return 2.0 * extent / (points_per_axis - 1); }
    /// True when the grid square covers the disk |z - where| <= radius.
    bool covers(cplx where, double radius) const;
};

QuadGrid make_grid(cplx center, double extent, int points_per_axis);

/// Default half-width rule: covers at least six sigma of every Gaussian
/// factor produced by entanglement parameter q around a state centered at
/// |center| from the origin.
double default_extent(double center_mag, double q);

inline constexpr int kDefaultPointsPerAxis = 101;
inline constexpr double kBoundaryMassTolerance = 1e-8;

template <typename T>
struct IntegralResult {
    T value{};
    double boundary_mass = 0.0;  // sum of |f| over the edge ring / sum of |f|
    bool converged = false;      // boundary_mass <= kBoundaryMassTolerance
};

/// Sum_i w_i f(beta_i) with a fixed pairwise reduction tree over the
/// canonical node order; bit-stable for any parallelism level.
IntegralResult<double> integrate(const QuadGrid& grid, const std::function<double(cplx)>& f);
IntegralResult<cplx> integrate_complex(const QuadGrid& grid, const std::function<cplx(cplx)>& f);

/// Integral of rank-1 matrix-valued integrands: sum_i w_i s_i v_i v_i^dag
/// where f fills `v` and returns the non-negative scale s_i. The result is
/// Hermitian by construction (upper triangle accumulated, then mirrored).
/// metric_dim scopes the boundary-mass metric to the leading block of the
/// vector, as in integrate_matrix.
IntegralResult<OperatorMatrix> integrate_rank1(
    const QuadGrid& grid, int cutoff,
    const std::function<double(cplx, FockVector& v)>& f, int metric_dim = 0);

/// General matrix-valued integral; f fills the provided matrix for a node.
/// The boundary-mass metric uses the Frobenius norm of the leading
/// metric_dim x metric_dim block (whole matrix when metric_dim <= 0) so
/// integrals that converge only on an interior block can be diagnosed there.
IntegralResult<OperatorMatrix> integrate_matrix(
    const QuadGrid& grid, int cutoff,
    const std::function<void(cplx, OperatorMatrix& out)>& f, int metric_dim = 0);

/// Cap on worker threads used by the integrators (defaults to the hardware
/// concurrency). Values < 1 are clamped to 1. Results do not depend on it.
void set_max_parallelism(int threads);
int max_parallelism();

}  // namespace cvtele::quad

#endif
