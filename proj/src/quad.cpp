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

#include "cvtele/quad.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <thread>

#include "cvtele/kernels.hpp"

namespace cvtele::quad {

namespace {

constexpr std::size_t kLeafBlock = 64;

std::atomic<int> g_max_par{0};  // 0 = use hardware default

int effective_parallelism() {
    int p = g_max_par.load(std::memory_order_relaxed);
    if (p < 1) {
        unsigned hc = std::thread::hardware_concurrency();
        p = hc ? static_cast<int>(std::min(hc, 8u)) : 1;
    }
    return p;
}

int parallel_depth() {
    int p = effective_parallelism();
    int d = 0;
    while ((1 << d) < p) ++d;
    return d;
}

template <typename V>
struct Sums {
    V value{};
    double abs_sum = 0.0;
    double bnd_sum = 0.0;
};

// Fixed bisection tree over [lo, hi): the reduction shape depends only on
// the index range, so the result is identical for any thread count.
template <typename V, typename LeafFn, typename CombineFn>
Sums<V> reduce_range(std::size_t lo, std::size_t hi, const LeafFn& leaf,
                     const CombineFn& combine, int depth) {
    if (hi - lo <= kLeafBlock) return leaf(lo, hi);
    const std::size_t mid = lo + (hi - lo) / 2;
    if (depth > 0) {
        auto fut = std::async(std::launch::async, [&] {
            return reduce_range<V>(lo, mid, leaf, combine, depth - 1);
        });
        Sums<V> right = reduce_range<V>(mid, hi, leaf, combine, depth - 1);
        Sums<V> left = fut.get();
        return combine(std::move(left), std::move(right));
    }
    Sums<V> left = reduce_range<V>(lo, mid, leaf, combine, 0);
    Sums<V> right = reduce_range<V>(mid, hi, leaf, combine, 0);
    return combine(std::move(left), std::move(right));
}

template <typename V>
IntegralResult<V> finish(Sums<V>&& s) {
    IntegralResult<V> out;
    out.value = std::move(s.value);
    out.boundary_mass = (s.abs_sum > 0.0) ? s.bnd_sum / s.abs_sum : 0.0;
    out.converged = std::isfinite(out.boundary_mass) &&
                    out.boundary_mass <= kBoundaryMassTolerance;
    return out;
}

}  // namespace

bool QuadGrid::covers(cplx where, double radius) const {
    const double slack = 1e-12 * (1.0 + extent);
    return std::abs(where.real() - center.real()) + radius <= extent + slack &&
           std::abs(where.imag() - center.imag()) + radius <= extent + slack;
}

QuadGrid make_grid(cplx center, double extent, int points_per_axis) {
    if (!(extent > 0.0) || !std::isfinite(extent)) {
        throw std::domain_error("make_grid: extent must be positive and finite");
    }
    if (points_per_axis < 3) throw std::domain_error("make_grid: need at least 3 points per axis");
    if (points_per_axis % 2 == 0) {
        throw std::domain_error("make_grid: points_per_axis must be odd");
    }
    QuadGrid g;
    g.center = center;
    g.extent = extent;
    g.points_per_axis = points_per_axis;
    const int m = points_per_axis;
    const double h = 2.0 * extent / (m - 1);
    g.offsets.resize(m);
    g.axis_weights.resize(m);
    for (int i = 0; i <= m / 2; ++i) {
        const double off = -extent + i * h;
        g.offsets[i] = off;
        g.offsets[m - 1 - i] = -off;  // exact symmetry about the center
    }
    g.offsets[m / 2] = 0.0;
    for (int i = 0; i < m; ++i) {
        g.axis_weights[i] = (i == 0 || i == m - 1) ? 0.5 * h : h;
    }
    return g;
}

double default_extent(double center_mag, double q) {
    if (!(q >= 0.0) || q >= 1.0) throw std::domain_error("default_extent: q must be in [0,1)");
    return std::abs(center_mag) + 4.0 / std::sqrt(1.0 - q * q) + 2.0;
}

void set_max_parallelism(int threads) {
    g_max_par.store(threads < 1 ? 1 : threads, std::memory_order_relaxed);
}

int max_parallelism() { return effective_parallelism(); }

IntegralResult<double> integrate(const QuadGrid& grid, const std::function<double(cplx)>& f) {
    auto leaf = [&](std::size_t lo, std::size_t hi) {
        Sums<double> s;
        for (std::size_t i = lo; i < hi; ++i) {
            const double fi = f(grid.node(i));
            const double a = std::abs(fi);
            s.value += grid.weight(i) * fi;
            s.abs_sum += a;
            if (grid.on_boundary(i)) s.bnd_sum += a;
        }
        return s;
    };
    auto combine = [](Sums<double>&& l, Sums<double>&& r) {
        l.value += r.value;
        l.abs_sum += r.abs_sum;
        l.bnd_sum += r.bnd_sum;
        return std::move(l);
    };
    return finish(reduce_range<double>(0, grid.node_count(), leaf, combine, parallel_depth()));
}

IntegralResult<cplx> integrate_complex(const QuadGrid& grid, const std::function<cplx(cplx)>& f) {
    auto leaf = [&](std::size_t lo, std::size_t hi) {
        Sums<cplx> s;
        for (std::size_t i = lo; i < hi; ++i) {
            const cplx fi = f(grid.node(i));
            const double a = std::abs(fi);
            s.value += grid.weight(i) * fi;
            s.abs_sum += a;
            if (grid.on_boundary(i)) s.bnd_sum += a;
        }
        return s;
    };
    auto combine = [](Sums<cplx>&& l, Sums<cplx>&& r) {
        l.value += r.value;
        l.abs_sum += r.abs_sum;
        l.bnd_sum += r.bnd_sum;
        return std::move(l);
    };
    return finish(reduce_range<cplx>(0, grid.node_count(), leaf, combine, parallel_depth()));
}

namespace {

Sums<OperatorMatrix> combine_matrix(Sums<OperatorMatrix>&& l, Sums<OperatorMatrix>&& r) {
    cplx* a = l.value.data();
    const cplx* b = r.value.data();
    const std::size_t n = l.value.dim() * l.value.dim();
    for (std::size_t i = 0; i < n; ++i) a[i] += b[i];
    l.abs_sum += r.abs_sum;
    l.bnd_sum += r.bnd_sum;
    return std::move(l);
}

}  // namespace

IntegralResult<OperatorMatrix> integrate_rank1(
    const QuadGrid& grid, int cutoff,
    const std::function<double(cplx, FockVector& v)>& f, int metric_dim) {
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    const std::size_t mdim =
        (metric_dim > 0) ? std::min<std::size_t>(dim, static_cast<std::size_t>(metric_dim)) : dim;
    auto leaf = [&](std::size_t lo, std::size_t hi) {
        Sums<OperatorMatrix> s;
        s.value = OperatorMatrix(cutoff);
        FockVector v(cutoff);
        for (std::size_t i = lo; i < hi; ++i) {
            const double scale = f(grid.node(i), v);
            if (scale == 0.0) continue;
            const double ws = grid.weight(i) * scale;
            for (std::size_t m = 0; m < dim; ++m) {
                // diagonal in real arithmetic, then the strict upper triangle:
                // row m gets ws * v[m] * conj(v[n>m])
                s.value.at(m, m) += ws * std::norm(v[m]);
                kernels::axpy_conj(ws * v[m], v.data() + m + 1, s.value.row(m) + m + 1,
                                   dim - m - 1);
            }
            const double metric = std::abs(scale) * kernels::abs2_sum(v.data(), mdim);
            s.abs_sum += metric;
            if (grid.on_boundary(i)) s.bnd_sum += metric;
        }
        return s;
    };
    auto res = finish(reduce_range<OperatorMatrix>(0, grid.node_count(), leaf,
                                                   combine_matrix, parallel_depth()));
    res.value.mirror_upper_to_lower();
    return res;
}

IntegralResult<OperatorMatrix> integrate_matrix(
    const QuadGrid& grid, int cutoff,
    const std::function<void(cplx, OperatorMatrix& out)>& f, int metric_dim) {
    const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
    const std::size_t n2 = dim * dim;
    const std::size_t mdim =
        (metric_dim > 0) ? std::min<std::size_t>(dim, static_cast<std::size_t>(metric_dim)) : dim;
    auto leaf = [&](std::size_t lo, std::size_t hi) {
        Sums<OperatorMatrix> s;
        s.value = OperatorMatrix(cutoff);
        OperatorMatrix node_val(cutoff);
        for (std::size_t i = lo; i < hi; ++i) {
            f(grid.node(i), node_val);
            const double w = grid.weight(i);
            cplx* acc = s.value.data();
            const cplx* src = node_val.data();
            for (std::size_t k = 0; k < n2; ++k) acc[k] += w * src[k];
            double fro2 = 0.0;
            for (std::size_t m = 0; m < mdim; ++m) {
                fro2 += kernels::abs2_sum(node_val.row(m), mdim);
            }
            const double metric = std::sqrt(fro2);
            s.abs_sum += metric;
            if (grid.on_boundary(i)) s.bnd_sum += metric;
        }
        return s;
    };
    return finish(reduce_range<OperatorMatrix>(0, grid.node_count(), leaf,
                                               combine_matrix, parallel_depth()));
}

}  // namespace cvtele::quad
