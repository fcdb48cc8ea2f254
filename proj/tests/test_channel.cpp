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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvtele/channel.hpp"
#include "cvtele/kernels.hpp"

#ifdef CVTELE_HAVE_EIGEN
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#endif

using cvtele::cplx;
using cvtele::FockVector;
using cvtele::OperatorMatrix;
namespace channel = cvtele::channel;
namespace fock = cvtele::fock;
namespace quad = cvtele::quad;
using channel::ChannelParams;

namespace {

constexpr double kPi = std::numbers::pi;

#ifdef CVTELE_HAVE_EIGEN
double min_eigenvalue(const OperatorMatrix& m) {
    const int d = static_cast<int>(m.dim());
    Eigen::MatrixXcd e(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e(i, j) = m.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e);
    return es.eigenvalues().minCoeff();
}
#endif

// closed-form check value via brute-force geometric-Poisson summation:
// sum_n q^n e^{-d2} d2^n / n!
double poisson_geometric_sum(double q, double d2, int terms = 400) {
    double sum = 0.0;
    double term = std::exp(-d2);
    for (int n = 0; n < terms; ++n) {
        sum += term;
        term *= q * d2 / (n + 1.0);
    }
    return sum;
}

FockVector coherent_normalized(cplx alpha, int cutoff) {
    return fock::coherent_state(alpha, cutoff).state.normalized();
}

}  // namespace

TEST_CASE("ChannelParams validation") {
    CHECK_NOTHROW(ChannelParams(0.0, 10));
    CHECK_NOTHROW(ChannelParams(0.95, 10));
    CHECK_THROWS_AS(ChannelParams(1.0, 10), std::domain_error);
    CHECK_THROWS_AS(ChannelParams(-0.1, 10), std::domain_error);
    CHECK_THROWS_AS(ChannelParams(0.5, -1), std::domain_error);
    // above 0.95: override plus cutoff adequacy
    CHECK_THROWS_AS(ChannelParams(0.97, 200), std::domain_error);
    CHECK_THROWS_AS(ChannelParams(0.97, 10, true), std::domain_error);  // occupation ~15.9
    CHECK_NOTHROW(ChannelParams(0.97, 200, true));
}

TEST_CASE("epr_schmidt: product state, mean photon number, norm") {
    ChannelParams trivial(0.0, 6);
    auto c0 = channel::epr_schmidt(trivial);
    CHECK(c0[0] == 1.0);
    for (std::size_t n = 1; n < c0.size(); ++n) CHECK(c0[n] == 0.0);

    // mean photon number per mode -> q^2/(1-q^2) = 1/3 at q=0.5
    ChannelParams deep(0.5, 60);
    auto c = channel::epr_schmidt(deep);
    double mean_n = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) mean_n += n * c[n] * c[n];
    CHECK(mean_n == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    ChannelParams p20(0.5, 20);
    auto c20 = channel::epr_schmidt(p20);
    double norm2 = 0.0;
    for (double x : c20) norm2 += x * x;
    CHECK(norm2 == doctest::Approx(1.0 - std::pow(0.5, 42)).epsilon(1e-14));
    // strictly decreasing for q > 0
    for (std::size_t n = 1; n < c20.size(); ++n) CHECK(c20[n] < c20[n - 1]);
}

TEST_CASE("transfer_operator: diagonal at beta=0 and coherent expectation") {
    ChannelParams params(0.5, 30);
    OperatorMatrix t0 = channel::transfer_operator(cplx(0.0), params);
    const double head = std::sqrt(0.75 / kPi);
    for (int n = 0; n <= 30; ++n) {
        for (int m = 0; m <= 30; ++m) {
            cplx want = (m == n) ? cplx(head * std::pow(0.5, n)) : cplx(0.0);
            CHECK(std::abs(t0.at(m, n) - want) < 1e-14);
        }
    }

    // <alpha|T(beta)|alpha> = sqrt((1-q^2)/pi) e^{-(1-q)|alpha-beta|^2}
    const cplx alpha(1.2, -0.4), beta(0.2, -0.4);
    OperatorMatrix t = channel::transfer_operator(beta, params);
    FockVector coh = coherent_normalized(alpha, 30);
    double got = cvtele::expectation(coh, t, coh).real();
    const double d2 = std::norm(alpha - beta);
    CHECK(got == doctest::Approx(head * std::exp(-0.5 * d2)).epsilon(1e-9));
    // brute-force geometric-Poisson oracle for the same number
    CHECK(got == doctest::Approx(head * poisson_geometric_sum(0.5, d2)).epsilon(1e-9));
    // frozen spec point: q=0.5, |alpha-beta|=1 -> 0.29635
    FockVector c1 = coherent_normalized(cplx(1.0), 30);
    OperatorMatrix tz = channel::transfer_operator(cplx(0.0), params);
    CHECK(cvtele::expectation(c1, tz, c1).real() ==
          doctest::Approx(std::sqrt(0.75 / kPi) * std::exp(-0.5)).epsilon(1e-7));
}

TEST_CASE("transfer_operator is Hermitian (exactly) and PSD") {
    ChannelParams params(0.7, 24);
    for (cplx beta : {cplx(0.0), cplx(0.9, -0.3), cplx(0.0, 1.1)}) {
        OperatorMatrix t = channel::transfer_operator(beta, params);
        for (std::size_t m = 0; m < t.dim(); ++m)
            for (std::size_t n = 0; n < t.dim(); ++n)
                CHECK(t.at(m, n) == std::conj(t.at(n, m)));
#ifdef CVTELE_HAVE_EIGEN
        CHECK(min_eigenvalue(t) >= -1e-12);
#endif
    }
}

TEST_CASE("q -> 0 projector limit of the transfer operator") {
    ChannelParams params(1e-6, 30);
    for (cplx beta : {cplx(0.0), cplx(1.0), cplx(0.0, 2.0)}) {
        CAPTURE(beta);
        OperatorMatrix t = channel::transfer_operator(beta, params);
        FockVector coh = fock::coherent_state(beta, 30).state;
        OperatorMatrix proj(30);
        const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
        for (int m = 0; m <= 30; ++m)
            for (int n = 0; n <= 30; ++n)
                proj.at(m, n) = inv_sqrt_pi * coh[m] * std::conj(coh[n]);
        CHECK(cvtele::max_abs_diff(t, proj) < 1e-5);
    }
}

TEST_CASE("displacement covariance of the transfer operator") {
    ChannelParams params(0.6, 40);
    const cplx beta(1.0, 0.5);
    OperatorMatrix direct = channel::transfer_operator(beta, params);
    OperatorMatrix d = fock::displacement_matrix(beta, 40);
    OperatorMatrix conjugated = cvtele::multiply(cvtele::multiply(d, channel::transfer_operator(cplx(0.0), params)), d.adjoint());
    int inner = fock::interior_dim(40, std::abs(beta));
    CHECK(cvtele::max_abs_diff(direct, conjugated, inner) < 1e-10);
}

TEST_CASE("coherent-state representation reproduces the Fock-sum form") {
    ChannelParams params(0.5, 20);
    quad::QuadGrid grid = quad::make_grid(cplx(0.0), 6.0, 161);
    auto rep = channel::transfer_operator_coherent_rep(cplx(0.0), params, grid);
    CHECK(rep.converged);
    OperatorMatrix direct = channel::transfer_operator(cplx(0.0), params);
    CHECK(cvtele::max_abs_diff(rep.value, direct) < 1e-6);

    // Hermitian by symmetric accumulation
    for (std::size_t m = 0; m < rep.value.dim(); ++m)
        for (std::size_t n = 0; n < rep.value.dim(); ++n)
            CHECK(rep.value.at(m, n) == std::conj(rep.value.at(n, m)));

    CHECK_THROWS_AS(
        channel::transfer_operator_coherent_rep(cplx(0.0), ChannelParams(0.0, 20), grid),
        std::domain_error);

    // undersized window is flagged, not silently accepted
    quad::QuadGrid tiny = quad::make_grid(cplx(0.0), 2.0, 41);
    auto bad = channel::transfer_operator_coherent_rep(cplx(0.0), params, tiny);
    CHECK_FALSE(bad.converged);
}

TEST_CASE("coherent representation shifts by displacement conjugation") {
    const cplx beta(1.0, 1.0);
    ChannelParams params(0.5, 30);
    quad::QuadGrid grid = quad::make_grid(beta, 6.5, 121);
    auto rep = channel::transfer_operator_coherent_rep(beta, params, grid);
    CHECK(rep.converged);

    quad::QuadGrid grid0 = quad::make_grid(cplx(0.0), 6.5, 121);
    auto rep0 = channel::transfer_operator_coherent_rep(cplx(0.0), params, grid0);
    OperatorMatrix d = fock::displacement_matrix(beta, 30);
    OperatorMatrix shifted = cvtele::multiply(cvtele::multiply(d, rep0.value), d.adjoint());
    int inner = fock::interior_dim(30, std::abs(beta));
    CHECK(cvtele::max_abs_diff(rep.value, shifted, inner) < 1e-6);
}

TEST_CASE("measurement probability closed forms") {
    // vacuum: P(beta) = ((1-q^2)/pi) e^{-(1-q^2)|beta|^2}
    for (double q : {0.0, 0.5}) {
        CAPTURE(q);
        ChannelParams params(q, 24);
        FockVector vac = fock::number_state(0, 24);
        const double pref = (1.0 - q * q) / kPi;
        for (cplx beta : {cplx(0.0), cplx(0.7, -0.2), cplx(-1.0, 1.0)}) {
            double p = channel::measurement_probability(vac, beta, params);
            CHECK(p == doctest::Approx(pref * std::exp(-(1.0 - q * q) * std::norm(beta)))
                           .epsilon(1e-10));
        }
    }
    ChannelParams p0(0.0, 24);
    CHECK(channel::measurement_probability(fock::number_state(0, 24), cplx(0.0), p0) ==
          doctest::Approx(1.0 / kPi).epsilon(1e-12));

    // coherent input: same Gaussian displaced to alpha
    ChannelParams params(0.5, 40);
    const cplx alpha(0.8, 0.6);
    FockVector coh = coherent_normalized(alpha, 40);
    for (cplx beta : {cplx(0.0), cplx(1.0, 0.5)}) {
        double p = channel::measurement_probability(coh, beta, params);
        CHECK(p == doctest::Approx(0.75 / kPi * std::exp(-0.75 * std::norm(alpha - beta)))
                       .epsilon(1e-9));
    }

    // unnormalized input rejected
    FockVector bad(40);
    bad[0] = 0.5;
    CHECK_THROWS_AS(channel::measurement_probability(bad, cplx(0.0), params),
                    std::invalid_argument);
}

TEST_CASE("P(beta) integrates to one") {
    ChannelParams params(0.5, 24);
    FockVector vac = fock::number_state(0, 24);
    quad::QuadGrid grid =
        quad::make_grid(cplx(0.0), quad::default_extent(0.0, 0.5), 101);
    auto res = quad::integrate(grid, [&](cplx beta) {
        return channel::measurement_probability(vac, beta, params);
    });
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("teleporting a displaced number state is exact") {
    for (double q : {0.3, 0.7}) {
        for (int n : {0, 1, 3}) {
            for (cplx beta : {cplx(0.0), cplx(1.0, 1.0)}) {
                CAPTURE(q);
                CAPTURE(n);
                CAPTURE(beta);
                ChannelParams params(q, 40);
                FockVector in = fock::displaced_number_state(beta, n, 40);
                auto res = channel::teleport_pure(in, beta, params);
                CHECK_FALSE(res.underflow);
                CHECK(res.conditional_fidelity == doctest::Approx(1.0).epsilon(1e-9));
                CHECK(std::norm(fock::overlap(in, res.output)) ==
                      doctest::Approx(1.0).epsilon(1e-9));
                CHECK(channel::conditional_fidelity(in, beta, params) ==
                      doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("teleported coherent state comes out at gamma = beta + q(alpha-beta)") {
    ChannelParams params(0.5, 40);
    const cplx alpha(1.0, 0.0), beta(0.3, 0.2);
    FockVector in = coherent_normalized(alpha, 40);
    auto res = channel::teleport_pure(in, beta, params);
    const cplx gamma = beta + params.q * (alpha - beta);
    FockVector target = coherent_normalized(gamma, 40);
    CHECK(std::norm(fock::overlap(target, res.output)) > 1.0 - 1e-9);

    // q=0: output is |beta> no matter the input
    ChannelParams classical(0.0, 40);
    auto res0 = channel::teleport_pure(in, beta, classical);
    FockVector proj = coherent_normalized(beta, 40);
    CHECK(std::norm(fock::overlap(proj, res0.output)) > 1.0 - 1e-9);

    // weight agrees with measurement_probability
    CHECK(res.weight == doctest::Approx(channel::measurement_probability(in, beta, params))
                            .epsilon(1e-10));
}

TEST_CASE("conditional fidelity of coherent inputs: e^{-(1-q)^2 d^2}") {
    ChannelParams params(0.5, 40);
    const cplx alpha(0.5, 0.5);
    FockVector in = coherent_normalized(alpha, 40);

    CHECK(channel::conditional_fidelity(in, alpha, params) == doctest::Approx(1.0).epsilon(1e-10));

    const cplx beta = alpha + cplx(2.0, 0.0);  // |alpha - beta| = 2
    CHECK(channel::conditional_fidelity(in, beta, params) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-8));

    for (cplx b : {cplx(0.0), cplx(1.5, -0.5)}) {
        double f = channel::conditional_fidelity(in, b, params);
        CHECK(f == doctest::Approx(std::exp(-0.25 * std::norm(alpha - b))).epsilon(1e-8));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("underflow handling far from the support") {
    auto mute = cvtele::fock::set_warning_handler([](const std::string&) {});
    ChannelParams params(0.3, 16);
    FockVector vac = fock::number_state(0, 16);
    auto res = channel::teleport_pure(vac, cplx(30.0, 0.0), params);
    CHECK(res.underflow);
    CHECK(res.output.empty());
    CHECK_THROWS_AS(channel::conditional_fidelity(vac, cplx(30.0, 0.0), params),
                    std::underflow_error);
    cvtele::fock::set_warning_handler(std::move(mute));
}

TEST_CASE("average fidelity of coherent inputs is (1+q)/2") {
    for (double q : {0.0, 0.5}) {
        CAPTURE(q);
        ChannelParams params(q, 40);
        const cplx alpha(1.0, 0.0);
        FockVector in = coherent_normalized(alpha, 40);
        quad::QuadGrid grid =
            quad::make_grid(alpha, quad::default_extent(std::abs(alpha), q), 101);
        auto res = channel::average_fidelity(in, params, grid);
        CHECK(res.converged);
        CHECK(res.value == doctest::Approx((1.0 + q) / 2.0).epsilon(1e-4));
    }
}

TEST_CASE("average fidelity of |1> at q=0 is 1/4") {
    // independent oracle: radial integral 2 int r^5 e^{-2 r^2} dr on a dense
    // 1d grid (Simpson), giving F_av = 1/4
    const int steps = 4000;
    const double rmax = 6.0;
    const double h = rmax / steps;
    double simpson = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double r = i * h;
        const double f = std::pow(r, 5) * std::exp(-2.0 * r * r);
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        simpson += w * f;
    }
    simpson *= 2.0 * h / 3.0;
    CHECK(simpson == doctest::Approx(0.25).epsilon(1e-8));

    ChannelParams params(0.0, 30);
    FockVector one = fock::number_state(1, 30);
    quad::QuadGrid grid = quad::make_grid(cplx(0.0), 6.0, 81);
    auto res = channel::average_fidelity(one, params, grid);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(simpson).epsilon(1e-6));
}

TEST_CASE("average fidelity: alpha independence and growth in q") {
    ChannelParams params(0.5, 40);
    FockVector a1 = coherent_normalized(cplx(0.5, 0.0), 40);
    FockVector a2 = coherent_normalized(cplx(1.0, 0.5), 40);
    auto r1 = channel::average_fidelity(
        a1, params, quad::make_grid(cplx(0.5, 0.0), quad::default_extent(0.5, 0.5), 101));
    auto r2 = channel::average_fidelity(
        a2, params, quad::make_grid(cplx(1.0, 0.5), quad::default_extent(std::hypot(1.0, 0.5), 0.5), 101));
    CHECK(std::abs(r1.value - r2.value) < 1e-8);

    double prev = 0.0;
    for (double q : {0.0, 0.25, 0.5, 0.75}) {
        ChannelParams p(q, 30);
        FockVector in = coherent_normalized(cplx(0.8, 0.0), 30);
        auto r = channel::average_fidelity(
            in, p, quad::make_grid(cplx(0.8, 0.0), quad::default_extent(0.8, q), 101));
        CHECK(r.value > prev);
        prev = r.value;
    }
}

TEST_CASE("average fidelity flags an undersized grid") {
    ChannelParams params(0.5, 24);
    FockVector vac = fock::number_state(0, 24);
    auto bad = channel::average_fidelity(vac, params, quad::make_grid(cplx(0.0), 1.0, 21));
    CHECK_FALSE(bad.converged);
}

TEST_CASE("output density matrix: trace, fidelity consistency, noise law") {
    const double q = 0.5;
    ChannelParams params(q, 30);
    const cplx alpha(0.5, 0.0);
    FockVector in = coherent_normalized(alpha, 30);
    quad::QuadGrid grid = quad::make_grid(alpha, quad::default_extent(0.5, q), 101);

    auto rho = channel::output_density_matrix(in, params, grid);
    CHECK(rho.converged);
    CHECK(rho.value.trace().real() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(rho.value.trace().imag()) < 1e-12);

    auto fav = channel::average_fidelity(in, params, grid);
    double f_from_rho = cvtele::expectation(in, rho.value, in).real();
    CHECK(std::abs(f_from_rho - fav.value) < 1e-8);

#ifdef CVTELE_HAVE_EIGEN
    CHECK(min_eigenvalue(rho.value) >= -1e-12);
#endif

    // quadrature variance 1/4 + (1-q)/(2(1+q)); trace-normalize to remove
    // the quadrature's small trace defect
    auto [x, y] = fock::quadrature_operators(30);
    OperatorMatrix x2 = cvtele::multiply(x, x);
    const double tr = rho.value.trace().real();
    double ex = 0.0, ex2 = 0.0;
    OperatorMatrix rx = cvtele::multiply(rho.value, x);
    OperatorMatrix rx2 = cvtele::multiply(rho.value, x2);
    ex = rx.trace().real() / tr;
    ex2 = rx2.trace().real() / tr;
    const double want = 0.25 + (1.0 - q) / (2.0 * (1.0 + q));
    CHECK(ex2 - ex * ex == doctest::Approx(want).epsilon(1e-6));
    CHECK(ex == doctest::Approx(alpha.real()).epsilon(1e-6));

    // q = 0 classical penalty: variance 3/4
    ChannelParams classical(0.0, 30);
    auto rho0 = channel::output_density_matrix(
        in, classical, quad::make_grid(alpha, quad::default_extent(0.5, 0.0), 101));
    const double tr0 = rho0.value.trace().real();
    double m1 = cvtele::multiply(rho0.value, x).trace().real() / tr0;
    double m2 = cvtele::multiply(rho0.value, x2).trace().real() / tr0;
    CHECK(m2 - m1 * m1 == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("reference POVM completeness for vacuum and |1>") {
    quad::QuadGrid grid = quad::make_grid(cplx(0.0), 7.0, 101);
    for (int n : {0, 1}) {
        CAPTURE(n);
        FockVector ref = fock::number_state(n, 20);
        auto res = channel::reference_povm_completeness(ref, grid, 11);
        CHECK(res.converged);
        OperatorMatrix id = OperatorMatrix::identity(20);
        CHECK(cvtele::max_abs_diff(res.value, id, 11) < 1e-6);
    }

    // conjugation: real amplitudes are fixed points
    FockVector real_state = fock::cat_state(cplx(1.0, 0.0), 1, 24);
    FockVector conj = real_state.conjugated();
    for (std::size_t i = 0; i < conj.size(); ++i) CHECK(conj[i] == real_state[i]);
}

TEST_CASE("trace preservation: integral of T^2 is the interior identity") {
    for (double q : {0.0, 0.5}) {
        CAPTURE(q);
        ChannelParams params(q, 24);
        quad::QuadGrid grid = quad::make_grid(cplx(0.0), quad::default_extent(0.0, q) + 2.0, 101);
        auto res = channel::transfer_squared_integral(params, grid, 11);
        CHECK(res.converged);
        OperatorMatrix id = OperatorMatrix::identity(24);
        CHECK(cvtele::max_abs_diff(res.value, id, 11) < 1e-6);
    }
}

TEST_CASE("statistical reweighting: displaced amplitudes scale with q^n") {
    const double q = 0.6;
    ChannelParams params(q, 40);
    std::vector<cplx> amps(41, cplx(0.0));
    amps[0] = 1.0;
    amps[1] = cplx(0.7, 0.1);
    amps[2] = cplx(0.0, 0.3);
    amps[5] = 0.4;
    FockVector psi = FockVector(amps).normalized();
    const cplx beta(0.4, -0.2);

    OperatorMatrix d = fock::displacement_matrix(beta, 40);
    FockVector w = cvtele::apply(d.adjoint(), psi);

    auto res = channel::teleport_pure(psi, beta, params);
    FockVector u = cvtele::apply(d.adjoint(), res.output);

    // u_n proportional to q^n w_n: ratios of successive nonzero components
    const double head = std::abs(fock::overlap(w, u));  // fixes the overall scale
    REQUIRE(head > 0.0);
    for (int n = 0; n <= 10; ++n) {
        if (std::abs(w[n]) < 1e-6) continue;
        const cplx ratio = u[n] / w[n];
        CHECK(std::abs(ratio) / std::abs(u[0] / w[0]) ==
              doctest::Approx(std::pow(q, n)).epsilon(1e-7));
    }
}

TEST_CASE("coherent centroid") {
    const cplx alpha(0.9, -1.1);
    FockVector coh = coherent_normalized(alpha, 40);
    CHECK(std::abs(channel::coherent_centroid(coh) - alpha) < 1e-10);
    CHECK(std::abs(channel::coherent_centroid(fock::number_state(3, 10))) == 0.0);
}
