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
#include <complex>

#include "cvtele/fock.hpp"
#include "helpers.hpp"

using cvtele::cplx;
using cvtele::FockVector;
using cvtele::OperatorMatrix;
namespace fock = cvtele::fock;

TEST_CASE("number_state basis definition and range check") {
    FockVector v = fock::number_state(0, 4);
    CHECK(v.size() == 5);
    CHECK(v[0] == cplx(1.0));
    for (int i = 1; i <= 4; ++i) CHECK(v[i] == cplx(0.0));

    FockVector w = fock::number_state(2, 4);
    CHECK(w[2] == cplx(1.0));
    CHECK(std::abs(w.norm2() - 1.0) < 1e-15);

    CHECK_THROWS_AS(fock::number_state(5, 4), std::domain_error);
    CHECK_THROWS_AS(fock::number_state(-1, 4), std::domain_error);
}

TEST_CASE("coherent_state amplitudes, vacuum limit, leakage oracle") {
    auto vac = fock::coherent_state(cplx(0.0), 6);
    CHECK(vac.state[0] == cplx(1.0));
    CHECK(vac.leakage == doctest::Approx(0.0).epsilon(1e-15));

    // amplitude at n for alpha=1: e^{-1/2} / sqrt(n!)
    auto one = fock::coherent_state(cplx(1.0), 40);
    CHECK(std::abs(one.state[0] - std::exp(-0.5)) < 1e-14);
    CHECK(std::abs(one.state[3].real() - std::exp(-0.5) / std::sqrt(6.0)) < 1e-14);

    // leakage for alpha=2 at cutoff 30 against the brute-force Poisson tail
    auto a2 = fock::coherent_state(cplx(2.0), 30);
    double tail = 0.0;
    double term = std::exp(-4.0);  // n = 0
    for (int n = 0; n <= 200; ++n) {
        if (n > 30) tail += term;
        term *= 4.0 / (n + 1.0);
    }
    CHECK(a2.leakage < 1e-9);
    CHECK(a2.leakage == doctest::Approx(tail).epsilon(1e-6));
}

TEST_CASE("coherent_state leakage is monotone decreasing in the cutoff") {
    double prev = 1.0;
    for (int cutoff = 2; cutoff <= 30; cutoff += 4) {
        double leak = fock::coherent_state(cplx(1.5, 0.0), cutoff).leakage;
        CHECK(leak <= prev + 1e-15);
        prev = leak;
    }
    CHECK(prev < 1e-9);
}

TEST_CASE("displacement_matrix identity at beta=0") {
    OperatorMatrix d = fock::displacement_matrix(cplx(0.0), 8);
    OperatorMatrix id = OperatorMatrix::identity(8);
    CHECK(cvtele::max_abs_diff(d, id) == 0.0);
}

TEST_CASE("displacement_matrix against term-by-term exponential series") {
    const int cutoff = 30;
    for (cplx beta : {cplx(1.0, 0.0), cplx(0.3, -0.7), cplx(0.0, 1.2)}) {
        CAPTURE(beta);
        OperatorMatrix d = fock::displacement_matrix(beta, cutoff);
        oracle::Mat ref = oracle::displacement_series(beta, cutoff);
        // interior entries only: the truncated-generator series is itself
        // distorted near the cutoff edge
        for (int m = 0; m <= 16; ++m) {
            for (int n = 0; n <= 16; ++n) {
                CHECK(std::abs(d.at(m, n) - ref[m][n]) < 5e-10);
            }
        }
        CHECK(std::abs(d.at(0, 0) - std::exp(-0.5 * std::norm(beta))) < 1e-13);
    }
}

TEST_CASE("displacement_matrix against the raising-operator recurrence") {
    const int cutoff = 60;
    for (cplx beta : {cplx(2.0, 0.0), cplx(-1.0, 1.5)}) {
        CAPTURE(beta);
        OperatorMatrix d = fock::displacement_matrix(beta, cutoff);
        oracle::Mat ref = oracle::displacement_recurrence(beta, cutoff);
        int inner = fock::interior_dim(cutoff, std::abs(beta));
        REQUIRE(inner > 10);
        for (int m = 0; m < inner; ++m) {
            for (int n = 0; n < inner; ++n) {
                CHECK(std::abs(d.at(m, n) - ref[m][n]) < 1e-9);
            }
        }
    }
}

TEST_CASE("displacement column 0 equals the coherent state") {
    const cplx beta(0.8, -1.1);
    OperatorMatrix d = fock::displacement_matrix(beta, 30);
    auto coh = fock::coherent_state(beta, 30);
    for (int m = 0; m <= 30; ++m) {
        CHECK(std::abs(d.at(m, 0) - coh.state[m]) < 1e-12);
    }
}

TEST_CASE("adjoint consistency: D(-beta) == D(beta)^dagger to the bit") {
    for (cplx beta : {cplx(1.0, 0.0), cplx(0.4, 0.9), cplx(-2.0, 0.3)}) {
        OperatorMatrix d = fock::displacement_matrix(beta, 24);
        OperatorMatrix dm = fock::displacement_matrix(-beta, 24);
        OperatorMatrix dt = d.adjoint();
        CHECK(cvtele::max_abs_diff(dm, dt) <= 1e-15);
    }
}

TEST_CASE("approximate unitarity on the deep interior") {
    // The fixed exclusion margin covers low-lying levels; the highest
    // interior columns still carry real truncation mass (their displaced
    // spread grows like |beta| sqrt(m)), so the 1e-8 claim is checked on
    // the deep half of the interior block.
    struct Case {
        int cutoff;
        cplx beta;
    };
    for (auto [cutoff, beta] : {Case{20, {0.5, 0.0}}, Case{40, {2.0, 0.0}},
                                Case{30, {1.0, 1.0}}, Case{60, {2.0, 0.0}}}) {
        CAPTURE(cutoff);
        CAPTURE(beta);
        OperatorMatrix d = fock::displacement_matrix(beta, cutoff);
        OperatorMatrix gram = cvtele::multiply(d.adjoint(), d);
        int inner = fock::interior_dim(cutoff, std::abs(beta)) / 2;
        REQUIRE(inner > 0);
        OperatorMatrix id = OperatorMatrix::identity(cutoff);
        CHECK(cvtele::max_abs_diff(gram, id, inner) < 1e-8);

        OperatorMatrix comp = cvtele::multiply(d, fock::displacement_matrix(-beta, cutoff));
        CHECK(cvtele::max_abs_diff(comp, id, inner) < 1e-8);
    }

    // at a generous cutoff the bound extends well past the half block
    OperatorMatrix d = fock::displacement_matrix(cplx(2.0, 0.0), 60);
    OperatorMatrix gram = cvtele::multiply(d.adjoint(), d);
    CHECK(cvtele::max_abs_diff(gram, OperatorMatrix::identity(60), 24) < 1e-8);
}

TEST_CASE("displaced_number_state special cases and norm") {
    FockVector e3 = fock::displaced_number_state(cplx(0.0), 3, 10);
    CHECK(e3[3] == cplx(1.0));

    const cplx beta(0.7, 0.4);
    FockVector d0 = fock::displaced_number_state(beta, 0, 30);
    auto coh = fock::coherent_state(beta, 30);
    for (int m = 0; m <= 30; ++m) CHECK(std::abs(d0[m] - coh.state[m]) < 1e-12);

    FockVector d2 = fock::displaced_number_state(cplx(1.0), 2, 40);
    CHECK(std::abs(d2.norm2() - 1.0) < 1e-9);

    CHECK_THROWS_AS(fock::displaced_number_state(cplx(1.0), 11, 10), std::domain_error);
}

TEST_CASE("quadrature operators: moments, hermiticity, commutator") {
    auto [x, y] = fock::quadrature_operators(20);
    FockVector vac = fock::number_state(0, 20);

    CHECK(std::abs(cvtele::expectation(vac, x, vac)) < 1e-15);
    OperatorMatrix x2 = cvtele::multiply(x, x);
    CHECK(cvtele::expectation(vac, x2, vac).real() == doctest::Approx(0.25).epsilon(1e-12));

    OperatorMatrix xt = x.adjoint();
    CHECK(cvtele::max_abs_diff(x, xt) == 0.0);
    OperatorMatrix yt = y.adjoint();
    CHECK(cvtele::max_abs_diff(y, yt) == 0.0);

    // [x, y] = (i/2) I away from the truncation edge
    OperatorMatrix xy = cvtele::multiply(x, y);
    OperatorMatrix yx = cvtele::multiply(y, x);
    for (int m = 0; m < 20; ++m) {
        for (int n = 0; n < 20; ++n) {
            cplx comm = xy.at(m, n) - yx.at(m, n);
            cplx want = (m == n) ? cplx(0.0, 0.5) : cplx(0.0);
            CHECK(std::abs(comm - want) < 1e-14);
        }
    }
}

TEST_CASE("overlap examples") {
    FockVector e0 = fock::number_state(0, 10);
    FockVector e1 = fock::number_state(1, 10);
    CHECK(fock::overlap(e0, e0) == cplx(1.0));
    CHECK(fock::overlap(e0, e1) == cplx(0.0));

    auto p = fock::coherent_state(cplx(1.0), 40).state;
    auto m = fock::coherent_state(cplx(-1.0), 40).state;
    CHECK(std::abs(std::abs(fock::overlap(p, m)) - std::exp(-2.0)) < 1e-9);

    FockVector short_vec = fock::number_state(0, 5);
    CHECK_THROWS_AS(fock::overlap(e0, short_vec), std::invalid_argument);
}

TEST_CASE("mean photon number of a coherent state is |alpha|^2") {
    const cplx alpha(1.2, -0.5);
    auto coh = fock::coherent_state(alpha, 50);
    double n_mean = 0.0;
    for (int n = 0; n <= 50; ++n) n_mean += n * std::norm(coh.state[n]);
    CHECK(n_mean == doctest::Approx(std::norm(alpha)).epsilon(1e-10));
}

TEST_CASE("cat states") {
    FockVector even_trivial = fock::cat_state(cplx(0.0), 1, 10);
    CHECK(std::abs(even_trivial[0] - cplx(1.0)) < 1e-15);

    FockVector cat = fock::cat_state(cplx(1.5, 0.0), -1, 40);
    CHECK(cat.is_normalized(1e-12));
    for (int n = 0; n <= 40; n += 2) CHECK(std::abs(cat[n]) < 1e-15);  // odd cat

    CHECK_THROWS_AS(fock::cat_state(cplx(3.0, 0.0), 1, 6), cvtele::CutoffTooSmallError);
    CHECK_THROWS_AS(fock::cat_state(cplx(0.0), -1, 10), std::domain_error);
    CHECK_THROWS_AS(fock::cat_state(cplx(1.0), 2, 10), std::domain_error);
}

TEST_CASE("squeezed vacuum: vacuum limit and squeezing law") {
    FockVector v0 = fock::squeezed_vacuum(0.0, 10);
    CHECK(std::abs(v0[0] - cplx(1.0)) < 1e-15);

    const double r = 0.5;
    FockVector sq = fock::squeezed_vacuum(r, 60);
    CHECK(sq.is_normalized(1e-12));
    for (int n = 1; n <= 59; n += 2) CHECK(sq[n] == cplx(0.0));

    auto [x, y] = fock::quadrature_operators(60);
    OperatorMatrix x2 = cvtele::multiply(x, x);
    double var = cvtele::expectation(sq, x2, sq).real();
    CHECK(var == doctest::Approx(0.25 * std::exp(-2.0 * r)).epsilon(1e-9));

    // the conjugate quadrature is anti-squeezed
    OperatorMatrix y2 = cvtele::multiply(y, y);
    double var_y = cvtele::expectation(sq, y2, sq).real();
    CHECK(var_y == doctest::Approx(0.25 * std::exp(2.0 * r)).epsilon(1e-9));

    CHECK_THROWS_AS(fock::squeezed_vacuum(2.0, 4), cvtele::CutoffTooSmallError);
}

TEST_CASE("interior subspace bookkeeping") {
    CHECK(fock::interior_dim(40, 2.0) == 41 - 24);
    CHECK(fock::interior_dim(10, 2.0) == 0);
    CHECK(fock::interior_dim(20, 0.0) == 13);
    CHECK(fock::validated_beta_max(8) == 0.0);
    CHECK(fock::validated_beta_max(40) == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("warning channel fires for out-of-extent displacements") {
    int count = 0;
    fock::set_warning_handler([&](const std::string&) { ++count; });
    (void)fock::displacement_matrix(cplx(5.0, 0.0), 20);  // validated max ~ 1.73
    CHECK(count == 1);
    (void)fock::displacement_matrix(cplx(0.5, 0.0), 20);
    CHECK(count == 1);
    fock::set_warning_handler(nullptr);
}

TEST_CASE("zero-norm states are rejected where normalization matters") {
    FockVector z(5);
    CHECK_THROWS_AS(z.normalized(), std::domain_error);
    CHECK_THROWS_AS(fock::require_normalized(z), std::invalid_argument);
    CHECK_THROWS_AS(FockVector(std::vector<cplx>{}), std::invalid_argument);
}
