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

#include "cvtele/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvtele::stats {

namespace {

// series expansion of P(s,x), good for x < s + 1
double gamma_p_series(double s, double x) {
    double ap = s;
    double sum = 1.0 / s;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// modified Lentz continued fraction for Q(s,x), good for x >= s + 1
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double regularized_gamma_p(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("regularized_gamma_p: s must be positive");
    if (x < 0.0) throw std::domain_error("regularized_gamma_p: x must be non-negative");
    if (x == 0.0) return 0.0;
    return (x < s + 1.0) ? gamma_p_series(s, x) : 1.0 - gamma_q_cf(s, x);
}

double regularized_gamma_q(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("regularized_gamma_q: s must be positive");
    if (x < 0.0) throw std::domain_error("regularized_gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    return (x < s + 1.0) ? 1.0 - gamma_p_series(s, x) : gamma_q_cf(s, x);
}

double chi_square_sf(double statistic, int dof) {
    if (dof < 1) throw std::domain_error("chi_square_sf: dof must be >= 1");
    if (statistic <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

GofResult radial_gaussian_gof(const std::vector<std::complex<double>>& samples,
                              std::complex<double> center, double rate, int bins) {
    if (bins < 2) throw std::domain_error("radial_gaussian_gof: need at least 2 bins");
    if (!(rate > 0.0)) throw std::domain_error("radial_gaussian_gof: rate must be positive");
    if (samples.empty()) throw std::invalid_argument("radial_gaussian_gof: no samples");

    // equiprobable radial shells: CDF(r) = 1 - exp(-rate r^2)
    std::vector<double> edges2(bins - 1);  // squared radii
    for (int k = 1; k < bins; ++k) {
        edges2[k - 1] = -std::log(1.0 - static_cast<double>(k) / bins) / rate;
    }

    std::vector<double> observed(bins, 0.0);
    for (const auto& z : samples) {
        const double r2 = std::norm(z - center);
        int lo = 0, hi = bins - 1;
        while (lo < hi) {  // first bin whose upper edge exceeds r2
            const int mid = (lo + hi) / 2;
            if (r2 < edges2[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        observed[lo] += 1.0;
    }

    const double expected = static_cast<double>(samples.size()) / bins;
    GofResult res;
    res.dof = bins - 1;
    for (int k = 0; k < bins; ++k) {
        const double d = observed[k] - expected;
        res.statistic += d * d / expected;
    }
    res.p_value = chi_square_sf(res.statistic, res.dof);
    return res;
}

}  // namespace cvtele::stats
