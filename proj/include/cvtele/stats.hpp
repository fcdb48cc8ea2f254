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

#ifndef CVTELE_STATS_HPP
#define CVTELE_STATS_HPP

#include <complex>
#include <vector>

namespace cvtele::stats {

/// Regularized lower incomplete gamma P(s, x); Q = 1 - P.
double regularized_gamma_p(double s, double x);
double regularized_gamma_q(double s, double x);

/// Survival function of the chi-square distribution.
double chi_square_sf(double statistic, int dof);

struct GofResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Chi-square goodness of fit of samples against the isotropic Gaussian
/// density ~ exp(-rate |z - center|^2), using `bins` equiprobable radial
/// bins.
GofResult radial_gaussian_gof(const std::vector<std::complex<double>>& samples,
                              std::complex<double> center, double rate, int bins = 20);

}  // namespace cvtele::stats

#endif
