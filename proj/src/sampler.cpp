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

#include "cvtele/sampler.hpp"

#include <cmath>
#include <future>
#include <numbers>

#include "cvtele/kernels.hpp"
#include "cvtele/quad.hpp"

namespace cvtele::sampler {

namespace {

constexpr double kPi = std::numbers::pi;

// |phi_m|^2 of phi = D(-c) psi, evaluated with enough headroom above the
// state's own cutoff that the displaced tail is negligible.
std::vector<double> centered_weights(const FockVector& psi, cplx c, double* tail_defect) {
    if (std::abs(c) < 1e-12) {
        std::vector<double> w(psi.size());
        for (std::size_t m = 0; m < psi.size(); ++m) w[m] = std::norm(psi[m]);
        *tail_defect = 0.0;
        return w;
    }
    const int pad = static_cast<int>(std::ceil(4.0 * std::norm(c) + 8.0)) + 8;
    const int big = psi.cutoff() + pad;
    FockVector padded(big);
    for (std::size_t m = 0; m < psi.size(); ++m) padded[m] = psi[m];
    auto mute = fock::set_warning_handler([](const std::string&) {});
    OperatorMatrix d = fock::displacement_matrix(-c, big);
    fock::set_warning_handler(std::move(mute));
    FockVector phi = apply(d, padded);
    std::vector<double> w(phi.size());
    double norm2 = 0.0;
    for (std::size_t m = 0; m < phi.size(); ++m) {
        w[m] = std::norm(phi[m]);
        norm2 += w[m];
    }
    *tail_defect = std::max(0.0, 1.0 - norm2);
    return w;
}

}  // namespace

BetaSampler::BetaSampler(FockVector psi, channel::ChannelParams params)
    : psi_(std::move(psi)), params_(params) {
    fock::require_normalized(psi_);
    if (static_cast<int>(psi_.size()) != params_.cutoff + 1) {
        throw std::invalid_argument("BetaSampler: state cutoff does not match channel cutoff");
    }
    centroid_ = channel::coherent_centroid(psi_);

    double defect = 0.0;
    const std::vector<double> w = centered_weights(psi_, centroid_, &defect);

    // minimize envelope mass C_s/(1-s) over a fixed s grid
    double best_cost = std::numeric_limits<double>::infinity();
    double best_c = 0.0;
    for (double s = 0.02; s < 0.95; s += 0.02) {
        double c = 0.0;
        double pw = 1.0;  // s^{-m}
        for (std::size_t m = 0; m < w.size(); ++m) {
            if (w[m] != 0.0) c += w[m] * pw;
            pw /= s;
            if (!std::isfinite(pw)) {
                // s^{-m} left double range: only harmless if every
                // remaining weight is exactly zero
                for (std::size_t k = m + 1; k < w.size(); ++k) {
                    if (w[k] != 0.0) c = std::numeric_limits<double>::infinity();
                }
                break;
            }
        }
        const double cost = c / (1.0 - s);
        if (cost < best_cost) {
            best_cost = cost;
            best_c = c;
            s_ = s;
        }
    }
    if (!std::isfinite(best_cost)) {
        throw SamplerError("BetaSampler: envelope construction failed");
    }

    // safety margin over the Cauchy-Schwarz bound: covers the displaced-tail
    // defect and rounding; the per-draw ratio assert is the hard guard
    const double bound_c = best_c * 1.02 + 10.0 * defect + 1e-12;

    const double a = 1.0 - s_;
    const double q = params_.q;
    if (q > 0.0) {
        const double lambda = (1.0 - q * q) / (q * q);
        mu_ = a * lambda / (a + lambda);
        peak_ = bound_c / kPi * (lambda / (a + lambda));
    } else {
        mu_ = a;
        peak_ = bound_c / kPi;
    }
    sigma_ = std::sqrt(0.5 / mu_);
    mass_ = bound_c / a;
}

double BetaSampler::envelope_density(cplx beta) const {
    return peak_ * std::exp(-mu_ * std::norm(beta - centroid_));
}

cplx BetaSampler::sample(rng::Stream& rng, int max_rejections,
                         std::uint64_t* proposals) const {
    for (int attempt = 0; attempt < max_rejections; ++attempt) {
        const auto [g1, g2] = rng.next_gauss_pair();
        const cplx beta = centroid_ + sigma_ * cplx(g1, g2);
        const double u = rng.next_unit();
        if (proposals) ++*proposals;

        const double p = channel::measurement_probability(psi_, beta, params_);
        const double e = envelope_density(beta);
        const double ratio = p / e;
        if (ratio > 1.0 + 1e-9) {
            throw SamplerError("BetaSampler: envelope violated (P > E), ratio " +
                               std::to_string(ratio));
        }
        if (u < ratio) return beta;
    }
    throw SamplerError("BetaSampler: rejection bound exceeded");
}

RunResult run_shots(const FockVector& psi, const channel::ChannelParams& params,
                    std::size_t n_shots, const SamplerConfig& config) {
    config.validate();
    if (n_shots < 1) throw std::invalid_argument("run_shots: n_shots must be >= 1");

    auto mute = fock::set_warning_handler([](const std::string&) {});
    BetaSampler sampler(psi, params);

    RunResult out;
    out.records.resize(n_shots);

    const std::vector<double> q1 = [&] {
        std::vector<double> v(params.dim());
        double p = 1.0;
        for (auto& x : v) {
            x = p;
            p *= params.q;
        }
        return v;
    }();

    auto run_one = [&](std::size_t i) {
        rng::Stream stream(config.seed, i);
        ShotRecord rec;
        rec.shot_index = i;
        std::uint64_t proposals = 0;
        rec.beta = sampler.sample(stream, config.max_rejections_per_draw, &proposals);

        if (config.store_amplitudes) {
            auto tp = channel::teleport_pure(psi, rec.beta, params);
            rec.weight_at_beta = tp.weight;
            rec.conditional_fidelity = tp.conditional_fidelity;
            rec.output = std::move(tp.output);
        } else {
            const auto sums = channel::detail::displaced_sums(psi, rec.beta, params);
            rec.weight_at_beta = (1.0 - params.q * params.q) / kPi * sums.s2;
            rec.conditional_fidelity = std::min(1.0, sums.s1 * sums.s1 / sums.s2);
        }
        out.records[i] = std::move(rec);
        return proposals;
    };

    const int workers = std::min<int>(quad::max_parallelism(),
                                      static_cast<int>(std::max<std::size_t>(1, n_shots / 64)));
    std::uint64_t total_proposals = 0;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_shots; ++i) total_proposals += run_one(i);
    } else {
        std::vector<std::future<std::uint64_t>> futs;
        futs.reserve(workers);
        for (int t = 0; t < workers; ++t) {
            futs.push_back(std::async(std::launch::async, [&, t] {
                std::uint64_t local = 0;
                for (std::size_t i = t; i < n_shots; i += workers) local += run_one(i);
                return local;
            }));
        }
        for (auto& f : futs) total_proposals += f.get();
    }
    fock::set_warning_handler(std::move(mute));

    ShotSummary& s = out.summary;
    s.n_shots = n_shots;
    s.total_proposals = total_proposals;
    s.acceptance_rate = static_cast<double>(n_shots) / static_cast<double>(total_proposals);
    double mean = 0.0;
    for (const auto& r : out.records) mean += r.conditional_fidelity;
    mean /= static_cast<double>(n_shots);
    double var = 0.0;
    for (const auto& r : out.records) {
        const double d = r.conditional_fidelity - mean;
        var += d * d;
    }
    s.mean_fidelity = mean;
    s.stderr_fidelity =
        (n_shots > 1) ? std::sqrt(var / (static_cast<double>(n_shots) - 1.0) /
                                  static_cast<double>(n_shots))
                      : 0.0;
    return out;
}

}  // namespace cvtele::sampler
