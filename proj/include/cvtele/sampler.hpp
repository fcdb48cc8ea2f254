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

#ifndef CVTELE_SAMPLER_HPP
#define CVTELE_SAMPLER_HPP

#include <cstdint>
#include <optional>

#include "cvtele/channel.hpp"
#include "cvtele/rng.hpp"

namespace cvtele::sampler {

struct SamplerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SamplerConfig {
    std::uint64_t seed = 1;
    int max_rejections_per_draw = 1'000'000;
    bool store_amplitudes = false;

    void validate() const {
        if (max_rejections_per_draw < 1) {
            throw std::domain_error("SamplerConfig: rejection bound must be positive");
        }
    }
};

struct ShotRecord {
    std::uint64_t shot_index = 0;
    cplx beta;
    double weight_at_beta = 0.0;       // P(beta)
    double conditional_fidelity = 0.0;
    std::optional<FockVector> output;  // only with store_amplitudes
};

struct ShotSummary {
    std::size_t n_shots = 0;
    double mean_fidelity = 0.0;
    double stderr_fidelity = 0.0;
    double acceptance_rate = 0.0;
    std::uint64_t total_proposals = 0;
};

/// Draws beta from P(beta) by rejection against a Gaussian envelope that
/// provably dominates P:
///   - P is the Q function of psi convolved with a Gaussian of per-
///     quadrature variance q^2/(2(1-q^2));
///   - the Q function, recentered on the coherent centroid c = <a>, is
///     bounded by (C_s/pi) exp(-(1-s)|z-c|^2) with
///     C_s = sum_m |phi_m|^2 s^{-m}, phi = D(-c) psi (Cauchy-Schwarz with
///     geometric weights), s picked to minimize the envelope mass C_s/(1-s);
///   - convolving the bound gives a closed-form Gaussian envelope.
/// The per-draw acceptance ratio P/E is asserted <= 1; a violation means
/// the envelope construction is broken and raises SamplerError.
class BetaSampler {
  public:
    BetaSampler(FockVector psi, channel::ChannelParams params);

    cplx sample(rng::Stream& rng, int max_rejections = 1'000'000,
                std::uint64_t* proposals = nullptr) const;

    double envelope_density(cplx beta) const;
    /// Predicted acceptance rate 1 / envelope mass.
    double expected_acceptance() const { return 1.0 / mass_; }

    cplx centroid() const { return centroid_; }
    double envelope_mass() const { return mass_; }
    double gaussian_weight_s() const { return s_; }

  private:
    FockVector psi_;
    channel::ChannelParams params_;
    cplx centroid_;
    double s_ = 0.0;      // geometric weight of the Q-function bound
    double mu_ = 0.0;     // envelope exponent rate
    double peak_ = 0.0;   // envelope prefactor
    double sigma_ = 0.0;  // per-quadrature std dev of the proposal
    double mass_ = 0.0;   // integral of the envelope
};

struct RunResult {
    std::vector<ShotRecord> records;
    ShotSummary summary;
};

/// n_shots independent teleportation events. Each shot uses its own
/// counter-derived stream (seed, shot_index), so any parallel schedule
/// produces the identical record list.
RunResult run_shots(const FockVector& psi, const channel::ChannelParams& params,
                    std::size_t n_shots, const SamplerConfig& config);

}  // namespace cvtele::sampler

#endif
