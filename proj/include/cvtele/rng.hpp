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

#ifndef CVTELE_RNG_HPP
#define CVTELE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace cvtele::rng {

/// Version tag recorded in every emitted artifact. Bump when the draw
/// sequence contract below changes.
inline constexpr const char* kVersionTag = "splitmix64-bm1";

namespace detail {
// splitmix64 finalizer (Steele, Lea, Flood); integer-only, so the u64
// stream is identical on every platform.
inline std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based generator: state walks the golden-gamma sequence and each
/// output is the splitmix64 mix of the counter. (seed, stream_id) pairs give
/// independent streams, which is how parallel shot batches stay scheduling
/// independent.
class Stream {
  public:
    explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : state_(detail::mix(detail::mix(seed + 0x9E3779B97F4A7C15ULL) + stream_id)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::mix(state_);
    }

    /// uniform in [0, 1), 53 significant bits
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// uniform in (0, 1]
    double next_unit_open() { return 1.0 - next_unit(); }

    /// Box-Muller pair of independent standard normals. Draw order is part
    /// of the contract: radius uniform first, angle uniform second.
    std::pair<double, double> next_gauss_pair() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

  private:
    std::uint64_t state_;
};

}  // namespace cvtele::rng

#endif
