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

#ifndef CVTELE_CONFIG_HPP
#define CVTELE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

#include "cvtele/fock.hpp"

namespace cvtele::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitNonConvergence = 3,
    kExitSamplerFailure = 4,
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One flat key-value document; every key is mirrored by a CLI flag and
/// flags override file values. Unknown keys are rejected.
struct RunConfig {
    // input state
    std::string state = "vacuum";  // vacuum|number|coherent|cat|squeezed
    int n = 1;                     // photon number for `number`
    double alpha_re = 1.0;         // coherent / cat amplitude
    double alpha_im = 0.0;
    int cat_sign = 1;
    double squeeze_r = 0.5;

    // channel
    double q = 0.5;
    int cutoff = 40;
    bool allow_high_q = false;

    // quadrature grid (extent 0 = automatic rule)
    double grid_extent = 0.0;
    int grid_points = 101;

    // sampler
    std::uint64_t seed = 1;
    std::uint64_t shots = 10000;

    // verification
    std::string basis = "eight-port";
    int basis_points = 801;

    // fidelity ray sweep (direction, reach, resolution)
    double ray_re = 1.0;
    double ray_im = 0.0;
    double ray_max = 3.0;
    int ray_points = 31;

    // sweep-q
    std::string q_list;   // comma-separated
    bool sampled = false; // sweep rows by Monte Carlo instead of quadrature

    // output
    std::string out;             // empty = stdout
    std::string format = "csv";  // csv|json

    /// Throws std::invalid_argument / std::domain_error on bad values.
    void validate() const;

    std::string to_json_string() const;              // sorted keys, 2-space indent
    static RunConfig from_json_string(const std::string& text);
    static RunConfig from_json_file(const std::string& path);

    /// FNV-1a over the canonical serialized form, excluding the output
    /// path (so reruns into different files share a hash and stay
    /// byte-identical).
    std::uint64_t hash() const;
    std::string hash_hex() const;

    std::vector<double> parsed_q_list() const;
};

/// Builds the configured input state at the configured cutoff, normalized.
/// Truncation leakage above 1e-6 is a validation error.
FockVector build_state(const RunConfig& config);

/// Grid half-width: the explicit value, or the automatic rule from the
/// state's centroid and q.
double resolve_extent(const RunConfig& config, double centroid_mag);

/// Applies the default-output-directory environment variable
/// (CVTELEPORT_OUT_DIR) to relative paths.
std::string resolve_out_path(const std::string& out);

/// 17-significant-digit float formatting shared by all emitters.
std::string format_double(double v);

/// Ordered metadata block embedded in every emitted file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// CSV writer: '#'-prefixed metadata lines, then a header row and data
/// rows, LF endings, UTF-8.
std::string render_csv(const Metadata& meta, const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows);

}  // namespace cvtele::cli

#endif
