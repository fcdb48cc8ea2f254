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

#include "cvtele/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cvtele/channel.hpp"
#include "cvtele/quad.hpp"
#include "cvtele/verify.hpp"

namespace cvtele::cli {

namespace {

using nlohmann::json;

json to_json(const RunConfig& c) {
    json j;
    j["state"] = c.state;
    j["n"] = c.n;
    j["alpha_re"] = c.alpha_re;
    j["alpha_im"] = c.alpha_im;
    j["cat_sign"] = c.cat_sign;
    j["squeeze_r"] = c.squeeze_r;
    j["q"] = c.q;
    j["cutoff"] = c.cutoff;
    j["allow_high_q"] = c.allow_high_q;
    j["grid_extent"] = c.grid_extent;
    j["grid_points"] = c.grid_points;
    j["seed"] = c.seed;
    j["shots"] = c.shots;
    j["basis"] = c.basis;
    j["basis_points"] = c.basis_points;
    j["ray_re"] = c.ray_re;
    j["ray_im"] = c.ray_im;
    j["ray_max"] = c.ray_max;
    j["ray_points"] = c.ray_points;
    j["q_list"] = c.q_list;
    j["sampled"] = c.sampled;
    j["out"] = c.out;
    j["format"] = c.format;
    return j;
}

RunConfig from_json(const json& j) {
    RunConfig c;
    const json defaults = to_json(c);
    for (const auto& [key, value] : j.items()) {
        if (!defaults.contains(key)) {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("state", c.state);
    get("n", c.n);
    get("alpha_re", c.alpha_re);
    get("alpha_im", c.alpha_im);
    get("cat_sign", c.cat_sign);
    get("squeeze_r", c.squeeze_r);
    get("q", c.q);
    get("cutoff", c.cutoff);
    get("allow_high_q", c.allow_high_q);
    get("grid_extent", c.grid_extent);
    get("grid_points", c.grid_points);
    get("seed", c.seed);
    get("shots", c.shots);
    get("basis", c.basis);
    get("basis_points", c.basis_points);
    get("ray_re", c.ray_re);
    get("ray_im", c.ray_im);
    get("ray_max", c.ray_max);
    get("ray_points", c.ray_points);
    get("q_list", c.q_list);
    get("sampled", c.sampled);
    get("out", c.out);
    get("format", c.format);
    return c;
}

}  // namespace

void RunConfig::validate() const {
    static const std::vector<std::string> kinds = {"vacuum", "number", "coherent", "cat",
                                                   "squeezed"};
    if (std::find(kinds.begin(), kinds.end(), state) == kinds.end()) {
        throw std::invalid_argument("state must be one of vacuum|number|coherent|cat|squeezed");
    }
    // channel validation (q range, cutoff, high-q override rule)
    channel::ChannelParams params(q, cutoff, allow_high_q);
    if (cutoff < 1) throw std::domain_error("cutoff must be >= 1");
    if (state == "number" && (n < 0 || n > cutoff)) {
        throw std::domain_error("number state requires 0 <= n <= cutoff");
    }
    if (state == "cat" && cat_sign != 1 && cat_sign != -1) {
        throw std::domain_error("cat_sign must be +1 or -1");
    }
    if (grid_extent < 0.0 || !std::isfinite(grid_extent)) {
        throw std::domain_error("grid_extent must be >= 0 (0 selects the automatic rule)");
    }
    if (grid_points < 3 || grid_points % 2 == 0) {
        throw std::domain_error("grid_points must be an odd integer >= 3");
    }
    if (basis_points < 3) throw std::domain_error("basis_points must be >= 3");
    verify::parse_basis_kind(basis);
    if (!(ray_max > 0.0)) throw std::domain_error("ray_max must be positive");
    if (ray_points < 2) throw std::domain_error("ray_points must be >= 2");
    if (ray_re == 0.0 && ray_im == 0.0) {
        throw std::domain_error("ray direction must be nonzero");
    }
    if (format != "csv" && format != "json") {
        throw std::invalid_argument("format must be csv or json");
    }
    for (double qi : parsed_q_list()) {
        channel::ChannelParams check(qi, cutoff, allow_high_q);
        (void)check;
    }
    (void)params;
}

std::string RunConfig::to_json_string() const { return to_json(*this).dump(2) + "\n"; }

RunConfig RunConfig::from_json_string(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return from_json(j);
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

std::uint64_t RunConfig::hash() const {
    // the output path is where results land, not what they are; identical
    // experiments hash identically wherever they are written
    json j = to_json(*this);
    j.erase("out");
    const std::string canon = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string RunConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

std::vector<double> RunConfig::parsed_q_list() const {
    std::vector<double> out;
    std::stringstream ss(q_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw std::invalid_argument("bad q_list entry: " + tok);
        out.push_back(v);
    }
    return out;
}

FockVector build_state(const RunConfig& config) {
    const int cutoff = config.cutoff;
    const cplx alpha(config.alpha_re, config.alpha_im);
    if (config.state == "vacuum") return fock::number_state(0, cutoff);
    if (config.state == "number") return fock::number_state(config.n, cutoff);
    if (config.state == "coherent") {
        auto coh = fock::coherent_state(alpha, cutoff);
        if (coh.leakage > 1e-6) {
            throw CutoffTooSmallError("coherent state leakage " +
                                      std::to_string(coh.leakage) + " exceeds 1e-6");
        }
        return coh.state.normalized();
    }
    if (config.state == "cat") return fock::cat_state(alpha, config.cat_sign, cutoff);
    if (config.state == "squeezed") return fock::squeezed_vacuum(config.squeeze_r, cutoff);
    throw std::invalid_argument("unknown state kind: " + config.state);
}

double resolve_extent(const RunConfig& config, double centroid_mag) {
    if (config.grid_extent > 0.0) return config.grid_extent;
    return quad::default_extent(centroid_mag, config.q);
}

std::string resolve_out_path(const std::string& out) {
    if (out.empty() || out.front() == '/') return out;
    const char* dir = std::getenv("CVTELEPORT_OUT_DIR");
    if (!dir || !*dir) return out;
    std::string d(dir);
    if (d.back() != '/') d += '/';
    return d + out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string render_csv(const Metadata& meta, const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& [key, value] : meta) {
        out += "# ";
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

}  // namespace cvtele::cli
