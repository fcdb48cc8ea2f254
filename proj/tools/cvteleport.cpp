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

#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvtele/channel.hpp"
#include "cvtele/config.hpp"
#include "cvtele/kernels.hpp"
#include "cvtele/sampler.hpp"
#include "cvtele/stats.hpp"
#include "cvtele/verify.hpp"

namespace cli = cvtele::cli;
namespace channel = cvtele::channel;
namespace fock = cvtele::fock;
namespace quad = cvtele::quad;
namespace sampler = cvtele::sampler;
namespace verify = cvtele::verify;
using cli::Metadata;
using cli::RunConfig;
using cvtele::cplx;
using cvtele::FockVector;
using cvtele::OperatorMatrix;
using json = nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) { return cli::format_double(v); }

void write_output(const std::string& out, const std::string& content) {
    const std::string path = cli::resolve_out_path(out);
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << content;
}

Metadata base_metadata(const RunConfig& cfg, const std::string& command) {
    Metadata m;
    m.emplace_back("tool", std::string("cvteleport ") + cli::kVersion);
    m.emplace_back("command", command);
    m.emplace_back("config_hash", cfg.hash_hex());
    m.emplace_back("rng_version", cvtele::rng::kVersionTag);
    m.emplace_back("kernel_backend",
                   cvtele::kernels::backend_name(cvtele::kernels::active_backend()));
    m.emplace_back("state", cfg.state);
    m.emplace_back("q", fmt(cfg.q));
    m.emplace_back("cutoff", std::to_string(cfg.cutoff));
    m.emplace_back("seed", std::to_string(cfg.seed));
    return m;
}

json meta_to_json(const Metadata& m) {
    json j;
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

bool has_coherent_closed_form(const RunConfig& cfg) {
    return cfg.state == "vacuum" || cfg.state == "coherent";
}

// ---------------------------------------------------------------- fidelity
int cmd_fidelity(const RunConfig& cfg) {
    FockVector psi = cli::build_state(cfg);
    channel::ChannelParams params(cfg.q, cfg.cutoff, cfg.allow_high_q);
    const cplx centroid = channel::coherent_centroid(psi);
    const double extent = cli::resolve_extent(cfg, std::abs(centroid));
    quad::QuadGrid grid = quad::make_grid(centroid, extent, cfg.grid_points);

    auto fav = channel::average_fidelity(psi, params, grid);

    Metadata meta = base_metadata(cfg, "fidelity");
    meta.emplace_back("grid_extent", fmt(extent));
    meta.emplace_back("grid_points", std::to_string(cfg.grid_points));
    meta.emplace_back("boundary_mass", fmt(fav.boundary_mass));
    meta.emplace_back("converged", fav.converged ? "1" : "0");
    meta.emplace_back("f_av", fmt(fav.value));
    if (has_coherent_closed_form(cfg)) {
        meta.emplace_back("f_av_closed_form", fmt((1.0 + cfg.q) / 2.0));
    }

    // P(beta), F(beta) along the configured ray from the centroid
    const cplx dir = cplx(cfg.ray_re, cfg.ray_im) / std::abs(cplx(cfg.ray_re, cfg.ray_im));
    std::vector<std::vector<std::string>> rows;
    rows.reserve(cfg.ray_points);
    for (int k = 0; k < cfg.ray_points; ++k) {
        const double t = cfg.ray_max * k / (cfg.ray_points - 1.0);
        const cplx beta = centroid + t * dir;
        const double p = channel::measurement_probability(psi, beta, params);
        std::string f_str = "nan";
        if (p >= channel::kUnderflowThreshold) {
            f_str = fmt(channel::conditional_fidelity(psi, beta, params));
        }
        rows.push_back({fmt(t), fmt(beta.real()), fmt(beta.imag()), fmt(p), f_str});
    }

    if (cfg.format == "csv") {
        write_output(cfg.out, cli::render_csv(meta, {"t", "beta_re", "beta_im", "p_beta", "f_beta"},
                                              rows));
    } else {
        json j;
        j["meta"] = meta_to_json(meta);
        j["ray"] = json::array();
        for (const auto& r : rows) {
            j["ray"].push_back({{"t", r[0]},
                                {"beta_re", r[1]},
                                {"beta_im", r[2]},
                                {"p_beta", r[3]},
                                {"f_beta", r[4]}});
        }
        write_output(cfg.out, j.dump(2) + "\n");
    }
    if (!fav.converged) throw cli::ConvergenceError("average fidelity quadrature not converged");
    return cli::kExitOk;
}

// ----------------------------------------------------------------- sweep-q
int cmd_sweep_q(const RunConfig& cfg) {
    const std::vector<double> qs = cfg.parsed_q_list();
    if (qs.empty()) throw std::invalid_argument("sweep-q requires a non-empty q_list");

    Metadata meta = base_metadata(cfg, "sweep-q");
    meta.emplace_back("grid_points", std::to_string(cfg.grid_points));
    meta.emplace_back("grid_extent",
                      cfg.grid_extent > 0.0 ? fmt(cfg.grid_extent) : std::string("auto"));
    meta.emplace_back("sampled", cfg.sampled ? "1" : "0");
    meta.emplace_back("shots", std::to_string(cfg.shots));

    bool all_converged = true;
    double worst_boundary = 0.0;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t r = 0; r < qs.size(); ++r) {
        RunConfig row_cfg = cfg;
        row_cfg.q = qs[r];
        FockVector psi = cli::build_state(row_cfg);
        channel::ChannelParams params(qs[r], cfg.cutoff, cfg.allow_high_q);
        if (cfg.sampled) {
            sampler::SamplerConfig scfg;
            scfg.seed = cvtele::rng::detail::mix(cfg.seed + r + 1);
            auto run = sampler::run_shots(psi, params, cfg.shots, scfg);
            rows.push_back({fmt(qs[r]), fmt(run.summary.mean_fidelity),
                            fmt(run.summary.stderr_fidelity)});
        } else {
            const cplx centroid = channel::coherent_centroid(psi);
            const double extent = cli::resolve_extent(row_cfg, std::abs(centroid));
            quad::QuadGrid grid = quad::make_grid(centroid, extent, cfg.grid_points);
            auto fav = channel::average_fidelity(psi, params, grid);
            all_converged = all_converged && fav.converged;
            worst_boundary = std::max(worst_boundary, fav.boundary_mass);
            rows.push_back({fmt(qs[r]), fmt(fav.value), ""});
        }
    }

    meta.emplace_back("worst_boundary_mass", fmt(worst_boundary));
    meta.emplace_back("converged", all_converged ? "1" : "0");
    if (cfg.format == "csv") {
        write_output(cfg.out, cli::render_csv(meta, {"q", "f_av", "f_av_stderr"}, rows));
    } else {
        json j;
        j["meta"] = meta_to_json(meta);
        j["rows"] = json::array();
        for (const auto& r : rows) {
            j["rows"].push_back({{"q", r[0]}, {"f_av", r[1]}, {"f_av_stderr", r[2]}});
        }
        write_output(cfg.out, j.dump(2) + "\n");
    }
    if (!all_converged) throw cli::ConvergenceError("a sweep row failed the convergence check");
    return cli::kExitOk;
}

// ------------------------------------------------------------------- shots
int cmd_shots(const RunConfig& cfg) {
    if (cfg.shots < 1) throw std::invalid_argument("shots must be >= 1");
    FockVector psi = cli::build_state(cfg);
    channel::ChannelParams params(cfg.q, cfg.cutoff, cfg.allow_high_q);

    sampler::SamplerConfig scfg;
    scfg.seed = cfg.seed;
    auto run = sampler::run_shots(psi, params, cfg.shots, scfg);

    // quadrature reference for the summary
    const cplx centroid = channel::coherent_centroid(psi);
    const double extent = cli::resolve_extent(cfg, std::abs(centroid));
    auto fav = channel::average_fidelity(
        psi, params, quad::make_grid(centroid, extent, cfg.grid_points));

    Metadata meta = base_metadata(cfg, "shots");
    meta.emplace_back("shots", std::to_string(cfg.shots));
    meta.emplace_back("grid_extent", fmt(extent));
    meta.emplace_back("grid_points", std::to_string(cfg.grid_points));
    meta.emplace_back("quadrature_boundary_mass", fmt(fav.boundary_mass));
    meta.emplace_back("quadrature_converged", fav.converged ? "1" : "0");
    meta.emplace_back("mean_fidelity", fmt(run.summary.mean_fidelity));
    meta.emplace_back("stderr_fidelity", fmt(run.summary.stderr_fidelity));
    meta.emplace_back("acceptance_rate", fmt(run.summary.acceptance_rate));
    meta.emplace_back("quadrature_f_av", fmt(fav.value));

    json summary;
    summary["n_shots"] = run.summary.n_shots;
    summary["mean_fidelity"] = run.summary.mean_fidelity;
    summary["stderr_fidelity"] = run.summary.stderr_fidelity;
    summary["acceptance_rate"] = run.summary.acceptance_rate;
    summary["total_proposals"] = run.summary.total_proposals;
    summary["quadrature_f_av"] = fav.value;
    summary["quadrature_converged"] = fav.converged;

    // chi-square GOF against the closed-form P(beta) for gaussian inputs
    if (has_coherent_closed_form(cfg)) {
        std::vector<cplx> draws;
        draws.reserve(run.records.size());
        for (const auto& r : run.records) draws.push_back(r.beta);
        const cplx center = (cfg.state == "coherent") ? cplx(cfg.alpha_re, cfg.alpha_im)
                                                      : cplx(0.0);
        auto gof = cvtele::stats::radial_gaussian_gof(draws, center, 1.0 - cfg.q * cfg.q);
        summary["chi2_statistic"] = gof.statistic;
        summary["chi2_dof"] = gof.dof;
        summary["chi2_p_value"] = gof.p_value;
        meta.emplace_back("chi2_p_value", fmt(gof.p_value));
    } else {
        summary["chi2_p_value"] = nullptr;
    }

    std::vector<std::vector<std::string>> rows;
    rows.reserve(run.records.size());
    for (const auto& r : run.records) {
        rows.push_back({std::to_string(r.shot_index), fmt(r.beta.real()), fmt(r.beta.imag()),
                        fmt(r.weight_at_beta), fmt(r.conditional_fidelity)});
    }

    if (cfg.format == "csv") {
        write_output(cfg.out,
                     cli::render_csv(meta,
                                     {"shot_index", "beta_re", "beta_im", "weight",
                                      "conditional_fidelity"},
                                     rows));
        json sj;
        sj["meta"] = meta_to_json(base_metadata(cfg, "shots"));
        sj["summary"] = summary;
        if (!cfg.out.empty()) {
            write_output(cfg.out + ".summary.json", sj.dump(2) + "\n");
        } else {
            std::cout << sj.dump(2) + "\n";
        }
    } else {
        json j;
        j["meta"] = meta_to_json(meta);
        j["summary"] = summary;
        j["records"] = json::array();
        for (const auto& r : run.records) {
            j["records"].push_back({{"shot_index", r.shot_index},
                                    {"beta_re", r.beta.real()},
                                    {"beta_im", r.beta.imag()},
                                    {"weight", r.weight_at_beta},
                                    {"conditional_fidelity", r.conditional_fidelity}});
        }
        write_output(cfg.out, j.dump(2) + "\n");
    }
    return cli::kExitOk;
}

// ------------------------------------------------------------------ verify
double weighted_mean(const verify::VerificationBasis& b, const std::vector<double>& p,
                     bool imag_label = false) {
    double m = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double lab = imag_label ? b.label(k).imag() : b.label(k).real();
        m += b.weight(k) * lab * p[k];
    }
    return m;
}

double weighted_var(const verify::VerificationBasis& b, const std::vector<double>& p, double mean,
                    bool imag_label = false) {
    double v = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        const double lab = imag_label ? b.label(k).imag() : b.label(k).real();
        v += b.weight(k) * (lab - mean) * (lab - mean) * p[k];
    }
    return v;
}

int cmd_verify(const RunConfig& cfg) {
    FockVector psi = cli::build_state(cfg);
    channel::ChannelParams params(cfg.q, cfg.cutoff, cfg.allow_high_q);
    const verify::BasisKind kind = verify::parse_basis_kind(cfg.basis);
    const cplx centroid = channel::coherent_centroid(psi);
    const double extent = cli::resolve_extent(cfg, std::abs(centroid));
    quad::QuadGrid grid = quad::make_grid(centroid, extent, cfg.grid_points);

    Metadata meta = base_metadata(cfg, "verify");
    meta.emplace_back("basis", cfg.basis);
    meta.emplace_back("grid_extent", fmt(extent));
    meta.emplace_back("grid_points", std::to_string(cfg.grid_points));

    if (kind == verify::BasisKind::eight_port) {
        // completeness diagnostic of the discretized coherent POVM
        auto basis = verify::VerificationBasis::eight_port(
            quad::make_grid(centroid, extent + 1.0, std::min(cfg.grid_points, 61)), cfg.cutoff);
        const double dev = basis.completeness_deviation();
        meta.emplace_back("completeness_deviation", fmt(dev));

        // two-step measurement: draw beta ~ P, alpha ~ Q of the conditional
        // output, reconstruct gamma = beta + q(alpha - beta)
        sampler::BetaSampler beta_sampler(psi, params);
        channel::ChannelParams qzero(0.0, cfg.cutoff);
        std::vector<std::vector<std::string>> rows;
        rows.reserve(cfg.shots);
        cplx gsum = 0.0;
        std::vector<cplx> gammas;
        gammas.reserve(cfg.shots);
        for (std::uint64_t i = 0; i < cfg.shots; ++i) {
            cvtele::rng::Stream stream(cfg.seed, i);
            const cplx beta = beta_sampler.sample(stream);
            auto tp = channel::teleport_pure(psi, beta, params);
            if (tp.underflow) throw sampler::SamplerError("underflowed teleport weight");
            sampler::BetaSampler alpha_sampler(tp.output, qzero);
            const cplx alpha = alpha_sampler.sample(stream);
            const cplx gamma = verify::reconstruct_gamma(beta, alpha, cfg.q);
            gammas.push_back(gamma);
            gsum += gamma;
            rows.push_back({std::to_string(i), fmt(beta.real()), fmt(beta.imag()),
                            fmt(alpha.real()), fmt(alpha.imag()), fmt(gamma.real()),
                            fmt(gamma.imag())});
        }
        const cplx gmean = gsum / static_cast<double>(cfg.shots);
        double gvar_re = 0.0, gvar_im = 0.0;
        for (auto g : gammas) {
            gvar_re += (g.real() - gmean.real()) * (g.real() - gmean.real());
            gvar_im += (g.imag() - gmean.imag()) * (g.imag() - gmean.imag());
        }
        gvar_re /= gammas.size() - 1.0;
        gvar_im /= gammas.size() - 1.0;

        // reference: Q-function moments of the input state
        auto [x, y] = fock::quadrature_operators(cfg.cutoff);
        const double mx = cvtele::expectation(psi, x, psi).real();
        const double my = cvtele::expectation(psi, y, psi).real();
        const double vx =
            cvtele::expectation(psi, cvtele::multiply(x, x), psi).real() - mx * mx + 0.25;
        const double vy =
            cvtele::expectation(psi, cvtele::multiply(y, y), psi).real() - my * my + 0.25;
        meta.emplace_back("gamma_mean_re", fmt(gmean.real()));
        meta.emplace_back("gamma_mean_im", fmt(gmean.imag()));
        meta.emplace_back("gamma_var_re", fmt(gvar_re));
        meta.emplace_back("gamma_var_im", fmt(gvar_im));
        meta.emplace_back("input_q_mean_re", fmt(mx));
        meta.emplace_back("input_q_mean_im", fmt(my));
        meta.emplace_back("input_q_var_re", fmt(vx));
        meta.emplace_back("input_q_var_im", fmt(vy));
        meta.emplace_back("mc_sigma_var", fmt(vx * std::sqrt(2.0 / cfg.shots)));

        if (cfg.format == "csv") {
            write_output(cfg.out, cli::render_csv(meta,
                                                  {"shot_index", "beta_re", "beta_im", "alpha_re",
                                                   "alpha_im", "gamma_re", "gamma_im"},
                                                  rows));
        } else {
            json j;
            j["meta"] = meta_to_json(meta);
            j["gamma_records"] = json::array();
            for (const auto& r : rows) {
                j["gamma_records"].push_back({{"shot_index", r[0]},
                                              {"beta_re", r[1]},
                                              {"beta_im", r[2]},
                                              {"alpha_re", r[3]},
                                              {"alpha_im", r[4]},
                                              {"gamma_re", r[5]},
                                              {"gamma_im", r[6]}});
            }
            write_output(cfg.out, j.dump(2) + "\n");
        }
        return cli::kExitOk;
    }

    // distribution bases: input table vs teleported-ensemble table
    auto rho = channel::output_density_matrix(psi, params, grid);
    if (!rho.converged) {
        throw cli::ConvergenceError("output density matrix quadrature not converged");
    }
    meta.emplace_back("rho_boundary_mass", fmt(rho.boundary_mass));

    std::vector<std::vector<std::string>> rows;
    if (kind == verify::BasisKind::number) {
        auto basis = verify::VerificationBasis::number(cfg.cutoff);
        meta.emplace_back("completeness_deviation", fmt(basis.completeness_deviation()));
        for (int n = 0; n <= cfg.cutoff; ++n) {
            rows.push_back({std::to_string(n), fmt(std::norm(psi[n])),
                            fmt(rho.value.at(n, n).real())});
        }
        if (cfg.format == "csv") {
            write_output(cfg.out,
                         cli::render_csv(meta, {"n", "p_input", "p_teleported"}, rows));
        } else {
            json j;
            j["meta"] = meta_to_json(meta);
            j["table"] = json::array();
            for (const auto& r : rows) {
                j["table"].push_back({{"n", r[0]}, {"p_input", r[1]}, {"p_teleported", r[2]}});
            }
            write_output(cfg.out, j.dump(2) + "\n");
        }
        return cli::kExitOk;
    }

    auto basis = verify::VerificationBasis::homodyne_for_state(kind, psi, cfg.basis_points);
    meta.emplace_back("completeness_deviation", fmt(basis.completeness_deviation()));

    std::vector<double> xs(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) xs[k] = basis.label(k).real();
    // rotate the y-quadrature into measurement position via the basis rows
    std::vector<double> p_in(basis.size()), p_out(basis.size());
    {
        FockVector vk(cfg.cutoff);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            for (int n = 0; n <= cfg.cutoff; ++n) vk[n] = basis.state_row(k)[n];
            p_in[k] = std::norm(fock::overlap(vk, psi));
            p_out[k] = cvtele::expectation(vk, rho.value, vk).real();
        }
    }

    const double mean_in = weighted_mean(basis, p_in);
    const double var_in = weighted_var(basis, p_in, mean_in);
    const double mean_out = weighted_mean(basis, p_out);
    const double var_out = weighted_var(basis, p_out, mean_out);
    meta.emplace_back("mean_input", fmt(mean_in));
    meta.emplace_back("var_input", fmt(var_in));
    meta.emplace_back("mean_teleported", fmt(mean_out));
    meta.emplace_back("var_teleported", fmt(var_out));
    if (has_coherent_closed_form(cfg)) {
        meta.emplace_back("var_teleported_reference",
                          fmt(0.25 + (1.0 - cfg.q) / (2.0 * (1.0 + cfg.q))));
    }

    for (std::size_t k = 0; k < basis.size(); ++k) {
        rows.push_back({fmt(xs[k]), fmt(p_in[k]), fmt(p_out[k])});
    }
    if (cfg.format == "csv") {
        write_output(cfg.out, cli::render_csv(meta, {"x", "p_input", "p_teleported"}, rows));
    } else {
        json j;
        j["meta"] = meta_to_json(meta);
        j["table"] = json::array();
        for (const auto& r : rows) {
            j["table"].push_back({{"x", r[0]}, {"p_input", r[1]}, {"p_teleported", r[2]}});
        }
        write_output(cfg.out, j.dump(2) + "\n");
    }
    return cli::kExitOk;
}

// -------------------------------------------------------------- povm-check
int cmd_povm_check(const RunConfig& cfg) {
    FockVector psi = cli::build_state(cfg);
    const cplx centroid = channel::coherent_centroid(psi);
    const double extent = cli::resolve_extent(cfg, std::abs(centroid)) + 1.0;
    quad::QuadGrid grid = quad::make_grid(cplx(0.0), extent, cfg.grid_points);
    const int interior = std::min(11, cfg.cutoff / 2 + 1);

    auto res = channel::reference_povm_completeness(psi, grid, interior);
    const double dev =
        cvtele::max_abs_diff(res.value, OperatorMatrix::identity(cfg.cutoff), interior);

    Metadata meta = base_metadata(cfg, "povm-check");
    meta.emplace_back("grid_extent", fmt(extent));
    meta.emplace_back("grid_points", std::to_string(cfg.grid_points));
    std::vector<std::vector<std::string>> rows;
    rows.push_back({std::to_string(interior), fmt(dev), fmt(res.boundary_mass),
                    res.converged ? "1" : "0"});
    if (cfg.format == "csv") {
        write_output(cfg.out, cli::render_csv(meta,
                                              {"interior_dim", "max_abs_deviation",
                                               "boundary_mass", "converged"},
                                              rows));
    } else {
        json j;
        j["meta"] = meta_to_json(meta);
        j["interior_dim"] = interior;
        j["max_abs_deviation"] = dev;
        j["boundary_mass"] = res.boundary_mass;
        j["converged"] = res.converged;
        write_output(cfg.out, j.dump(2) + "\n");
    }
    if (!res.converged) throw cli::ConvergenceError("POVM completeness quadrature not converged");
    return cli::kExitOk;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--config", "path to a flat JSON config file (loaded before flags)");
    cmd->add_option("--state", cfg.state, "input state: vacuum|number|coherent|cat|squeezed");
    cmd->add_option("--n", cfg.n, "photon number for --state number");
    cmd->add_option("--alpha-re", cfg.alpha_re, "Re alpha for coherent/cat states");
    cmd->add_option("--alpha-im", cfg.alpha_im, "Im alpha for coherent/cat states");
    cmd->add_option("--cat-sign", cfg.cat_sign, "+1 or -1 cat superposition sign");
    cmd->add_option("--squeeze-r", cfg.squeeze_r, "squeezing parameter r");
    cmd->add_option("--q", cfg.q, "entanglement parameter in [0,1)");
    cmd->add_option("--cutoff", cfg.cutoff, "Fock-space truncation N");
    cmd->add_flag("--allow-high-q", cfg.allow_high_q, "opt in to q > 0.95");
    cmd->add_option("--extent", cfg.grid_extent, "grid half-width (0 = automatic)");
    cmd->add_option("--points", cfg.grid_points, "grid points per axis (odd)");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--shots", cfg.shots, "number of Monte Carlo shots");
    cmd->add_option("--basis", cfg.basis, "verification basis");
    cmd->add_option("--basis-points", cfg.basis_points, "homodyne discretization points");
    cmd->add_option("--ray-re", cfg.ray_re, "ray direction (real part)");
    cmd->add_option("--ray-im", cfg.ray_im, "ray direction (imag part)");
    cmd->add_option("--ray-max", cfg.ray_max, "ray sweep reach");
    cmd->add_option("--ray-points", cfg.ray_points, "ray sweep points");
    cmd->add_option("--q-list", cfg.q_list, "comma-separated q values for sweep-q");
    cmd->add_flag("--sampled", cfg.sampled, "sweep-q rows by Monte Carlo");
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
    cmd->add_option("--format", cfg.format, "csv or json");
}

}  // namespace

int main(int argc, char** argv) {
    // collapse repeated accuracy warnings; print at most a handful
    std::set<std::string> seen_warnings;
    fock::set_warning_handler([&seen_warnings](const std::string& msg) {
        if (!seen_warnings.insert(msg).second) return;
        if (seen_warnings.size() <= 5) {
            std::cerr << "cvteleport: warning: " << msg << "\n";
        } else if (seen_warnings.size() == 6) {
            std::cerr << "cvteleport: warning: further accuracy warnings suppressed\n";
        }
    });

    RunConfig cfg;
    // the config file provides defaults; flags parsed afterwards override
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                cfg = RunConfig::from_json_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "cvteleport: " << e.what() << "\n";
                return cli::kExitValidation;
            }
        }
    }

    CLI::App app{"finite-entanglement continuous-variable teleportation simulator"};
    app.set_version_flag("--version", cli::kVersion);
    app.require_subcommand(1);

    CLI::App* c_fid = app.add_subcommand("fidelity", "average fidelity and a P/F ray sweep");
    CLI::App* c_sweep = app.add_subcommand("sweep-q", "F_av as a function of q");
    CLI::App* c_shots = app.add_subcommand("shots", "Monte Carlo teleportation events");
    CLI::App* c_verify = app.add_subcommand("verify", "verification-measurement distributions");
    CLI::App* c_povm = app.add_subcommand("povm-check", "reference-state POVM completeness");
    for (CLI::App* c : {c_fid, c_sweep, c_shots, c_verify, c_povm}) {
        add_common_options(c, cfg);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitValidation;
    }

    try {
        cfg.validate();
        if (c_fid->parsed()) return cmd_fidelity(cfg);
        if (c_sweep->parsed()) return cmd_sweep_q(cfg);
        if (c_shots->parsed()) return cmd_shots(cfg);
        if (c_verify->parsed()) return cmd_verify(cfg);
        if (c_povm->parsed()) return cmd_povm_check(cfg);
        std::cerr << "cvteleport: no subcommand selected\n";
        return cli::kExitValidation;
    } catch (const cli::ConvergenceError& e) {
        std::cerr << "cvteleport: non-convergence: " << e.what() << "\n";
        return cli::kExitNonConvergence;
    } catch (const sampler::SamplerError& e) {
        std::cerr << "cvteleport: sampler failure: " << e.what() << "\n";
        return cli::kExitSamplerFailure;
    } catch (const std::exception& e) {
        std::cerr << "cvteleport: " << e.what() << "\n";
        return cli::kExitValidation;
    }
}
