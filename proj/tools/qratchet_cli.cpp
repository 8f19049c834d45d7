// Copyright 2026 The qratchet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qratchet: figure sweeps, single-point ledgers, discord diagnostics and
// Monte Carlo runs of the two-atom quantum ratchet.
//
// Exit codes: 0 success, 2 usage error, 3 internal-consistency violation.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace qratchet;
using namespace qratchet::cli;

void write_output(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open output file " + path);
    }
    f << text;
}

struct SweepFlags {
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    std::vector<double> curves;
    double omega = 1.0;
};

CLI::App *add_sweep(CLI::App &app, const std::string &name,
                    const std::string &help, SweepFlags &f,
                    const SweepSpec &defaults, const std::string &curve_flag) {
    f.start = defaults.start;
    f.stop = defaults.stop;
    f.steps = defaults.steps;
    f.curves = defaults.curves;
    f.omega = defaults.omega;
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("--start", f.start, "sweep start")->capture_default_str();
    sub->add_option("--stop", f.stop, "sweep stop")->capture_default_str();
    sub->add_option("--steps", f.steps, "number of grid points")
        ->capture_default_str();
    sub->add_option(curve_flag, f.curves, "one curve per value")
        ->capture_default_str();
    sub->add_option("--omega", f.omega, "single-atom gap")->capture_default_str();
    return sub;
}

SweepSpec to_spec(const SweepFlags &f, SweepVariable v, unsigned threads) {
    return {v, f.start, f.stop, f.steps, f.curves, f.omega, threads};
}

DemonMode parse_mode(const std::string &s) {
    if (s == "random") {
        return DemonMode::random;
    }
    if (s == "deterministic") {
        return DemonMode::deterministic;
    }
    throw UsageError("mode must be 'random' or 'deterministic'");
}

// Fields named as in McConfig; unknown keys are rejected.
void apply_config_file(const std::string &path, McConfig &cfg) {
    std::ifstream f(path);
    if (!f) {
        throw UsageError("cannot open config file " + path);
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(std::string("config file: ") + e.what());
    }
    try {
        for (const auto &[key, value] : j.items()) {
            if (key == "omega") {
                cfg.params.omega = value.get<double>();
            } else if (key == "lambda") {
                cfg.params.lambda = value.get<double>();
            } else if (key == "beta") {
                cfg.params.beta = value.get<double>();
            } else if (key == "r0") {
                cfg.params.r0 = value.get<double>();
            } else if (key == "L") {
                cfg.params.L = value.get<double>();
            } else if (key == "n_boxes") {
                cfg.n_boxes = value.get<std::uint64_t>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "demon_mode") {
                cfg.demon_mode = parse_mode(value.get<std::string>());
            } else if (key == "chunk_size") {
                cfg.chunk_size = value.get<std::uint64_t>();
            } else {
                throw UsageError("config file: unknown field '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(std::string("config file: ") + e.what());
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum ratchet heat engine: ledgers, sweeps and Monte Carlo"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    unsigned threads = 1;
    app.add_option("--out", out_path, "write output to this file")
        ->capture_default_str();
    app.add_option("--threads", threads, "worker cap (speed only)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    SweepFlags po, teff, work;
    auto *po_cmd = add_sweep(app, "fig2-po",
                             "uncoupled-state probability vs lambda", po,
                             default_po_spec(), "--betas");
    auto *teff_cmd = add_sweep(app, "fig2-teff",
                               "effective temperature ratio vs beta", teff,
                               default_teff_spec(), "--lambdas");
    auto *work_cmd = add_sweep(app, "fig2-work",
                               "net work per cycle vs beta, both demon modes",
                               work, default_work_spec(), "--lambdas");

    EngineParams point;
    point.lambda = 0.5;
    auto add_point = [&](CLI::App *sub) {
        sub->add_option("--omega", point.omega, "single-atom gap")
            ->capture_default_str();
        sub->add_option("--lambda", point.lambda, "coupling")
            ->capture_default_str();
        sub->add_option("--beta", point.beta, "inverse temperature")
            ->capture_default_str();
    };
    auto *discord_cmd =
        app.add_subcommand("discord", "excess entropy and discord of rho_int");
    add_point(discord_cmd);
    auto *cycle_cmd =
        app.add_subcommand("cycle", "single-point ratchet ledger (JSON)");
    add_point(cycle_cmd);
    std::string delta_source = "z";
    cycle_cmd->add_option("--delta-basis", delta_source,
                          "'z' or 'discord' for the random-mode excess entropy")
        ->check(CLI::IsMember({"z", "discord"}))
        ->capture_default_str();

    McConfig mc_defaults;
    mc_defaults.params.lambda = 0.5;
    double mc_beta = 1.0, mc_omega = 1.0, mc_lambda = 0.5;
    std::uint64_t mc_boxes = 0, mc_seed = 0, mc_chunk = 0;
    std::string mc_mode, mc_config, mc_dump;
    auto *mc_cmd = app.add_subcommand("mc", "N-box Monte Carlo run (JSON)");
    auto *o_beta = mc_cmd->add_option("--beta", mc_beta, "inverse temperature");
    auto *o_omega = mc_cmd->add_option("--omega", mc_omega, "single-atom gap");
    auto *o_lambda = mc_cmd->add_option("--lambda", mc_lambda, "coupling");
    auto *o_boxes = mc_cmd->add_option("--boxes", mc_boxes, "number of boxes N");
    auto *o_seed = mc_cmd->add_option("--seed", mc_seed, "64-bit seed");
    auto *o_mode = mc_cmd->add_option("--mode", mc_mode,
                                      "random | deterministic");
    auto *o_chunk = mc_cmd->add_option("--chunk", mc_chunk, "work chunk size");
    mc_cmd->add_option("--config", mc_config, "JSON file with McConfig fields");
    mc_cmd->add_option("--dump", mc_dump, "write the binary record dump here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*po_cmd) {
            write_output(out_path, cmd_fig2_po(to_spec(po, SweepVariable::lambda,
                                                       threads)));
        } else if (*teff_cmd) {
            write_output(out_path, cmd_fig2_teff(to_spec(
                                       teff, SweepVariable::beta, threads)));
        } else if (*work_cmd) {
            write_output(out_path, cmd_fig2_work(to_spec(
                                       work, SweepVariable::beta, threads)));
        } else if (*discord_cmd) {
            point.validate();
            write_output(out_path, cmd_discord(point));
        } else if (*cycle_cmd) {
            point.validate();
            const CycleOutput res = cmd_cycle(
                point, delta_source == "z" ? DeltaSource::z_basis
                                           : DeltaSource::discord_minimum);
            write_output(out_path, res.json);
            if (res.random_mode_violation) {
                std::cerr << "error: random-mode cycle violates the second law\n";
                return kExitViolation;
            }
        } else if (*mc_cmd) {
            McConfig cfg = mc_defaults;
            if (!mc_config.empty()) {
                apply_config_file(mc_config, cfg);
            }
            if (o_beta->count()) cfg.params.beta = mc_beta;
            if (o_omega->count()) cfg.params.omega = mc_omega;
            if (o_lambda->count()) cfg.params.lambda = mc_lambda;
            if (o_boxes->count()) cfg.n_boxes = mc_boxes;
            if (o_seed->count()) cfg.seed = mc_seed;
            if (o_mode->count()) cfg.demon_mode = parse_mode(mc_mode);
            if (o_chunk->count()) cfg.chunk_size = mc_chunk;
            cfg.threads = threads;
            cfg.validate();
            const McOutput res = cmd_mc(cfg, !mc_dump.empty());
            if (!mc_dump.empty()) {
                std::ofstream f(mc_dump, std::ios::binary);
                if (!f) {
                    throw UsageError("cannot open dump file " + mc_dump);
                }
                f.write(reinterpret_cast<const char *>(res.record_dump.data()),
                        static_cast<std::streamsize>(res.record_dump.size()));
            }
            write_output(out_path, res.json);
            if (res.random_mode_violation) {
                std::cerr << "error: random-mode run violates the second law\n";
                return kExitViolation;
            }
        }
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitViolation;
    }
    return kExitOk;
}
