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

// Subcommand bodies for the qratchet CLI. Each returns the text it would
// print; main() owns argument parsing, files and exit codes.

#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qratchet/qratchet.hpp"

namespace qratchet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitViolation = 3;

/// Usage-level failure: bad ranges or flags.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// 12 significant digits, '.' separator, locale independent.
inline std::string fmt(double x) {
    if (x == 0.0) {
        return "0"; // folds -0
    }
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    return {buf, res.ptr};
}

enum class SweepVariable { lambda, beta };

struct SweepSpec {
    SweepVariable variable = SweepVariable::lambda;
    double start = 0.0;
    double stop = 1.0;
    int steps = 101;
    /// Values of the other variable, one curve each.
    std::vector<double> curves;
    double omega = 1.0;
    unsigned threads = 1;

    void validate() const {
        if (steps < 2) {
            throw UsageError("sweep needs at least 2 steps");
        }
        if (!(start < stop)) {
            throw UsageError("sweep start must be below stop");
        }
        if (!(omega > 0.0)) {
            throw UsageError("omega must be > 0");
        }
        if (curves.empty()) {
            throw UsageError("at least one curve value is required");
        }
        const bool lambda_axis = variable == SweepVariable::lambda;
        if (lambda_axis ? start < 0.0 : start <= 0.0) {
            throw UsageError(lambda_axis ? "lambda range must be >= 0"
                                         : "beta range must be > 0");
        }
        for (double c : curves) {
            if (lambda_axis ? !(c > 0.0) : !(c >= 0.0)) {
                throw UsageError(lambda_axis ? "beta values must be > 0"
                                             : "lambda values must be >= 0");
            }
        }
    }

    [[nodiscard]] std::vector<double> grid() const {
        std::vector<double> g(static_cast<std::size_t>(steps));
        for (int k = 0; k < steps; ++k) {
            g[static_cast<std::size_t>(k)] =
                k + 1 == steps ? stop
                               : start + (stop - start) * k / (steps - 1);
        }
        return g;
    }
};

inline SweepSpec default_po_spec() {
    return {SweepVariable::lambda, 0.0, 1.0, 101, {1.0, 2.0, 10.0}, 1.0, 1};
}
inline SweepSpec default_teff_spec() {
    return {SweepVariable::beta, 0.1, 10.0, 100, {0.2, 0.3, 0.4}, 1.0, 1};
}
inline SweepSpec default_work_spec() { return default_teff_spec(); }

namespace detail {

// Evaluates row(curve, x) for every (curve, grid point) in parallel and
// joins the lines in curve-major order.
template <typename Row>
std::string sweep_rows(const SweepSpec &spec, Row &&row) {
    const std::vector<double> xs = spec.grid();
    const std::size_t n = spec.curves.size() * xs.size();
    std::vector<std::string> lines(n);
    qratchet::detail::for_each_chunk(
        n, 16, spec.threads, [&](std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t k = begin; k < end; ++k) {
                lines[k] = row(spec.curves[k / xs.size()], xs[k % xs.size()]);
            }
        });
    std::string out;
    for (const auto &l : lines) {
        out += l;
    }
    return out;
}

inline EngineParams point(double omega, double lambda, double beta) {
    EngineParams p;
    p.omega = omega;
    p.lambda = lambda;
    p.beta = beta;
    return p;
}

} // namespace detail

/// lambda,beta,p_o,p_o_minus,p_o_plus: one curve per beta.
inline std::string cmd_fig2_po(const SweepSpec &spec) {
    spec.validate();
    if (spec.variable != SweepVariable::lambda) {
        throw UsageError("fig2-po sweeps lambda");
    }
    return "lambda,beta,p_o,p_o_minus,p_o_plus\n" +
           detail::sweep_rows(spec, [&](double beta, double lambda) {
               const SpatialOccupancy o =
                   spatial_occupancy(detail::point(spec.omega, lambda, beta));
               return fmt(lambda) + ',' + fmt(beta) + ',' + fmt(o.p_o) + ',' +
                      fmt(o.p_o_minus) + ',' + fmt(o.p_o_plus) + '\n';
           });
}

/// beta,lambda,teff_ratio: one curve per lambda.
inline std::string cmd_fig2_teff(const SweepSpec &spec) {
    spec.validate();
    if (spec.variable != SweepVariable::beta) {
        throw UsageError("fig2-teff sweeps beta");
    }
    return "beta,lambda,teff_ratio\n" +
           detail::sweep_rows(spec, [&](double lambda, double beta) {
               const double r = effective_temperature_ratio(
                   detail::point(spec.omega, lambda, beta));
               return fmt(beta) + ',' + fmt(lambda) + ',' + fmt(r) + '\n';
           });
}

/// beta,lambda,mode,ratchet_gain,delta,w_net for both demon modes.
inline std::string cmd_fig2_work(const SweepSpec &spec) {
    spec.validate();
    if (spec.variable != SweepVariable::beta) {
        throw UsageError("fig2-work sweeps beta");
    }
    std::string out = "beta,lambda,mode,ratchet_gain,delta,w_net\n";
    for (DemonMode mode : {DemonMode::random, DemonMode::deterministic}) {
        out += detail::sweep_rows(spec, [&](double lambda, double beta) {
            const RatchetReport r =
                ratchet_cycle(detail::point(spec.omega, lambda, beta), mode);
            return fmt(beta) + ',' + fmt(lambda) + ',' +
                   std::string(to_string(mode)) + ',' + fmt(r.ratchet_gain) +
                   ',' + fmt(r.delta) + ',' + fmt(r.w_net) + '\n';
        });
    }
    return out;
}

using Json = nlohmann::ordered_json;

inline Json params_json(const EngineParams &p) {
    return Json{{"omega", p.omega}, {"lambda", p.lambda}, {"beta", p.beta},
                {"r0", p.r0},       {"L", p.L}};
}

inline Json ratchet_json(const RatchetReport &r) {
    const SecondLawVerdict v = second_law_check(r);
    return Json{{"mode", to_string(r.mode)},
                {"ratchet_gain", r.ratchet_gain},
                {"delta", r.delta},
                {"erasure_excess", r.erasure_excess},
                {"w_net", r.w_net},
                {"w_probe", r.w_probe},
                {"q_in", r.q_in},
                {"q_out", r.q_out},
                {"du", r.du},
                {"t_eff_ratio", r.t_eff_ratio},
                {"s_int", r.s_int},
                {"violation", v.violated},
                {"violation_expected", v.expected}};
}

struct McOutput {
    std::string json;
    bool random_mode_violation = false;
    std::vector<std::uint8_t> record_dump;
};

inline McOutput cmd_mc(const McConfig &cfg, bool want_dump = false) {
    const McRun result = run_with_record(cfg);
    const McReport &r = result.report;
    const SecondLawVerdict v = second_law_check(r);
    Json j{{"params", params_json(cfg.params)},
           {"n_boxes", r.n_boxes},
           {"seed", r.seed},
           {"mode", to_string(r.mode)},
           {"w_net_mean", r.w_net_mean},
           {"w_net_stderr", r.w_net_stderr},
           {"ratchet_per_box", r.ratchet_per_box},
           {"heat_credit_per_box", r.heat_credit_per_box},
           {"erasure_work_per_box", r.erasure_work_per_box},
           {"erasure_bits_per_box", r.erasure_bits_per_box},
           {"ideal_erasure_bits_per_box", r.ideal_erasure_bits_per_box},
           {"coder_overhead_bits", r.coder_overhead_bits},
           {"probe_bits_per_box", r.probe_bits_per_box},
           {"probe_bits_standard_per_box", r.probe_bits_standard_per_box},
           {"probe_work_per_box", r.probe_work_per_box},
           {"m", r.m},
           {"joint_entropy_empirical", r.joint_entropy_empirical},
           {"internal_entropy_empirical", r.internal_entropy_empirical},
           {"delta_empirical", r.delta_empirical},
           {"internal_counts", r.internal_counts},
           {"joint_counts", r.joint_counts},
           {"uncoupled_minus", r.uncoupled_minus},
           {"uncoupled_plus", r.uncoupled_plus},
           {"violation", v.violated},
           {"violation_expected", v.expected},
           {"analytic", ratchet_json(r.analytic)}};
    McOutput out;
    out.json = j.dump(2) + '\n';
    out.random_mode_violation = v.violated && r.mode == DemonMode::random;
    if (want_dump) {
        out.record_dump = encode_record(result.record);
    }
    return out;
}

inline std::string cmd_discord(const EngineParams &p) {
    const GibbsState rho = internal_state(p);
    const DeltaReport z = excess_entropy(rho.rho, MeasurementBasis::z());
    const DiscordResult d = discord(rho.rho);
    Json j{{"params", params_json(p)},
           {"s_joint", z.s_joint},
           {"s_a", z.s_a},
           {"s_b_given_a_z", z.s_b_given_a},
           {"delta_z", z.delta},
           {"discord", d.value},
           {"argmin_theta", d.argmin.theta},
           {"argmin_phi", d.argmin.phi}};
    return j.dump(2) + '\n';
}

struct CycleOutput {
    std::string json;
    bool random_mode_violation = false;
};

/// Full single-point ledger: populations, occupancies, both demon modes.
inline CycleOutput cmd_cycle(const EngineParams &p, DeltaSource source) {
    const EigenPopulations pop = eigen_populations(p);
    const SpatialOccupancy occ = spatial_occupancy(p);
    const RatchetReport random = ratchet_cycle(p, DemonMode::random, source);
    const RatchetReport det = ratchet_cycle(p, DemonMode::deterministic);
    const Operator h = build_hamiltonian(p, Coupling::coupled);
    const double w_local = local_cycle(h, h, p.beta, MeasurementBasis::z());
    Json j{{"params", params_json(p)},
           {"delta_source", source == DeltaSource::z_basis ? "z_basis"
                                                           : "discord_minimum"},
           {"populations",
            {{"p_gg", pop.p_gg},
             {"p_minus", pop.p_minus},
             {"p_plus", pop.p_plus},
             {"p_ee", pop.p_ee},
             {"partition", pop.partition}}},
           {"occupancy",
            {{"p_i_minus", occ.p_i_minus},
             {"p_o_minus", occ.p_o_minus},
             {"p_i_plus", occ.p_i_plus},
             {"p_o_plus", occ.p_o_plus},
             {"p_i", occ.p_i},
             {"p_o", occ.p_o}}},
           {"p_e_atom", atom_excited_population(p)},
           {"local_cycle_w_net", w_local},
           {"random", ratchet_json(random)},
           {"deterministic", ratchet_json(det)}};
    return {j.dump(2) + '\n', second_law_check(random).violated};
}

} // namespace qratchet::cli
