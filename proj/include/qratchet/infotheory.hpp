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

/**
 * @file
 * Shannon entropy, post-measurement conditional entropy of a two-qubit
 * state, the excess entropy of a local projective measurement, its minimum
 * over Bloch-sphere bases (discord) and the probe-information estimate of a
 * collective spin count. All entropies are in nats unless a name says bits.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <utility>

#include "qratchet/qdense.hpp"

namespace qratchet {

inline constexpr double kOutcomeFloor = 1e-14;

/// Rank-1 projective measurement along Bloch direction (theta, phi).
/// theta = 0 projects onto the first basis state (|g>).
struct MeasurementBasis {
    double theta = 0.0;
    double phi = 0.0;

    static MeasurementBasis z() { return {0.0, 0.0}; }

    [[nodiscard]] std::array<cplx, 2> up() const {
        return {std::cos(theta / 2.0),
                std::polar(std::sin(theta / 2.0), phi)};
    }
    [[nodiscard]] std::array<cplx, 2> down() const {
        return {-std::sin(theta / 2.0),
                std::polar(std::cos(theta / 2.0), phi)};
    }
    /// Projectors onto |+n> and |-n>.
    [[nodiscard]] std::array<Operator, 2> projectors() const {
        const auto u = up();
        const auto d = down();
        return {outer(u), outer(d)};
    }
};

/// Shannon entropy in nats. Sums within 1e-9 of one are renormalized.
inline double shannon(std::span<const double> p) {
    double total = 0.0;
    for (double x : p) {
        if (x < -1e-12) {
            throw ContractError("shannon: negative probability");
        }
        total += std::max(x, 0.0);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ContractError("shannon: probabilities do not sum to 1");
    }
    double h = 0.0;
    for (double x : p) {
        const double q = std::max(x, 0.0) / total;
        h -= xlogx(q);
    }
    return std::max(h, 0.0);
}
inline double shannon(std::initializer_list<double> p) {
    return shannon(std::span<const double>(p.begin(), p.size()));
}

/// Outcome probability and conditional state of B for one projector on A.
struct ConditionalBranch {
    double probability;
    Operator unnormalized_b; ///< Tr_A{rho (Pi x I)}
};

inline ConditionalBranch condition_on_a(const Operator &rho,
                                        const Operator &proj) {
    Operator b(2);
    for (std::size_t bi = 0; bi < 2; ++bi) {
        for (std::size_t bj = 0; bj < 2; ++bj) {
            cplx s{};
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t a2 = 0; a2 < 2; ++a2) {
                    s += rho(a * 2 + bi, a2 * 2 + bj) * proj(a2, a);
                }
            }
            b(bi, bj) = s;
        }
    }
    // Hermitian part; Tr_A{rho (Pi x I)} is Hermitian up to rounding.
    b = (b + b.adjoint()) * cplx(0.5);
    return {b.trace().real(), b};
}

/// S(rho^B | Pi_A): average entropy of B after a projective measurement on A.
inline double conditional_entropy(const DensityMatrix &rho,
                                  const MeasurementBasis &basis) {
    if (rho.dim() != 4) {
        throw DimensionError("conditional_entropy expects a two-qubit state");
    }
    double s = 0.0;
    for (const Operator &proj : basis.projectors()) {
        const ConditionalBranch br = condition_on_a(rho.op(), proj);
        if (br.probability < kOutcomeFloor) {
            continue;
        }
        s += br.probability *
             vn_entropy(DensityMatrix::from_unnormalized(br.unnormalized_b));
    }
    return s;
}

struct DeltaReport {
    double s_a;         ///< S(rho^A)
    double s_b_given_a; ///< S(rho^B | Pi_A)
    double s_joint;     ///< S(rho)
    double delta;       ///< s_a + s_b_given_a - s_joint, clamped at 0
};

/// Excess entropy generated by measuring A then B in the given basis.
inline DeltaReport excess_entropy(const DensityMatrix &rho,
                                  const MeasurementBasis &basis) {
    DeltaReport r{};
    r.s_a = vn_entropy(partial_trace(rho, Subsystem::A));
    r.s_b_given_a = conditional_entropy(rho, basis);
    r.s_joint = vn_entropy(rho);
    const double raw = r.s_a + r.s_b_given_a - r.s_joint;
    if (raw < -1e-10) {
        throw ContractError("excess entropy " + std::to_string(raw) +
                            " below -1e-10");
    }
    r.delta = std::max(raw, 0.0);
    return r;
}

struct DiscordResult {
    double value;
    MeasurementBasis argmin;
};

namespace detail {
inline constexpr int kDiscordThetaPoints = 33;
inline constexpr int kDiscordPhiPoints = 65;
inline constexpr double kDiscordResolution = 1e-7;
} // namespace detail

/**
 * Minimum of the excess entropy over projective bases on A.
 *
 * A 33 x 65 grid over theta in [0, pi] and phi in [0, 2 pi) seeds an
 * adaptive coordinate descent that halves its steps down to 1e-7 rad.
 * Grid ties within 1e-12 go to the lowest linear index. The grid contains
 * the z basis, so the result never exceeds the z-basis excess entropy.
 */
inline DiscordResult discord(const DensityMatrix &rho) {
    using std::numbers::pi;
    const double base = vn_entropy(partial_trace(rho, Subsystem::A)) -
                        vn_entropy(rho);
    const auto eval = [&](double theta, double phi) {
        return base + conditional_entropy(rho, MeasurementBasis{theta, phi});
    };

    const double d_theta = pi / (detail::kDiscordThetaPoints - 1);
    const double d_phi = 2.0 * pi / detail::kDiscordPhiPoints;
    double best = eval(0.0, 0.0);
    MeasurementBasis arg{0.0, 0.0};
    for (int i = 0; i < detail::kDiscordThetaPoints; ++i) {
        for (int j = 0; j < detail::kDiscordPhiPoints; ++j) {
            const double th = i * d_theta;
            const double ph = j * d_phi;
            const double v = eval(th, ph);
            if (v < best - 1e-12) {
                best = v;
                arg = {th, ph};
            }
        }
    }

    double step_t = d_theta;
    double step_p = d_phi;
    while (step_t > detail::kDiscordResolution ||
           step_p > detail::kDiscordResolution) {
        bool moved = false;
        const std::array<std::pair<double, double>, 4> moves{
            {{step_t, 0.0}, {-step_t, 0.0}, {0.0, step_p}, {0.0, -step_p}}};
        for (const auto &[dt, dp] : moves) {
            const double th = std::clamp(arg.theta + dt, 0.0, pi);
            double ph = std::fmod(arg.phi + dp, 2.0 * pi);
            if (ph < 0.0) {
                ph += 2.0 * pi;
            }
            const double v = eval(th, ph);
            if (v < best) {
                best = v;
                arg = {th, ph};
                moved = true;
                break;
            }
        }
        if (!moved) {
            step_t *= 0.5;
            step_p *= 0.5;
        }
    }
    return {std::max(best, 0.0), arg};
}

/// Information gained per box from a binomial excitation count.
struct ProbeInformation {
    double sigma_form_bits;    ///< (1/2N) log2(2 pi e sigma)
    double variance_form_bits; ///< (1/2N) log2(2 pi e sigma^2)
    double sigma;
};

inline ProbeInformation probe_information(std::uint64_t n, double p_e) {
    if (n < 2) {
        throw ParameterError("probe_information: n must be >= 2");
    }
    if (!(p_e > 0.0 && p_e < 1.0)) {
        return {0.0, 0.0, 0.0};
    }
    const double nn = static_cast<double>(n);
    const double sigma = std::sqrt(nn * p_e * (1.0 - p_e));
    const double c = 2.0 * std::numbers::pi * std::numbers::e;
    return {std::log2(c * sigma) / (2.0 * nn),
            std::log2(c * sigma * sigma) / (2.0 * nn), sigma};
}

} // namespace qratchet
