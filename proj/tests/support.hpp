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

// Shared test helpers.
//
// The scalar oracles below never touch the library. They use plain doubles
// and closed forms, so they serve as an independent route to the numbers
// the library computes from matrices. The frozen constants were produced by
// a separate high-precision script and are pinned here as literals.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qratchet/qdense.hpp"

namespace oracle {

// Reference point (beta, omega, lambda) = (1, 1, 0.5).
namespace ref {
inline constexpr double Z = 5.341413200043249;
inline constexpr double p_gg = 0.508906861659202;
inline constexpr double p_minus = 0.3086676145344417;
inline constexpr double p_plus = 0.11355246954265258;
inline constexpr double p_ee = 0.06887305426370378;
inline constexpr double s_int = 1.1378988822714664;
inline constexpr double p_e_atom = 0.27998309630225093;
inline constexpr double p_o_minus = 0.3775406687981454;
inline constexpr double p_o_plus = 0.6224593312018546;
inline constexpr double p_o = 0.47610632983695267;
inline constexpr double delta_z = 0.0468428152690919;
inline constexpr double s_b_given_a_z = 0.5918043456953321;
inline constexpr double gain = 0.02292639168991139;
inline constexpr double w_net_random = -0.023916423579180508;
inline constexpr double t_eff_ratio = 1.0587102943855617;
inline constexpr double joint_entropy = 1.1847416975405582;   // nats
inline constexpr double joint_bits = 1.7092209717761357;      // per box
inline constexpr double internal_bits = 1.641641074486139;    // per box
inline constexpr double w_probe = 0.07463118080598317;
} // namespace ref

// Two-level generic cycle, h1 = diag(-1, 1), h2 = diag(-2, 2), beta = 1.
namespace two_level {
inline constexpr double first_term = 0.20243342412005202;
inline constexpr double entropy_term = -0.27523908732103164;
inline constexpr double w_net = -0.07280566320097961;
inline constexpr double p_low = 0.8807970779778824;
inline constexpr double p_high = 0.11920292202211756;
} // namespace two_level

namespace probe {
inline constexpr double sigma_1e4 = 44.8998886412873;
inline constexpr double sigma_form_1e4 = 0.000479141556605562;
inline constexpr double variance_form_1e4 = 0.0007535735546930599;
} // namespace probe

inline constexpr double binary_entropy_0p9_bits = 0.46899559358928117;

struct Pops {
    double gg, minus, plus, ee, z;
};

inline Pops populations(double beta, double omega, double lambda) {
    const double z = std::exp(beta * omega) + std::exp(-beta * omega) +
                     std::exp(beta * lambda) + std::exp(-beta * lambda);
    return {std::exp(beta * omega) / z, std::exp(beta * lambda) / z,
            std::exp(-beta * lambda) / z, std::exp(-beta * omega) / z, z};
}

inline double shannon_nats(std::initializer_list<double> ps) {
    double h = 0.0;
    for (double p : ps) {
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    return h;
}

inline double p_o_minus(double beta, double lambda) {
    return 1.0 / (1.0 + std::exp(beta * lambda));
}
inline double p_o_plus(double beta, double lambda) {
    return 1.0 / (1.0 + std::exp(-beta * lambda));
}

inline double p_o(double beta, double omega, double lambda) {
    const Pops p = populations(beta, omega, lambda);
    return 0.5 * (p.gg + p.ee) + p.minus * p_o_minus(beta, lambda) +
           p.plus * p_o_plus(beta, lambda);
}

// delta in the z basis: measuring A then B turns the (|->, |+>) block into
// two equally likely product outcomes.
inline double delta_z(double beta, double omega, double lambda) {
    const Pops p = populations(beta, omega, lambda);
    const double q = p.minus + p.plus;
    double d = 0.0;
    if (q > 0.0) {
        d -= q * std::log(q / 2.0);
    }
    if (p.minus > 0.0) {
        d += p.minus * std::log(p.minus);
    }
    if (p.plus > 0.0) {
        d += p.plus * std::log(p.plus);
    }
    return d;
}

inline double gain_tanh(double beta, double omega, double lambda) {
    return lambda * std::tanh(beta * lambda / 2.0) /
           populations(beta, omega, lambda).z;
}

inline double t_eff_ratio(double beta, double omega, double lambda) {
    const Pops p = populations(beta, omega, lambda);
    const double pe = p.ee + 0.5 * (p.minus + p.plus);
    return beta * omega / std::log(1.0 / pe - 1.0);
}

// Generic cycle with diagonal Hamiltonians whose level order is shared,
// so the rank-paired quench keeps each population on its own index.
inline double diagonal_cycle_w_net(const std::vector<double> &e1,
                                   const std::vector<double> &e2,
                                   double beta) {
    auto gibbs = [&](const std::vector<double> &e) {
        const double emin = *std::min_element(e.begin(), e.end());
        std::vector<double> w(e.size());
        double z = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            w[i] = std::exp(-beta * (e[i] - emin));
            z += w[i];
        }
        for (double &x : w) {
            x /= z;
        }
        return w;
    };
    const auto p1 = gibbs(e1);
    const auto p2 = gibbs(e2);
    double first = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        first += (p1[i] - p2[i]) * e1[i];
        if (p1[i] > 0.0) {
            s1 -= p1[i] * std::log(p1[i]);
        }
        if (p2[i] > 0.0) {
            s2 -= p2[i] * std::log(p2[i]);
        }
    }
    return first + (s2 - s1) / beta;
}

} // namespace oracle

namespace testing_rng {

/// splitmix64; enough for drawing test inputs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return next() % n; }
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t s_;
};

using qratchet::cplx;
using qratchet::Operator;

inline Operator random_hermitian(Rng &rng, std::size_t dim, double scale = 1.0) {
    Operator h(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        h(i, i) = scale * rng.normal();
        for (std::size_t j = i + 1; j < dim; ++j) {
            const cplx z(scale * rng.normal(), scale * rng.normal());
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

/// Ginibre-style mixed state G G^dagger / Tr.
inline qratchet::DensityMatrix random_state(Rng &rng, std::size_t dim) {
    Operator g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            g(i, j) = cplx(rng.normal(), rng.normal());
        }
    }
    return qratchet::DensityMatrix::from_unnormalized(g * g.adjoint());
}

/// Diagonal single-qubit state with a random population.
inline Operator random_diagonal_qubit(Rng &rng) {
    const double p = rng.uniform();
    return Operator::diagonal({p, 1.0 - p});
}

} // namespace testing_rng
