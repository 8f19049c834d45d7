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
 * The two-atom XY ratchet: Hamiltonian, Gibbs state, eigenstate
 * populations, coupled/uncoupled occupancies and the effective single-atom
 * temperature after collapse.
 *
 * Basis order is (|gg>, |ge>, |eg>, |ee>) with atom A as the left tensor
 * factor. Energies use hbar = k_B = 1.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qratchet/qdense.hpp"

namespace qratchet {

struct EngineParams {
    double omega = 1.0;  ///< single-atom gap
    double lambda = 0.0; ///< XY coupling inside the cutoff
    double beta = 1.0;   ///< inverse bath temperature
    double r0 = 1.0;     ///< interaction cutoff
    double L = 0.5;      ///< initial box size

    [[nodiscard]] double temperature() const { return 1.0 / beta; }

    void validate() const {
        if (!(omega > 0.0)) {
            throw ParameterError("omega must be > 0");
        }
        if (!(beta > 0.0)) {
            throw ParameterError("beta must be > 0");
        }
        if (!(lambda >= 0.0)) {
            throw ParameterError("lambda must be >= 0");
        }
        if (!(r0 > 0.0)) {
            throw ParameterError("r0 must be > 0");
        }
        if (!(L > 0.0)) {
            throw ParameterError("L must be > 0");
        }
        if (!std::isfinite(omega) || !std::isfinite(lambda) ||
            !std::isfinite(beta)) {
            throw ParameterError("engine parameters must be finite");
        }
    }
};

/// Step-function coupling: lambda inside the cutoff, zero outside.
inline double coupling_at(const EngineParams &p, double separation) {
    return std::abs(separation) <= p.r0 ? p.lambda : 0.0;
}

enum class Coupling { coupled, uncoupled };

inline Operator build_hamiltonian(const EngineParams &p, Coupling coupling) {
    p.validate();
    const Operator id = Operator::identity(2);
    const double lam = coupling == Coupling::coupled ? p.lambda : 0.0;
    Operator h = kron(spin_z(), id) * cplx(p.omega) +
                 kron(id, spin_z()) * cplx(p.omega);
    h += (kron(spin_plus(), spin_minus()) + kron(spin_minus(), spin_plus())) *
         cplx(lam);
    return h;
}

/// Thermal state together with its partition function.
struct GibbsState {
    DensityMatrix rho;
    double partition; ///< Z = Tr e^{-beta h}
    double log_partition;
};

inline GibbsState gibbs(const Operator &h, double beta) {
    if (!(beta > 0.0)) {
        throw ParameterError("gibbs: beta must be > 0");
    }
    const EigenSystem es = eig_hermitian(h);
    const double e0 = es.eigenvalues.front();
    std::vector<double> w(es.eigenvalues.size());
    double z_shifted = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = std::exp(-beta * (es.eigenvalues[k] - e0));
        z_shifted += w[k];
    }
    for (double &x : w) {
        x /= z_shifted;
    }
    Operator rho = es.compose(w);
    // Clean rounding asymmetry before the Hermitian check.
    rho = (rho + rho.adjoint()) * cplx(0.5);
    const double log_z = std::log(z_shifted) - beta * e0;
    return GibbsState{DensityMatrix(rho), std::exp(log_z), log_z};
}

struct EigenPopulations {
    double p_gg;
    double p_minus;
    double p_plus;
    double p_ee;
    double partition;

    [[nodiscard]] std::array<double, 4> as_array() const {
        return {p_gg, p_minus, p_plus, p_ee};
    }
    /// Probability of either entangled state.
    [[nodiscard]] double entangled() const { return p_minus + p_plus; }
};

/// Closed-form Boltzmann populations of |gg>, |->, |+>, |ee>.
inline EigenPopulations eigen_populations(const EngineParams &p) {
    p.validate();
    const std::array<double, 4> energies{-p.omega, -p.lambda, p.lambda,
                                         p.omega};
    const double e0 = std::min(-p.omega, -p.lambda);
    std::array<double, 4> w{};
    double z = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        w[k] = std::exp(-p.beta * (energies[k] - e0));
        z += w[k];
    }
    return EigenPopulations{w[0] / z, w[1] / z, w[2] / z, w[3] / z,
                            z * std::exp(-p.beta * e0)};
}

struct SpatialOccupancy {
    double p_i_minus;
    double p_o_minus;
    double p_i_plus;
    double p_o_plus;
    double p_i;
    double p_o;
};

/**
 * Coupled (i) and uncoupled (o) probabilities after the box doubles.
 *
 * The coupled and uncoupled regions have equal volume, so each internal
 * eigenstate splits by the Boltzmann weight of its coupled vs uncoupled
 * energy. Separable states have the same energy either way and split 1/2.
 */
inline SpatialOccupancy spatial_occupancy(const EngineParams &p) {
    const EigenPopulations pop = eigen_populations(p);
    const double x = p.beta * p.lambda;
    SpatialOccupancy occ{};
    occ.p_o_minus = 1.0 / (1.0 + std::exp(x));
    occ.p_i_minus = 1.0 - occ.p_o_minus;
    occ.p_o_plus = 1.0 / (1.0 + std::exp(-x));
    occ.p_i_plus = 1.0 - occ.p_o_plus;
    // Same as (p_gg + p_ee)/2 + p_- p_o^- + p_+ p_o^+, written as a
    // deviation from 1/2 so that lambda = 0 gives exactly 1/2.
    occ.p_o = 0.5 - 0.5 * (pop.p_minus - pop.p_plus) * std::tanh(0.5 * x);
    occ.p_i = 1.0 - occ.p_o;
    return occ;
}

/// Thermal internal state rho_int of the coupled pair.
inline GibbsState internal_state(const EngineParams &p) {
    return gibbs(build_hamiltonian(p, Coupling::coupled), p.beta);
}

inline DensityMatrix reduced_atom(const DensityMatrix &rho, Subsystem which) {
    return partial_trace(rho, which);
}

/// Excited population of a single atom of rho_int, closed form.
inline double atom_excited_population(const EngineParams &p) {
    const EigenPopulations pop = eigen_populations(p);
    return pop.p_ee + 0.5 * pop.entangled();
}

/// T_eff / T where T_eff = omega / ln(1/p_e - 1) for the single-atom
/// excited population p_e of rho_int.
inline double effective_temperature_ratio(const EngineParams &p) {
    p.validate();
    if (p.lambda == 0.0) {
        return 1.0;
    }
    const double pe = atom_excited_population(p);
    if (!(pe < 0.5)) {
        throw DomainError("effective temperature: excited population " +
                          std::to_string(pe) + " >= 1/2");
    }
    const double t_eff = p.omega / std::log(1.0 / pe - 1.0);
    return t_eff * p.beta;
}

} // namespace qratchet
