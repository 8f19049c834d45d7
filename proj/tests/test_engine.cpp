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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qratchet/engine.hpp"
#include "support.hpp"

using namespace qratchet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing_rng::Rng;

namespace {

EngineParams at(double beta, double omega, double lambda) {
    EngineParams p;
    p.beta = beta;
    p.omega = omega;
    p.lambda = lambda;
    return p;
}

} // namespace

TEST_CASE("adiabatic map carries populations by rank") {
    const Operator h1 = Operator::diagonal({-1.0, 1.0});
    const Operator h2 = Operator::diagonal({2.0, -2.0}); // levels swap index
    const DensityMatrix rho(Operator::diagonal({0.8, 0.2}));
    const DensityMatrix out = adiabatic_map(rho, h1, h2);
    CHECK_THAT(out.op()(1, 1).real(), WithinAbs(0.8, 1e-15));
    CHECK_THAT(out.op()(0, 0).real(), WithinAbs(0.2, 1e-15));

    const DensityMatrix coherent(Operator{0.5, 0.5, 0.5, 0.5});
    CHECK_THROWS_AS(adiabatic_map(coherent, h1, h2), ContractError);
    CHECK_THROWS_AS(adiabatic_map(rho, Operator::identity(3), h2), DimensionError);
}

TEST_CASE("generic cycle on a two-level system") {
    const GenericCycleReport r = generic_cycle(Operator::diagonal({-1.0, 1.0}),
                                               Operator::diagonal({-2.0, 2.0}), 1.0);
    CHECK_THAT(r.w_net, WithinAbs(oracle::two_level::w_net, 1e-14));
    CHECK_THAT(r.w_net_closed_form, WithinAbs(oracle::two_level::w_net, 1e-14));
    CHECK_THAT(r.s2 - r.s1, WithinAbs(oracle::two_level::entropy_term, 1e-14));
    CHECK_THAT(r.w_net - (r.s2 - r.s1),
               WithinAbs(oracle::two_level::first_term, 1e-14));
    CHECK_THAT(r.w_net, WithinAbs(oracle::diagonal_cycle_w_net({-1, 1}, {-2, 2}, 1.0),
                                  1e-14));
    const GibbsState g = gibbs(Operator::diagonal({-1.0, 1.0}), 1.0);
    CHECK_THAT(g.rho.op()(0, 0).real(), WithinAbs(oracle::two_level::p_low, 1e-15));
}

TEST_CASE("generic cycle with equal Hamiltonians does no work") {
    Rng rng(41);
    for (int k = 0; k < 50; ++k) {
        const Operator h = testing_rng::random_hermitian(rng, 2 + rng.index(5));
        const GenericCycleReport r = generic_cycle(h, h, rng.uniform(0.1, 10.0));
        CHECK_THAT(r.w_net, WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("Klein inequality and step-sum closure on random pairs") {
    Rng rng(43);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 2 + rng.index(5);
        const Operator h1 = testing_rng::random_hermitian(rng, n);
        const Operator h2 = testing_rng::random_hermitian(rng, n);
        const double beta = rng.uniform(0.1, 10.0);
        const GenericCycleReport r = generic_cycle(h1, h2, beta);
        INFO("trial " << k << " dim " << n << " beta " << beta);
        CHECK(r.w_net <= 1e-10);
        CHECK(std::abs(r.w_net - r.w_net_closed_form) <= 1e-10);
    }
}

TEST_CASE("diagonal generic cycles match the scalar oracle") {
    Rng rng(47);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 2 + rng.index(5);
        std::vector<double> e1(n), e2(n);
        for (auto &x : e1) {
            x = rng.normal();
        }
        std::sort(e1.begin(), e1.end());
        for (auto &x : e2) {
            x = rng.normal();
        }
        std::sort(e2.begin(), e2.end());
        const double beta = rng.uniform(0.1, 10.0);
        const GenericCycleReport r =
            generic_cycle(Operator::diagonal(e1), Operator::diagonal(e2), beta);
        CHECK_THAT(r.w_net, WithinAbs(oracle::diagonal_cycle_w_net(e1, e2, beta),
                                      1e-12));
    }
}

TEST_CASE("local cycle") {
    const EngineParams p = at(1.0, 1.0, 0.5);
    const Operator h = build_hamiltonian(p, Coupling::coupled);
    CHECK_THAT(local_cycle(h, h, 1.0, MeasurementBasis::z()),
               WithinAbs(-oracle::ref::delta_z, 1e-12));

    const Operator hd = kron(Operator::diagonal({-0.3, 0.3}), Operator::identity(2)) +
                        kron(Operator::identity(2), Operator::diagonal({-0.7, 0.7}));
    CHECK_THAT(local_cycle(hd, hd, 2.0, MeasurementBasis::z()), WithinAbs(0.0, 1e-12));

    Rng rng(53);
    for (int k = 0; k < 200; ++k) {
        const Operator h1 = testing_rng::random_hermitian(rng, 4);
        const Operator h2 = testing_rng::random_hermitian(rng, 4);
        const double beta = rng.uniform(0.1, 10.0);
        const MeasurementBasis b{rng.uniform(0.0, std::numbers::pi),
                                 rng.uniform(0.0, 2.0 * std::numbers::pi)};
        const double local = local_cycle(h1, h2, beta, b);
        const GenericCycleReport g = generic_cycle(h1, h2, beta);
        const double delta = excess_entropy(gibbs(h1, beta).rho, b).delta;
        CHECK(local <= g.w_net + 1e-10);
        CHECK_THAT(local, WithinAbs(g.w_net - delta / beta, 1e-10));
    }
    CHECK_THROWS_AS(local_cycle(Operator(2), Operator(2), 1.0, MeasurementBasis::z()),
                    DimensionError);
}

TEST_CASE("ratchet ledger at the reference point") {
    const EngineParams p = at(1.0, 1.0, 0.5);
    const RatchetReport r = ratchet_cycle(p, DemonMode::random);
    CHECK_THAT(r.ratchet_gain, WithinAbs(oracle::ref::gain, 1e-15));
    CHECK_THAT(r.delta, WithinAbs(oracle::ref::delta_z, 1e-12));
    CHECK_THAT(r.w_net, WithinAbs(oracle::ref::w_net_random, 1e-12));
    CHECK_THAT(r.w_probe, WithinAbs(oracle::ref::w_probe, 1e-15));
    CHECK_THAT(r.q_in, WithinAbs(oracle::ref::s_int, 1e-12));
    CHECK_THAT(r.q_out, WithinAbs(oracle::ref::joint_entropy, 1e-12));
    CHECK_THAT(r.t_eff_ratio, WithinAbs(oracle::ref::t_eff_ratio, 1e-13));
    CHECK_FALSE(second_law_check(r).violated);

    const RatchetReport d = ratchet_cycle(p, DemonMode::deterministic);
    CHECK(d.delta == 0.0);
    CHECK_THAT(d.w_net, WithinAbs(oracle::ref::gain, 1e-15));
    CHECK(second_law_check(d).violated);
    CHECK(second_law_check(d).expected);

    const RatchetReport m = ratchet_cycle(p, DemonMode::random,
                                          DeltaSource::discord_minimum);
    CHECK(m.delta <= r.delta);
    CHECK(m.w_net <= 0.0);
}

TEST_CASE("ratchet ledger vanishes without coupling") {
    for (DemonMode mode : {DemonMode::random, DemonMode::deterministic}) {
        const RatchetReport r = ratchet_cycle(at(2.0, 1.0, 0.0), mode);
        CHECK(r.ratchet_gain == 0.0);
        CHECK(r.delta == 0.0);
        CHECK(r.w_net == 0.0);
        CHECK(r.w_probe == 0.0);
        CHECK(r.du == 0.0);
        CHECK(r.q_net() == 0.0);
        CHECK_FALSE(second_law_check(r).violated);
    }
}

TEST_CASE("ratchet gain identity and energy bookkeeping on a grid") {
    for (double beta : {0.1, 0.3, 1.0, 2.5, 10.0}) {
        for (double lambda : {0.01, 0.1, 0.5, 1.0, 2.0}) {
            const EngineParams p = at(beta, 1.0, lambda);
            const RatchetReport r = ratchet_cycle(p, DemonMode::random);
            CHECK_THAT(r.ratchet_gain,
                       WithinAbs(oracle::gain_tanh(beta, 1.0, lambda), 1e-12));
            CHECK_THAT(r.du, WithinAbs(r.w_net + r.q_net(), 1e-12));
            CHECK(r.w_net <= 1e-12);
            const RatchetReport d = ratchet_cycle(p, DemonMode::deterministic);
            CHECK_THAT(d.du, WithinAbs(d.w_net + d.q_net(), 1e-12));
            CHECK(d.w_net > 0.0);
        }
    }
}

TEST_CASE("random-mode work vanishes quadratically in lambda") {
    for (double beta : {0.5, 1.0, 4.0}) {
        std::vector<double> c;
        for (double lambda : {1e-2, 1e-3, 1e-4}) {
            const double w = ratchet_cycle(at(beta, 1.0, lambda), DemonMode::random).w_net;
            CHECK(w < 0.0);
            c.push_back(std::abs(w) / (lambda * lambda));
        }
        const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
        INFO("beta " << beta << " C range " << *lo << " .. " << *hi);
        CHECK(*hi <= 2.0 * *lo);
    }
}
