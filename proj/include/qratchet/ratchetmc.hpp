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
 * N-box Monte Carlo of the ratchet cycle.
 *
 * Each box holds one atom pair. The pipeline is
 *
 *   sample_ensemble        internal eigenstate + coupled/uncoupled flag
 *   collective_measurement collapse of |+-> boxes to |eg> or |ge>
 *   demon_readout          per-box (a, b) bits
 *   erasure_cost           compressed size of what the demon must erase
 *   run                    per-box work ledger, batch-mean error bars
 *
 * Randomness comes from Philox keyed by (seed, stream tag, box index), so
 * results do not depend on chunk size or thread count. In deterministic
 * mode the demon knows the collapse stream (it is regenerable from the
 * 64-bit seed) and only pays for the pre-collapse eigenstate stream.
 */

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include "qratchet/engine.hpp"
#include "qratchet/infotheory.hpp"
#include "qratchet/model.hpp"
#include "qratchet/philox.hpp"
#include "qratchet/range_coder.hpp"

namespace qratchet {

struct McConfig {
    EngineParams params;
    std::uint64_t n_boxes = 1'000'000;
    std::uint64_t seed = 42;
    DemonMode demon_mode = DemonMode::random;
    std::uint64_t chunk_size = 65'536;
    unsigned threads = 1; ///< worker cap; never changes results

    void validate() const {
        params.validate();
        if (n_boxes < 1) {
            throw ParameterError("n_boxes must be >= 1");
        }
        if (chunk_size < 1) {
            throw ParameterError("chunk_size must be >= 1");
        }
    }
};

enum class Internal : std::uint8_t { gg = 0, minus = 1, plus = 2, ee = 3 };
enum class Collapse : std::uint8_t { none = 0, eg = 1, ge = 2 };

struct BoxSample {
    Internal internal = Internal::gg;
    bool uncoupled = false;
    Collapse collapse_outcome = Collapse::none;

    [[nodiscard]] bool entangled() const {
        return internal == Internal::minus || internal == Internal::plus;
    }
};

/// Sampled boxes; `measured` flips once the collective measurement ran.
struct Ensemble {
    std::vector<BoxSample> boxes;
    bool measured = false;
};

namespace detail {

// Runs body(begin, end) over [0, n) in chunks, on up to `threads` workers.
template <typename Body>
void for_each_chunk(std::uint64_t n, std::uint64_t chunk, unsigned threads,
                    Body &&body) {
    const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(std::max(1u, threads), n_chunks));
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            const std::uint64_t begin = c * chunk;
            body(begin, std::min(n, begin + chunk));
        }
    };
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
}

struct SamplingTables {
    std::array<double, 3> cumulative; // gg, gg+minus, gg+minus+plus
    std::array<double, 4> p_uncoupled;
};

inline SamplingTables sampling_tables(const EngineParams &p) {
    const EigenPopulations pop = eigen_populations(p);
    const SpatialOccupancy occ = spatial_occupancy(p);
    return {{pop.p_gg, pop.p_gg + pop.p_minus,
             pop.p_gg + pop.p_minus + pop.p_plus},
            {0.5, occ.p_o_minus, occ.p_o_plus, 0.5}};
}

inline BoxSample draw_box(const SamplingTables &t, std::uint64_t seed,
                          std::uint64_t index) {
    const PhiloxBlock r = keyed_block(seed, StreamTag::ensemble, index);
    const double u_state = to_unit(r[0], r[1]);
    const double u_space = to_unit(r[2], r[3]);
    Internal s = Internal::ee;
    if (u_state < t.cumulative[0]) {
        s = Internal::gg;
    } else if (u_state < t.cumulative[1]) {
        s = Internal::minus;
    } else if (u_state < t.cumulative[2]) {
        s = Internal::plus;
    }
    return {s, u_space < t.p_uncoupled[static_cast<std::size_t>(s)],
            Collapse::none};
}

/// Collapse bit of box `index`: true means A ends up excited (|eg>).
inline bool collapse_to_eg(std::uint64_t seed, std::uint64_t index) {
    return (keyed_block(seed, StreamTag::collapse, index)[0] & 1u) != 0;
}

} // namespace detail

/// Draws N i.i.d. boxes: eigenstate from the Gibbs populations, then the
/// coupled/uncoupled flag from that eigenstate's occupancy.
inline Ensemble sample_ensemble(const McConfig &cfg) {
    cfg.validate();
    const detail::SamplingTables tables = detail::sampling_tables(cfg.params);
    Ensemble ens;
    ens.boxes.resize(cfg.n_boxes);
    detail::for_each_chunk(cfg.n_boxes, cfg.chunk_size, cfg.threads,
                           [&](std::uint64_t begin, std::uint64_t end) {
                               for (std::uint64_t i = begin; i < end; ++i) {
                                   ens.boxes[i] =
                                       detail::draw_box(tables, cfg.seed, i);
                               }
                           });
    return ens;
}

struct MeasurementOutcome {
    std::uint64_t m = 0;            ///< excited A atoms
    double energy_ledger = 0.0;     ///< work put in by the probe
    std::uint64_t coupled_minus = 0;
    std::uint64_t coupled_plus = 0;
};

/**
 * Collective QND measurement of the A atoms' total excitation.
 *
 * Every entangled box collapses to |eg> or |ge> with probability 1/2 each.
 * Coupled |-> boxes cost +lambda, coupled |+> boxes return lambda and
 * uncoupled boxes cost nothing. Separable boxes are left alone. A second
 * call finds nothing to collapse.
 */
inline MeasurementOutcome collective_measurement(Ensemble &ens,
                                                 const McConfig &cfg) {
    MeasurementOutcome out;
    for (std::uint64_t i = 0; i < ens.boxes.size(); ++i) {
        BoxSample &b = ens.boxes[i];
        if (!ens.measured && b.entangled()) {
            b.collapse_outcome = detail::collapse_to_eg(cfg.seed, i)
                                     ? Collapse::eg
                                     : Collapse::ge;
            if (!b.uncoupled) {
                if (b.internal == Internal::minus) {
                    ++out.coupled_minus;
                } else {
                    ++out.coupled_plus;
                }
            }
        }
        const bool a_excited = b.internal == Internal::ee ||
                               b.collapse_outcome == Collapse::eg;
        out.m += a_excited ? 1 : 0;
    }
    ens.measured = true;
    out.energy_ledger = cfg.params.lambda *
                        (static_cast<double>(out.coupled_minus) -
                         static_cast<double>(out.coupled_plus));
    return out;
}

/// Joint demon symbol 2a + b in basis order gg, ge, eg, ee.
inline std::uint8_t joint_symbol(const BoxSample &b) {
    switch (b.internal) {
    case Internal::gg:
        return 0;
    case Internal::ee:
        return 3;
    default:
        break;
    }
    if (b.collapse_outcome == Collapse::none) {
        throw ContractError("demon readout of an uncollapsed entangled box");
    }
    return b.collapse_outcome == Collapse::eg ? 2 : 1;
}

struct OutcomeRecord {
    std::vector<bool> a_bits;
    std::vector<bool> b_bits;
    std::uint64_t m = 0;

    [[nodiscard]] std::size_t size() const { return a_bits.size(); }
    [[nodiscard]] std::uint8_t symbol(std::size_t i) const {
        return static_cast<std::uint8_t>((a_bits[i] ? 2 : 0) +
                                         (b_bits[i] ? 1 : 0));
    }
    [[nodiscard]] std::vector<std::uint8_t> symbols() const {
        std::vector<std::uint8_t> s(size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = symbol(i);
        }
        return s;
    }
};

/// The demon reads both atoms of every box after the collapse.
inline OutcomeRecord demon_readout(const Ensemble &ens) {
    if (!ens.measured) {
        throw ContractError("demon_readout before collective measurement");
    }
    OutcomeRecord rec;
    rec.a_bits.resize(ens.boxes.size());
    rec.b_bits.resize(ens.boxes.size());
    for (std::size_t i = 0; i < ens.boxes.size(); ++i) {
        const std::uint8_t s = joint_symbol(ens.boxes[i]);
        rec.a_bits[i] = (s & 2u) != 0;
        rec.b_bits[i] = (s & 1u) != 0;
        rec.m += rec.a_bits[i] ? 1 : 0;
    }
    return rec;
}

/// Model of the demon's joint record: (p_gg, q/2, q/2, p_ee).
inline std::array<double, 4> joint_record_model(const EngineParams &p) {
    const EigenPopulations pop = eigen_populations(p);
    const double half = 0.5 * pop.entangled();
    return {pop.p_gg, half, half, pop.p_ee};
}

inline std::array<double, 4> internal_state_model(const EngineParams &p) {
    return eigen_populations(p).as_array();
}

inline constexpr double kSeedBits = 64.0;

struct ErasureCost {
    double bits = 0.0;       ///< total bits to erase, seed included
    double coded_bits = 0.0; ///< range coder output
    double ideal_bits = 0.0; ///< sum of -log2 q(s) for the coded stream
    double seed_bits = 0.0;

    /// Achievable minus ideal.
    [[nodiscard]] double overhead_bits() const {
        return coded_bits - ideal_bits;
    }
};

inline std::vector<std::uint8_t> internal_symbols(const Ensemble &ens) {
    std::vector<std::uint8_t> s(ens.boxes.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = static_cast<std::uint8_t>(ens.boxes[i].internal);
    }
    return s;
}

/**
 * Bits the demon must erase.
 *
 * Random mode codes the joint record under (p_gg, q/2, q/2, p_ee).
 * Deterministic mode regenerates the collapse bits from the seed, charges
 * 64 bits for it and codes the pre-collapse eigenstate stream under
 * (p_gg, p_-, p_+, p_ee).
 */
inline ErasureCost erasure_cost(const OutcomeRecord &record,
                                const Ensemble &ens, const McConfig &cfg) {
    if (record.size() != ens.boxes.size()) {
        throw ContractError("erasure_cost: record and ensemble sizes differ");
    }
    ErasureCost cost;
    if (cfg.demon_mode == DemonMode::random) {
        const FrequencyModel model(joint_record_model(cfg.params));
        const std::vector<std::uint8_t> symbols = record.symbols();
        const EncodeResult enc = arithmetic_encode(symbols, model);
        cost.coded_bits = enc.bits();
        cost.ideal_bits = enc.ideal_bits;
    } else {
        const FrequencyModel model(internal_state_model(cfg.params));
        const std::vector<std::uint8_t> symbols = internal_symbols(ens);
        const EncodeResult enc = arithmetic_encode(symbols, model);
        cost.coded_bits = enc.bits();
        cost.ideal_bits = enc.ideal_bits;
        cost.seed_bits = kSeedBits;
    }
    cost.bits = cost.coded_bits + cost.seed_bits;
    return cost;
}

struct McReport {
    DemonMode mode = DemonMode::random;
    std::uint64_t n_boxes = 0;
    std::uint64_t seed = 0;
    double w_net_mean = 0.0;   ///< energy per box
    double w_net_stderr = 0.0;
    double ratchet_per_box = 0.0;
    double heat_credit_per_box = 0.0; ///< T S(rho_int)
    double erasure_work_per_box = 0.0;
    double erasure_bits_per_box = 0.0;
    double ideal_erasure_bits_per_box = 0.0;
    double coder_overhead_bits = 0.0;
    double probe_bits_per_box = 0.0;          ///< log2(2 pi e sigma) / 2N
    double probe_bits_standard_per_box = 0.0; ///< log2(2 pi e sigma^2) / 2N
    double probe_work_per_box = 0.0;          ///< collapse ledger / N
    double joint_entropy_empirical = 0.0;     ///< nats, plug-in
    double internal_entropy_empirical = 0.0;  ///< nats, plug-in
    double delta_empirical = 0.0;             ///< nats
    std::uint64_t m = 0;
    std::array<std::uint64_t, 4> internal_counts{};
    std::array<std::uint64_t, 4> joint_counts{};
    std::uint64_t uncoupled_minus = 0;
    std::uint64_t uncoupled_plus = 0;
    RatchetReport analytic{};
};

inline constexpr std::uint64_t kBatchCount = 64;

namespace detail {

inline double plugin_entropy(std::span<const std::uint64_t> counts) {
    std::uint64_t n = 0;
    for (auto c : counts) {
        n += c;
    }
    if (n == 0) {
        return 0.0;
    }
    double h = 0.0;
    for (auto c : counts) {
        h -= xlogx(static_cast<double>(c) / static_cast<double>(n));
    }
    return h;
}

} // namespace detail

struct McRun {
    McReport report;
    OutcomeRecord record;
};

/**
 * Full cycle over N boxes. Per box,
 *
 *   w = ratchet + T S(rho_int) - T ln2 * (erased bits)
 *
 * where ratchet is +lambda for an uncoupled |->, -lambda for an uncoupled
 * |+> and 0 otherwise. The mean uses the coder's actual output. The error
 * bar comes from 64 fixed index-range batches, each charged its ideal code
 * length.
 */
inline McRun run_with_record(const McConfig &cfg) {
    cfg.validate();
    const EngineParams &p = cfg.params;
    const double t = p.temperature();

    Ensemble ens = sample_ensemble(cfg);
    const MeasurementOutcome meas = collective_measurement(ens, cfg);
    OutcomeRecord record = demon_readout(ens);
    const ErasureCost erase = erasure_cost(record, ens, cfg);

    McReport rep;
    rep.mode = cfg.demon_mode;
    rep.n_boxes = cfg.n_boxes;
    rep.seed = cfg.seed;
    rep.analytic = ratchet_cycle(p, cfg.demon_mode);
    rep.m = meas.m;

    const FrequencyModel model(cfg.demon_mode == DemonMode::random
                                   ? joint_record_model(p)
                                   : internal_state_model(p));
    const double nf = static_cast<double>(cfg.n_boxes);
    const double heat_credit = t * rep.analytic.s_int;

    const std::uint64_t batches = std::min(kBatchCount, cfg.n_boxes);
    std::vector<double> batch_w(batches);
    for (std::uint64_t k = 0; k < batches; ++k) {
        const std::uint64_t begin = k * cfg.n_boxes / batches;
        const std::uint64_t end = (k + 1) * cfg.n_boxes / batches;
        std::array<std::uint64_t, 4> coded{};
        std::int64_t ratchet_units = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            const BoxSample &b = ens.boxes[i];
            const auto internal = static_cast<std::size_t>(b.internal);
            const std::uint8_t joint = record.symbol(i);
            ++rep.internal_counts[internal];
            ++rep.joint_counts[joint];
            if (b.uncoupled && b.internal == Internal::minus) {
                ++ratchet_units;
                ++rep.uncoupled_minus;
            } else if (b.uncoupled && b.internal == Internal::plus) {
                --ratchet_units;
                ++rep.uncoupled_plus;
            }
            ++coded[cfg.demon_mode == DemonMode::random ? joint : internal];
        }
        double bits = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            if (coded[s] != 0) {
                bits += static_cast<double>(coded[s]) * model.information_bits(s);
            }
        }
        const double n_batch = static_cast<double>(end - begin);
        batch_w[k] = (p.lambda * static_cast<double>(ratchet_units) -
                      t * std::numbers::ln2 * bits) /
                         n_batch +
                     heat_credit;
    }

    const double ratchet_total =
        p.lambda * (static_cast<double>(rep.uncoupled_minus) -
                    static_cast<double>(rep.uncoupled_plus));
    rep.ratchet_per_box = ratchet_total / nf;
    rep.heat_credit_per_box = heat_credit;
    rep.erasure_bits_per_box = erase.bits / nf;
    rep.ideal_erasure_bits_per_box = (erase.ideal_bits + erase.seed_bits) / nf;
    rep.coder_overhead_bits = erase.overhead_bits();
    rep.erasure_work_per_box = t * std::numbers::ln2 * rep.erasure_bits_per_box;
    rep.w_net_mean =
        rep.ratchet_per_box + heat_credit - rep.erasure_work_per_box;

    if (batches >= 2) {
        double mean = 0.0;
        for (double w : batch_w) {
            mean += w;
        }
        mean /= static_cast<double>(batches);
        double ss = 0.0;
        for (double w : batch_w) {
            ss += (w - mean) * (w - mean);
        }
        const double bf = static_cast<double>(batches);
        rep.w_net_stderr = std::sqrt(ss / (bf - 1.0) / bf);
    }

    rep.probe_work_per_box = meas.energy_ledger / nf;
    if (cfg.n_boxes >= 2) {
        const ProbeInformation probe =
            probe_information(cfg.n_boxes, atom_excited_population(p));
        rep.probe_bits_per_box = probe.sigma_form_bits;
        rep.probe_bits_standard_per_box = probe.variance_form_bits;
    }
    rep.joint_entropy_empirical = detail::plugin_entropy(rep.joint_counts);
    rep.internal_entropy_empirical = detail::plugin_entropy(rep.internal_counts);
    rep.delta_empirical =
        rep.joint_entropy_empirical - rep.internal_entropy_empirical;
    return {rep, std::move(record)};
}

inline McReport run(const McConfig &cfg) { return run_with_record(cfg).report; }

/// Excited-A count of one ensemble, without storing the boxes.
inline std::uint64_t sample_probe_count(const McConfig &cfg) {
    cfg.validate();
    const detail::SamplingTables tables = detail::sampling_tables(cfg.params);
    std::uint64_t m = 0;
    for (std::uint64_t i = 0; i < cfg.n_boxes; ++i) {
        const BoxSample b = detail::draw_box(tables, cfg.seed, i);
        if (b.internal == Internal::ee ||
            (b.entangled() && detail::collapse_to_eg(cfg.seed, i))) {
            ++m;
        }
    }
    return m;
}

/// A run violates the second law when its mean work is significantly
/// positive (more than four standard errors above zero).
inline SecondLawVerdict second_law_check(const McReport &r) {
    const bool violated = r.w_net_mean - 4.0 * r.w_net_stderr > 0.0;
    return {violated, violated && r.mode == DemonMode::deterministic};
}

} // namespace qratchet
