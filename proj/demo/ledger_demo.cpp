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

// Prints the analytic work ledger at one point and a small Monte Carlo run
// next to it.

#include <cstdio>

#include "qratchet/qratchet.hpp"

int main() {
    using namespace qratchet;

    EngineParams p;
    p.lambda = 0.5;

    const EigenPopulations pop = eigen_populations(p);
    std::printf("populations  gg=%.6f  -=%.6f  +=%.6f  ee=%.6f\n", pop.p_gg,
                pop.p_minus, pop.p_plus, pop.p_ee);

    for (DemonMode mode : {DemonMode::random, DemonMode::deterministic}) {
        const RatchetReport r = ratchet_cycle(p, mode);
        std::printf("%-13s gain=%.6f  delta=%.6f  w_net=%+.6f\n",
                    to_string(mode).data(), r.ratchet_gain, r.delta, r.w_net);
    }

    McConfig cfg;
    cfg.params = p;
    cfg.n_boxes = 100'000;
    const McReport mc = run(cfg);
    std::printf("mc (N=%llu)    w_net=%+.6f +- %.6f\n",
                static_cast<unsigned long long>(mc.n_boxes), mc.w_net_mean,
                mc.w_net_stderr);
    return 0;
}
