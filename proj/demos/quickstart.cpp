// Copyright 2026 The phasefe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Estimate the fidelity of a noisy hypergraph state three ways.

#include <cstdio>

#include "phasefe/estimation.hpp"
#include "phasefe/magic.hpp"

using namespace phasefe;

int main() {
    int n = 5;
    auto hg = hypergraph_state(n, complete3_edges(n));
    DensityState rho = depolarize(hg.state, 0.1);
    std::printf("exact fidelity   %.6f\n", exact_fidelity(rho, hg.state));

    CoeffVector c = pauli_coefficients(hg.state);
    auto dfe = exact_sampler(c, 0.5);
    auto fofe = uniform_x_sampler(n);
    auto qwc = build_qwc_partition(c);
    FofeInput in(rho);

    std::size_t shots = 20000;
    auto show = [](const char *name, const EstimateReport &r) {
        std::printf("%-6s mean %.4f +- %.4f  variance %.3f\n", name, r.mean, r.std_error, r.variance);
    };
    show("dfe", summarize(shot_values(run_shots(shots, 2, 1, [&](Rng &g) { return dfe_shot(rho, *dfe, g); }))));
    show("fofe", summarize(shot_values(
                     run_shots(shots, 2, 2, [&](Rng &g) { return fofe_shot(in, *fofe, hg.phase, true, g); }))));
    show("nldfe", summarize(shot_values(run_shots(shots, 2, 3, [&](Rng &g) { return nldfe_shot(rho, qwc, g); }))));
    std::printf("l1^2 %.3f  W^2 %.3f\n", std::pow(norms(hg.state).l1, 2), qwc.total_weight * qwc.total_weight);
    return 0;
}
