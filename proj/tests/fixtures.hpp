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

#pragma once

// Random inputs shared by the test programs.

#include "phasefe/linalg.hpp"
#include "phasefe/states.hpp"

namespace fixtures {

/// G G^dagger / tr for a complex Gaussian d x d matrix G (full rank almost surely).
inline phasefe::ComplexMatrix random_density_matrix(int n, phasefe::Rng &rng, std::size_t rank = 0) {
    std::size_t d = std::size_t{1} << n;
    if (rank == 0) rank = d;
    phasefe::ComplexMatrix g(d);
    for (std::size_t i = 0; i < d; i++)
        for (std::size_t j = 0; j < rank; j++)
            g(i, j) = {phasefe::standard_normal(rng), phasefe::standard_normal(rng)};
    phasefe::ComplexMatrix r = g * g.adjoint();
    double t = r.trace().real();
    for (std::size_t i = 0; i < d; i++)
        for (std::size_t j = 0; j < d; j++) r(i, j) /= t;
    // Exact Hermitian symmetry.
    return (r + r.adjoint()) * phasefe::cplx(0.5, 0.0);
}

inline phasefe::DensityState random_density(int n, phasefe::Rng &rng, std::size_t rank = 0) {
    return phasefe::DensityState::dense(n, random_density_matrix(n, rng, rank));
}

}  // namespace fixtures
