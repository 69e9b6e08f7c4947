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

#include <complex>
#include <cmath>
#include <vector>

#include "phasefe/core.hpp"

/// @file state_vector.hpp
/// @brief Dense pure state on n qubits.

namespace phasefe {

using cplx = std::complex<double>;

/// Dense 2^n amplitude vector. Qubit 0 is the most significant index bit.
class StateVector {
  public:
    StateVector() = default;

    /// Computational basis state |index>.
    static StateVector basis(int n, Word index) {
        StateVector s(n);
        s.amps_[index] = 1.0;
        return s;
    }

    /// Wraps amplitudes, checking the norm. With `normalize` the vector is rescaled instead.
    static StateVector from_amplitudes(int n, std::vector<cplx> amps, bool normalize = false) {
        if (n < 0 || n > kMaxWordQubits || amps.size() != (std::size_t{1} << n)) {
            throw DimensionError("StateVector: amplitude count must be 2^n");
        }
        StateVector s;
        s.n_ = n;
        s.amps_ = std::move(amps);
        double nrm = s.norm_squared();
        if (normalize) {
            if (!(nrm > 0.0) || !std::isfinite(nrm)) {
                throw DomainError("StateVector: cannot normalize a zero vector");
            }
            double f = 1.0 / std::sqrt(nrm);
            for (auto &a : s.amps_) {
                a *= f;
            }
        } else if (std::abs(nrm - 1.0) > 1e-9) {
            throw DomainError("StateVector: amplitudes not normalized");
        }
        return s;
    }

    int n() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx> &amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const {
        double t = 0.0;
        for (const auto &a : amps_) {
            t += std::norm(a);
        }
        return t;
    }

    /// Raw mutable access for simulators inside the library.
    std::vector<cplx> &mutable_amplitudes() { return amps_; }

  private:
    explicit StateVector(int n) : n_(n), amps_(std::size_t{1} << n, cplx(0.0, 0.0)) {}

    int n_ = 0;
    std::vector<cplx> amps_;
};

inline cplx inner(const StateVector &a, const StateVector &b) {
    if (a.n() != b.n()) {
        throw DimensionError("inner: qubit counts differ");
    }
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.dim(); i++) {
        t += std::conj(a[i]) * b[i];
    }
    return t;
}

}  // namespace phasefe
