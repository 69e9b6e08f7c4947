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

#include <array>
#include <cmath>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/state_vector.hpp"

/// @file mps.hpp
/// @brief Real matrix product states with square chi x chi site tensors.

namespace phasefe {

inline constexpr int kMpsConvertQubitCap = 12;
inline constexpr int kMpsConvertChiCap = 8;

/// amplitude(x) = <L| G1(x1) ... Gn(xn) |R>, normalized at construction.
class RealMPS {
  public:
    using Matrix = std::vector<double>;  ///< chi x chi, row-major.

    RealMPS() = default;

    /// sites[i][x] are chi x chi matrices. `left` is rescaled so the state has unit norm.
    RealMPS(int n, int chi, std::vector<std::array<Matrix, 2>> sites, std::vector<double> left,
            std::vector<double> right)
        : n_(n), chi_(chi), sites_(std::move(sites)), left_(std::move(left)), right_(std::move(right)) {
        std::size_t c = static_cast<std::size_t>(chi);
        if (n < 1 || chi < 1 || sites_.size() != static_cast<std::size_t>(n) || left_.size() != c ||
            right_.size() != c) {
            throw DimensionError("RealMPS: inconsistent shapes");
        }
        for (const auto &s : sites_) {
            for (const auto &m : s) {
                if (m.size() != c * c) {
                    throw DimensionError("RealMPS: site tensor must be chi x chi");
                }
            }
        }
        double nrm = norm_squared();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            throw NumericalHealthError("RealMPS: zero or non-finite norm");
        }
        double f = 1.0 / std::sqrt(nrm);
        for (auto &v : left_) {
            v *= f;
        }
    }

    int n() const { return n_; }
    int chi() const { return chi_; }
    const Matrix &site(int i, int x) const { return sites_[i][x]; }
    const std::vector<double> &left() const { return left_; }
    const std::vector<double> &right() const { return right_; }

    /// Amplitude of basis string x (qubit 0 is the MSB).
    double amplitude(Word x) const {
        std::vector<double> v = left_, w(chi_);
        for (int i = 0; i < n_; i++) {
            const Matrix &g = sites_[i][(x >> (n_ - 1 - i)) & 1];
            std::fill(w.begin(), w.end(), 0.0);
            for (int r = 0; r < chi_; r++) {
                for (int c = 0; c < chi_; c++) {
                    w[c] += v[r] * g[r * chi_ + c];
                }
            }
            std::swap(v, w);
        }
        double t = 0.0;
        for (int r = 0; r < chi_; r++) {
            t += v[r] * right_[r];
        }
        return t;
    }

    /// Transfer matrix H = sum_x G(x) (x) G(x) of site i, chi^2 x chi^2.
    Matrix transfer(int i) const {
        std::size_t c = chi_, c2 = c * c;
        Matrix h(c2 * c2, 0.0);
        for (int x = 0; x < 2; x++) {
            const Matrix &g = sites_[i][x];
            for (std::size_t p = 0; p < c; p++)
                for (std::size_t q = 0; q < c; q++)
                    for (std::size_t r = 0; r < c; r++)
                        for (std::size_t s = 0; s < c; s++)
                            h[(p * c + q) * c2 + r * c + s] += g[p * c + r] * g[q * c + s];
        }
        return h;
    }

  private:
    double norm_squared() const {
        std::size_t c = chi_, c2 = c * c;
        std::vector<double> e(c2), f(c2);
        for (std::size_t p = 0; p < c; p++)
            for (std::size_t q = 0; q < c; q++)
                e[p * c + q] = left_[p] * left_[q];
        for (int i = 0; i < n_; i++) {
            Matrix h = transfer(i);
            std::fill(f.begin(), f.end(), 0.0);
            for (std::size_t a = 0; a < c2; a++)
                for (std::size_t b = 0; b < c2; b++)
                    f[b] += e[a] * h[a * c2 + b];
            std::swap(e, f);
        }
        double t = 0.0;
        for (std::size_t p = 0; p < c; p++)
            for (std::size_t q = 0; q < c; q++)
                t += e[p * c + q] * right_[p] * right_[q];
        return t;
    }

    int n_ = 0, chi_ = 0;
    std::vector<std::array<Matrix, 2>> sites_;
    std::vector<double> left_, right_;
};

/// Gaussian site tensors and boundary vectors.
inline RealMPS random_real_mps(int n, int chi, Rng &rng) {
    if (n < 1 || chi < 1) {
        throw DomainError("random_real_mps: need n, chi >= 1");
    }
    std::size_t c = chi;
    std::vector<std::array<RealMPS::Matrix, 2>> sites(n);
    for (auto &s : sites) {
        for (auto &m : s) {
            m.resize(c * c);
            for (auto &v : m) {
                v = standard_normal(rng);
            }
        }
    }
    std::vector<double> l(c), r(c);
    for (auto &v : l) v = standard_normal(rng);
    for (auto &v : r) v = standard_normal(rng);
    return RealMPS(n, chi, std::move(sites), std::move(l), std::move(r));
}

/// Left-to-right contraction over all prefixes, then normalization.
inline StateVector mps_to_statevector(const RealMPS &m) {
    if (m.n() > kMpsConvertQubitCap || m.chi() > kMpsConvertChiCap) {
        throw CapExceeded("mps_to_statevector: conversion limited to n <= 12, chi <= 8",
                          std::ldexp(1.0, m.n()) * m.chi() * m.chi());
    }
    std::size_t c = m.chi();
    std::vector<double> cur = m.left();  // prefix-major: [prefix][bond]
    for (int i = 0; i < m.n(); i++) {
        std::size_t np = cur.size() / c;
        std::vector<double> next(2 * np * c, 0.0);
        for (std::size_t pre = 0; pre < np; pre++) {
            for (int x = 0; x < 2; x++) {
                const auto &g = m.site(i, x);
                double *out = &next[(2 * pre + x) * c];
                const double *in = &cur[pre * c];
                for (std::size_t r = 0; r < c; r++)
                    for (std::size_t s = 0; s < c; s++)
                        out[s] += in[r] * g[r * c + s];
            }
        }
        cur.swap(next);
    }
    std::size_t d = cur.size() / c;
    std::vector<cplx> amps(d);
    for (std::size_t x = 0; x < d; x++) {
        double t = 0.0;
        for (std::size_t r = 0; r < c; r++) {
            t += cur[x * c + r] * m.right()[r];
        }
        amps[x] = t;
    }
    return StateVector::from_amplitudes(m.n(), std::move(amps), true);
}

}  // namespace phasefe
