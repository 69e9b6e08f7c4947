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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/state_vector.hpp"

/// @file pauli.hpp
/// @brief Binary symplectic Pauli points, their action on states, F2 rank and the Walsh-Hadamard transform.

namespace phasefe {

/// a = (ax, az) in F2^{2n}, indexing T_a = (x)_i i^{ax_i az_i} X^{ax_i} Z^{az_i}.
struct PauliPoint {
    int n = 0;
    Word ax = 0;
    Word az = 0;

    PauliPoint() = default;
    PauliPoint(int n_, Word ax_, Word az_) : n(n_), ax(ax_), az(az_) {
        if (n_ < 0 || n_ > kMaxWordQubits || (ax_ & ~low_mask(n_)) || (az_ & ~low_mask(n_))) {
            throw DimensionError("PauliPoint: bits beyond n");
        }
    }

    bool is_identity() const { return ax == 0 && az == 0; }

    /// Flat index (ax << n) | az used by CoeffVector.
    std::size_t index() const { return (static_cast<std::size_t>(ax) << n) | az; }

    static PauliPoint from_index(int n, std::size_t idx) {
        return PauliPoint(n, static_cast<Word>(idx >> n), static_cast<Word>(idx & low_mask(n)));
    }

    /// Parses a string such as "XIZY" (qubit 0 first).
    static PauliPoint parse(const std::string &s) {
        int n = static_cast<int>(s.size());
        Word x = 0, z = 0;
        for (int q = 0; q < n; q++) {
            Word b = qubit_bit(n, q);
            switch (s[q]) {
                case 'I': break;
                case 'X': x |= b; break;
                case 'Z': z |= b; break;
                case 'Y': x |= b; z |= b; break;
                default: throw DomainError("PauliPoint::parse: bad character");
            }
        }
        return PauliPoint(n, x, z);
    }

    std::string str() const {
        std::string s(n, 'I');
        for (int q = 0; q < n; q++) {
            Word b = qubit_bit(n, q);
            bool x = ax & b, z = az & b;
            s[q] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        }
        return s;
    }

    bool operator==(const PauliPoint &o) const = default;
};

/// 0 iff T_a and T_b commute.
inline int symplectic_product(const PauliPoint &a, const PauliPoint &b) {
    if (a.n != b.n) {
        throw DimensionError("symplectic_product: qubit counts differ");
    }
    return parity((a.ax & b.az) ^ (a.az & b.ax));
}

/// i^k for integer k.
inline cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// T_a |psi>. <y|T_a|x> = delta(y, x^ax) i^{|ax&az|} (-1)^{az.x}.
inline StateVector apply_pauli(const PauliPoint &a, const StateVector &psi) {
    if (a.n != psi.n()) {
        throw DimensionError("apply_pauli: qubit counts differ");
    }
    std::vector<cplx> out(psi.dim());
    cplx g = i_pow(popcount(a.ax & a.az));
    for (Word x = 0; x < psi.dim(); x++) {
        out[x ^ a.ax] = (parity(a.az & x) ? -g : g) * psi[x];
    }
    return StateVector::from_amplitudes(psi.n(), std::move(out), false);
}

/// <psi|T_a|psi>; real for Hermitian T_a.
inline double pauli_expectation(const StateVector &psi, const PauliPoint &a) {
    if (a.n != psi.n()) {
        throw DimensionError("pauli_expectation: qubit counts differ");
    }
    if (std::abs(psi.norm_squared() - 1.0) > 1e-9) {
        throw DomainError("pauli_expectation: state not normalized");
    }
    cplx t = 0.0;
    for (Word x = 0; x < psi.dim(); x++) {
        cplx v = std::conj(psi[x ^ a.ax]) * psi[x];
        t += parity(a.az & x) ? -v : v;
    }
    t *= i_pow(popcount(a.ax & a.az));
    return t.real();
}

/// Local measurement basis of one qubit.
enum class Basis : unsigned char { Z = 0, X = 1, Y = 2 };

inline char basis_char(Basis b) {
    return b == Basis::Z ? 'Z' : (b == Basis::X ? 'X' : 'Y');
}

using Frame = std::vector<Basis>;

struct DiagonalFrame {
    Frame frame;
    Word support = 0;  ///< a': parity mask over measured bits.
};

/// Local frame V with T_a = V Z^{a'} V^dagger.
inline DiagonalFrame diagonalizing_frame(const PauliPoint &a) {
    DiagonalFrame f;
    f.frame.assign(a.n, Basis::Z);
    for (int q = 0; q < a.n; q++) {
        Word b = qubit_bit(a.n, q);
        bool x = a.ax & b, z = a.az & b;
        if (x && z) {
            f.frame[q] = Basis::Y;
        } else if (x) {
            f.frame[q] = Basis::X;
        }
        if (x || z) {
            f.support |= b;
        }
    }
    return f;
}

/// The Pauli point V Z^{mask} V^dagger for frame V.
inline PauliPoint frame_pauli(const Frame &frame, Word mask) {
    int n = static_cast<int>(frame.size());
    Word x = 0, z = 0;
    for (int q = 0; q < n; q++) {
        Word b = qubit_bit(n, q);
        if (!(mask & b)) {
            continue;
        }
        if (frame[q] != Basis::Z) {
            x |= b;
        }
        if (frame[q] != Basis::X) {
            z |= b;
        }
    }
    return PauliPoint(n, x, z);
}

enum class Direction { Forward, Inverse };

inline bool is_power_of_two(std::size_t m) {
    return m != 0 && (m & (m - 1)) == 0;
}

/// In-place Walsh-Hadamard transform: v_b <- sum_a v_a (-1)^{a.b}. Inverse divides by the length.
template <typename T>
void fwht_inplace(std::vector<T> &v, Direction dir = Direction::Forward) {
    std::size_t m = v.size();
    if (!is_power_of_two(m)) {
        throw DimensionError("fwht: length must be a power of two");
    }
    for (std::size_t h = 1; h < m; h <<= 1) {
        for (std::size_t i = 0; i < m; i += h << 1) {
            for (std::size_t j = i; j < i + h; j++) {
                T u = v[j], w = v[j + h];
                v[j] = u + w;
                v[j + h] = u - w;
            }
        }
    }
    if (dir == Direction::Inverse) {
        double s = 1.0 / static_cast<double>(m);
        for (auto &e : v) {
            e *= s;
        }
    }
}

template <typename T>
std::vector<T> fwht(std::vector<T> v, Direction dir = Direction::Forward) {
    fwht_inplace(v, dir);
    return v;
}

/// Packed binary matrix, 64 columns per word.
class F2Matrix {
  public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const { return (bits_[r * wpr_ + c / 64] >> (c % 64)) & 1; }
    void set(std::size_t r, std::size_t c, bool v) {
        Word m = Word{1} << (c % 64);
        Word &w = bits_[r * wpr_ + c / 64];
        w = v ? (w | m) : (w & ~m);
    }
    void flip(std::size_t r, std::size_t c) { bits_[r * wpr_ + c / 64] ^= Word{1} << (c % 64); }

    Word *row(std::size_t r) { return bits_.data() + r * wpr_; }
    const Word *row(std::size_t r) const { return bits_.data() + r * wpr_; }

    bool is_hollow_symmetric() const {
        if (rows_ != cols_) {
            return false;
        }
        for (std::size_t i = 0; i < rows_; i++) {
            if (get(i, i)) {
                return false;
            }
            for (std::size_t j = 0; j < i; j++) {
                if (get(i, j) != get(j, i)) {
                    return false;
                }
            }
        }
        return true;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<Word> bits_;
};

/// Rank over F2 by word-parallel Gaussian elimination.
inline std::size_t f2_rank(F2Matrix m) {
    std::size_t rank = 0;
    std::size_t wpr = m.words_per_row();
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); c++) {
        std::size_t w = c / 64;
        Word bit = Word{1} << (c % 64);
        std::size_t piv = rank;
        while (piv < m.rows() && !(m.row(piv)[w] & bit)) {
            piv++;
        }
        if (piv == m.rows()) {
            continue;
        }
        if (piv != rank) {
            std::swap_ranges(m.row(piv), m.row(piv) + wpr, m.row(rank));
        }
        for (std::size_t r = 0; r < m.rows(); r++) {
            if (r != rank && (m.row(r)[w] & bit)) {
                for (std::size_t k = w; k < wpr; k++) {
                    m.row(r)[k] ^= m.row(rank)[k];
                }
            }
        }
        rank++;
    }
    return rank;
}

/// Dense Pauli coefficients c(a) = 2^{-n} <psi|T_a|psi>, indexed by PauliPoint::index().
struct CoeffVector {
    int n = 0;
    std::vector<double> values;

    double operator[](const PauliPoint &a) const { return values[a.index()]; }
    std::size_t size() const { return values.size(); }
};

inline constexpr int kCoeffCap = 10;

/// O(4^n n): one WHT over az for each ax.
inline CoeffVector pauli_coefficients(const StateVector &psi, int cap = kCoeffCap) {
    int n = psi.n();
    if (n > cap) {
        throw CapExceeded("pauli_coefficients: n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap) +
                              " (4^n=" + std::to_string(std::pow(4.0, n)) + " coefficients)",
                          std::pow(4.0, n) * n);
    }
    std::size_t d = psi.dim();
    CoeffVector c;
    c.n = n;
    c.values.assign(d * d, 0.0);
    std::vector<cplx> v(d);
    double scale = 1.0 / static_cast<double>(d);
    for (Word ax = 0; ax < d; ax++) {
        for (Word x = 0; x < d; x++) {
            v[x] = std::conj(psi[x ^ ax]) * psi[x];
        }
        fwht_inplace(v);
        for (Word az = 0; az < d; az++) {
            cplx t = v[az] * i_pow(popcount(ax & az));
            c.values[(static_cast<std::size_t>(ax) << n) | az] = t.real() * scale;
        }
    }
    return c;
}

}  // namespace phasefe
