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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "phasefe/pauli.hpp"
#include "phasefe/states.hpp"

using namespace phasefe;

namespace {

StateVector random_state(int n, Rng &rng) { return haar_random(n, rng); }

}  // namespace

TEST(pauli_point, parse_round_trip) {
    for (std::string s : {"I", "XIZY", "YYYY", "ZIIX"}) {
        EXPECT_EQ(PauliPoint::parse(s).str(), s);
    }
    auto a = PauliPoint::parse("XZ");
    EXPECT_EQ(a.ax, 0b10u);
    EXPECT_EQ(a.az, 0b01u);
    EXPECT_EQ(PauliPoint::from_index(2, a.index()), a);
    EXPECT_THROW(PauliPoint(2, 0b100, 0), DimensionError);
    EXPECT_THROW(PauliPoint::parse("XQ"), DomainError);
    EXPECT_TRUE(PauliPoint(3, 0, 0).is_identity());
}

TEST(symplectic, small_cases) {
    EXPECT_EQ(symplectic_product(PauliPoint::parse("X"), PauliPoint::parse("Z")), 1);
    EXPECT_EQ(symplectic_product(PauliPoint::parse("XYZ"), PauliPoint::parse("XYZ")), 0);
    EXPECT_EQ(symplectic_product(PauliPoint::parse("XX"), PauliPoint::parse("ZZ")), 0);
}

TEST(symplectic, matches_dense_commutators_exhaustively) {
    int n = 3;
    std::vector<oracle::Dense> mats;
    for (std::size_t i = 0; i < 64; i++) {
        auto a = PauliPoint::from_index(n, i);
        mats.push_back(oracle::pauli(a.str()));
    }
    for (std::size_t i = 0; i < 64; i++) {
        for (std::size_t j = 0; j < 64; j++) {
            auto ab = oracle::matmul(mats[i], mats[j]), ba = oracle::matmul(mats[j], mats[i]);
            bool commute = true;
            for (std::size_t r = 0; r < 8 && commute; r++)
                for (std::size_t c = 0; c < 8; c++)
                    if (std::abs(ab[r][c] - ba[r][c]) > 1e-12) {
                        commute = false;
                        break;
                    }
            EXPECT_EQ(symplectic_product(PauliPoint::from_index(n, i), PauliPoint::from_index(n, j)), commute ? 0 : 1);
        }
    }
}

TEST(apply_pauli, eigenstate_and_y_on_zero) {
    auto plus = plus_state(1);
    auto out = apply_pauli(PauliPoint::parse("X"), plus);
    EXPECT_NEAR(std::abs(out[0] - plus[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[1] - plus[1]), 0.0, 1e-15);

    auto y0 = apply_pauli(PauliPoint::parse("Y"), StateVector::basis(1, 0));
    EXPECT_NEAR(std::abs(y0[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(y0[1] - cplx(0, 1)), 0.0, 1e-15);
}

TEST(apply_pauli, matches_dense_kronecker_product) {
    Rng rng(11);
    for (int trial = 0; trial < 20; trial++) {
        auto psi = random_state(3, rng);
        auto a = PauliPoint::from_index(3, uniform_index(rng, 64));
        auto got = apply_pauli(a, psi);
        auto want = oracle::apply(oracle::pauli(a.str()), psi.amplitudes());
        for (std::size_t i = 0; i < 8; i++) EXPECT_NEAR(std::abs(got[i] - want[i]), 0.0, 1e-12);
    }
}

TEST(pauli_expectation, examples) {
    EXPECT_NEAR(pauli_expectation(plus_state(4), PauliPoint::parse("XXXX")), 1.0, 1e-12);
    EXPECT_NEAR(pauli_expectation(StateVector::basis(1, 0), PauliPoint::parse("Y")), 0.0, 1e-15);
    auto t = StateVector::from_amplitudes(1, {1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), kPi / 4)});
    EXPECT_NEAR(pauli_expectation(t, PauliPoint::parse("X")), 0.70710678, 1e-8);
}

TEST(pauli_coefficients, computational_zero_state) {
    int n = 4;
    auto c = pauli_coefficients(StateVector::basis(n, 0));
    int nonzero = 0;
    for (double v : c.values) {
        if (std::abs(v) > 1e-12) {
            nonzero++;
            EXPECT_NEAR(std::abs(v), std::ldexp(1.0, -n), 1e-15);
        }
    }
    EXPECT_EQ(nonzero, 1 << n);
}

TEST(pauli_coefficients, stabilizer_states_have_unit_l1) {
    Rng rng(5);
    for (int trial = 0; trial < 20; trial++) {
        int n = 1 + trial % 5;
        auto c = pauli_coefficients(random_stabilizer_state(n, rng, true));
        double l1 = 0;
        for (double v : c.values) l1 += std::abs(v);
        EXPECT_NEAR(l1, 1.0, 1e-10);
    }
}

TEST(pauli_coefficients, matches_dense_trace_and_purity) {
    Rng rng(21);
    for (int n : {1, 2, 3}) {
        auto psi = random_state(n, rng);
        auto c = pauli_coefficients(psi);
        double purity = 0;
        for (std::size_t i = 0; i < c.size(); i++) {
            auto a = PauliPoint::from_index(n, i);
            cplx e = oracle::expect(oracle::pauli(a.str()), psi.amplitudes());
            EXPECT_NEAR(e.imag(), 0.0, 1e-12);
            EXPECT_NEAR(c.values[i], e.real() / std::ldexp(1.0, n), 1e-12) << a.str();
            purity += c.values[i] * c.values[i];
        }
        EXPECT_NEAR(std::ldexp(purity, n), 1.0, 1e-9);
    }
}

TEST(pauli_coefficients, refuses_beyond_cap) {
    EXPECT_THROW(pauli_coefficients(plus_state(11)), CapExceeded);
}

TEST(f2_rank, identity_and_ones) {
    F2Matrix id(5, 5);
    for (int i = 0; i < 5; i++) id.set(i, i, true);
    EXPECT_EQ(f2_rank(id), 5u);
    F2Matrix ones(2, 2);
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) ones.set(i, j, true);
    EXPECT_EQ(f2_rank(ones), 1u);
}

TEST(f2_rank, matches_unpacked_elimination) {
    Rng rng(3);
    for (int trial = 0; trial < 50; trial++) {
        std::size_t r = 20, c = trial % 2 ? 20 : 70;
        F2Matrix m(r, c);
        std::vector<std::vector<int>> u(r, std::vector<int>(c));
        for (std::size_t i = 0; i < r; i++)
            for (std::size_t j = 0; j < c; j++) {
                // Sparse-ish rows so ranks vary.
                bool b = uniform01(rng) < 0.15;
                m.set(i, j, b);
                u[i][j] = b;
            }
        EXPECT_EQ(static_cast<int>(f2_rank(m)), oracle::naive_rank(u));
    }
}

TEST(f2_rank, hollow_symmetric_rank_is_even) {
    Rng rng(8);
    for (int trial = 0; trial < 1000; trial++) {
        int n = 1 + static_cast<int>(uniform_index(rng, 16));
        F2Matrix m(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < i; j++)
                if (rng() & 1) {
                    m.set(i, j, true);
                    m.set(j, i, true);
                }
        ASSERT_TRUE(m.is_hollow_symmetric());
        EXPECT_EQ(f2_rank(m) % 2, 0u);
    }
}

TEST(fwht, delta_and_involution) {
    std::vector<double> d(16, 0.0);
    d[0] = 1.0;
    for (double v : fwht(d)) EXPECT_EQ(v, 1.0);
    Rng rng(1);
    std::vector<double> v(32);
    for (auto &x : v) x = standard_normal(rng);
    auto w = fwht(fwht(v));
    for (std::size_t i = 0; i < v.size(); i++) EXPECT_NEAR(w[i], 32.0 * v[i], 1e-12);
}

TEST(fwht, matches_naive_transform) {
    Rng rng(2);
    std::vector<double> v(16);
    for (auto &x : v) x = standard_normal(rng);
    auto got = fwht(v), want = oracle::naive_wht(v);
    for (std::size_t i = 0; i < v.size(); i++) EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(fwht, round_trip_up_to_4096) {
    Rng rng(4);
    for (std::size_t m = 1; m <= 4096; m <<= 1) {
        std::vector<double> v(m);
        for (auto &x : v) x = standard_normal(rng);
        auto w = fwht(fwht(v), Direction::Inverse);
        for (std::size_t i = 0; i < m; i++) EXPECT_NEAR(w[i], v[i], 1e-12);
    }
    std::vector<double> bad(6);
    EXPECT_THROW(fwht_inplace(bad), DimensionError);
}

TEST(diagonalizing_frame, examples) {
    auto f = diagonalizing_frame(PauliPoint::parse("ZZZ"));
    for (auto b : f.frame) EXPECT_EQ(b, Basis::Z);
    EXPECT_EQ(f.support, 0b111u);
    auto g = diagonalizing_frame(PauliPoint::parse("XII"));
    EXPECT_EQ(g.frame[0], Basis::X);
    EXPECT_EQ(g.support, 0b100u);
    EXPECT_EQ(frame_pauli(g.frame, g.support), PauliPoint::parse("XII"));
}

TEST(diagonalizing_frame, parity_statistics_give_expectation) {
    Rng rng(9);
    for (int trial = 0; trial < 30; trial++) {
        auto psi = random_state(2, rng);
        auto a = PauliPoint::from_index(2, uniform_index(rng, 16));
        auto f = diagonalizing_frame(a);
        auto p = born_distribution(psi, f.frame);
        double e = 0;
        for (std::size_t b = 0; b < p.size(); b++) e += (popcount(b & f.support) % 2 ? -1.0 : 1.0) * p[b];
        EXPECT_NEAR(e, pauli_expectation(psi, a), 1e-12) << a.str();
    }
}
