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
#include <set>

#include "fixtures.hpp"
#include "phasefe/tomography.hpp"

using namespace phasefe;

namespace {

double distance(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).frobenius_norm(); }

double l2(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i++) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

std::vector<double> random_simplex_point(std::size_t d, Rng &rng) {
    std::vector<double> p(d);
    double s = 0.0;
    for (auto &x : p) s += (x = -std::log(1.0 - uniform01(rng)));
    for (auto &x : p) x /= s;
    return p;
}

ComplexMatrix random_hermitian_unit_trace(int n, Rng &rng, double noise) {
    ComplexMatrix m = fixtures::random_density_matrix(n, rng);
    std::size_t d = m.dim();
    for (std::size_t i = 0; i < d; i++) {
        m(i, i) += noise * standard_normal(rng);
        for (std::size_t j = i + 1; j < d; j++) {
            cplx z(noise * standard_normal(rng), noise * standard_normal(rng));
            m(i, j) += z;
            m(j, i) += std::conj(z);
        }
    }
    cplx t = m.trace();
    for (std::size_t i = 0; i < d; i++) m(i, i) += (1.0 - t.real()) / static_cast<double>(d);
    return m;
}

}  // namespace

TEST(mub, single_qubit_is_zxy) {
    auto fam = mub_family(1);
    ASSERT_EQ(fam.bases.size(), 3u);
    EXPECT_TRUE(fam.bases[0].computational);
    std::set<char> seen;
    for (const auto &b : fam.bases) {
        ASSERT_EQ(b.pauli_class.size(), 1u);
        const auto &p = b.pauli_class[0];
        seen.insert(p.ax && p.az ? 'Y' : p.ax ? 'X' : 'Z');
    }
    EXPECT_EQ(seen, (std::set<char>{'X', 'Y', 'Z'}));
}

TEST(mub, count_and_mutual_unbiasedness) {
    for (int n = 1; n <= 4; n++) {
        auto fam = mub_family(n);
        std::size_t d = std::size_t{1} << n;
        ASSERT_EQ(fam.bases.size(), d + 1);
        for (std::size_t p = 0; p < fam.bases.size(); p++) {
            for (std::size_t q = p; q < fam.bases.size(); q++) {
                for (std::size_t i = 0; i < d; i++) {
                    for (std::size_t j = 0; j < d; j++) {
                        cplx s = 0.0;
                        for (std::size_t x = 0; x < d; x++)
                            s += std::conj(fam.bases[p].vectors[i][x]) * fam.bases[q].vectors[j][x];
                        double want = p == q ? (i == j ? 1.0 : 0.0) : 1.0 / static_cast<double>(d);
                        ASSERT_NEAR(std::norm(s), want, 1e-9) << n << " " << p << " " << q;
                    }
                }
            }
        }
    }
}

TEST(mub, complex_projective_two_design) {
    for (int n = 1; n <= 3; n++) {
        auto fam = mub_family(n);
        std::size_t d = std::size_t{1} << n, D = d * d;
        std::vector<cplx> avg(D * D, 0.0);
        double count = 0.0;
        for (const auto &b : fam.bases) {
            for (const auto &v : b.vectors) {
                count += 1.0;
                for (std::size_t r = 0; r < D; r++) {
                    cplx vr = v[r / d] * v[r % d];
                    for (std::size_t c = 0; c < D; c++) avg[r * D + c] += vr * std::conj(v[c / d] * v[c % d]);
                }
            }
        }
        double norm = static_cast<double>(d * (d + 1));
        for (std::size_t r = 0; r < D; r++) {
            for (std::size_t c = 0; c < D; c++) {
                // (I + SWAP) / (d (d + 1)); SWAP maps (i, j) to (j, i).
                double want = (r == c) + (c == (r % d) * d + r / d);
                ASSERT_NEAR(std::abs(avg[r * D + c] / count - want / norm), 0.0, 1e-9) << n;
            }
        }
    }
}

TEST(mub, cap_is_enforced) { EXPECT_THROW(mub_family(5), CapExceeded); }

TEST(simplex, hand_examples) {
    auto a = simplex_project({0.6, 0.6});
    EXPECT_NEAR(a[0], 0.5, 1e-15);
    EXPECT_NEAR(a[1], 0.5, 1e-15);
    auto b = simplex_project({1.5, -0.5});
    EXPECT_NEAR(b[0], 1.0, 1e-15);
    EXPECT_NEAR(b[1], 0.0, 1e-15);
    std::vector<double> ok{0.1, 0.2, 0.3, 0.4};
    auto c = simplex_project(ok);
    for (std::size_t i = 0; i < ok.size(); i++) EXPECT_NEAR(c[i], ok[i], 1e-15);
    EXPECT_THROW(simplex_project({}), DomainError);
    EXPECT_THROW(simplex_project({NAN, 1.0}), DomainError);
}

TEST(simplex, non_expansive_toward_simplex_points) {
    Rng rng(3);
    for (int probe = 0; probe < 200; probe++) {
        std::size_t d = 2 + probe % 15;
        std::vector<double> v(d);
        for (auto &x : v) x = 0.5 * standard_normal(rng);
        auto p = simplex_project(v);
        double s = 0.0;
        for (double x : p) {
            EXPECT_GE(x, 0.0);
            s += x;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
        auto t = random_simplex_point(d, rng);
        EXPECT_LE(l2(t, p), l2(t, v) + 1e-12);
    }
}

TEST(coefficients, maximally_mixed_rows_go_uniform) {
    Rng rng(5);
    auto fam = mub_family(2);
    auto t = estimate_coefficients(DensityState::maximally_mixed(2), fam, 200000, rng);
    for (const auto &row : t.projected)
        for (double x : row) EXPECT_NEAR(x, 0.25, 0.01);
}

TEST(coefficients, basis_element_concentrates) {
    Rng rng(6);
    auto fam = mub_family(2);
    auto psi = StateVector::from_amplitudes(2, fam.bases[2].vectors[1]);
    auto t = estimate_coefficients(DensityState::pure(psi), fam, 2000, rng);
    EXPECT_DOUBLE_EQ(t.raw[2][1], 1.0);
}

TEST(coefficients, rows_within_statistical_tolerance) {
    Rng rng(7);
    auto fam = mub_family(2);
    auto rho = depolarize(haar_random(2, rng), 0.3);
    std::size_t shots = 50000;
    auto est = estimate_coefficients(rho, fam, shots, rng);
    auto ex = exact_coefficients(rho, fam);
    for (std::size_t b = 0; b < ex.raw.size(); b++) {
        for (std::size_t j = 0; j < ex.raw[b].size(); j++) {
            double p = ex.raw[b][j];
            double sigma = std::sqrt(std::max(p * (1 - p), 1e-6) / static_cast<double>(shots));
            EXPECT_LT(std::abs(est.raw[b][j] - p), 5.0 * sigma);
        }
    }
    EXPECT_THROW(estimate_coefficients(rho, fam, 0, rng), DomainError);
}

TEST(reconstruct, exact_rows_recover_the_density) {
    Rng rng(9);
    for (int rep = 0; rep < 50; rep++) {
        int n = 1 + rep % 3;
        auto fam = mub_family(n);
        auto rho = fixtures::random_density(n, rng, 1 + rep % 3);
        auto r = reconstruct(exact_coefficients(rho, fam), fam);
        EXPECT_LT(distance(r, rho.to_dense()), 1e-9) << rep;
    }
    auto fam = mub_family(2);
    auto mixed = reconstruct(exact_coefficients(DensityState::maximally_mixed(2), fam), fam);
    EXPECT_LT(distance(mixed, ComplexMatrix::identity(4) * cplx(0.25, 0.0)), 1e-12);
}

TEST(reconstruct, dimension_mismatch) {
    auto fam = mub_family(2);
    CoefficientTable t;
    t.projected.assign(3, std::vector<double>(4, 0.25));
    EXPECT_THROW(reconstruct(t, fam), DimensionError);
}

TEST(psd_project, diagonal_example_and_fixed_point) {
    ComplexMatrix h(2);
    h(0, 0) = 1.2;
    h(1, 1) = -0.2;
    auto p = psd_project(h);
    EXPECT_NEAR(std::abs(p(0, 0) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(p(1, 1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(p(0, 1)), 0.0, 1e-12);
    Rng rng(10);
    auto rho = fixtures::random_density_matrix(2, rng);
    EXPECT_LT(distance(psd_project(rho), rho), 1e-10);
    ComplexMatrix bad(2);
    bad(0, 1) = 1.0;
    EXPECT_THROW(psd_project(bad), DomainError);
}

TEST(psd_project, non_expansive_and_never_farther_than_probes) {
    Rng rng(11);
    for (int probe = 0; probe < 200; probe++) {
        int n = 1 + probe % 2;
        auto h = random_hermitian_unit_trace(n, rng, 0.15);
        auto p = psd_project(h);
        HermitianEigen e = jacobi_eigh(p);
        double s = 0.0;
        for (double l : e.values) {
            EXPECT_GE(l, -1e-12);
            s += l;
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
        auto rho = fixtures::random_density_matrix(n, rng, 1 + probe % 4 % (std::size_t{1} << n));
        EXPECT_LE(distance(rho, p), distance(rho, h) + 1e-12);
        // Closest-point property against a random density probe.
        EXPECT_LE(distance(h, p), distance(h, rho) + 1e-12);
    }
}

TEST(pipeline, exact_limit_and_single_qubit_accuracy) {
    Rng rng(12);
    auto rho = fixtures::random_density(2, rng);
    EXPECT_LT(tomography_pipeline(rho, 0, 1).l2_error, 1e-9);
    auto one = fixtures::random_density(1, rng);
    EXPECT_LT(tomography_pipeline(one, 100000, 2).l2_error, 0.02);
}

TEST(pipeline, error_shrinks_like_inverse_root_shots) {
    Rng rng(13);
    auto rho = depolarize(haar_random(2, rng), 0.2);
    std::vector<double> lx, ly;
    for (std::size_t shots : {1000, 3000, 10000, 30000, 100000}) {
        double acc = 0.0;
        for (int r = 0; r < 10; r++) acc += tomography_pipeline(rho, shots, 100 * shots + r).l2_error;
        lx.push_back(std::log(static_cast<double>(shots)));
        ly.push_back(std::log(acc / 10.0));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); i++) mx += lx[i], my += ly[i];
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); i++) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
    for (std::size_t i = 1; i < ly.size(); i++) EXPECT_LT(ly[i], ly[i - 1]);
}

TEST(pipeline, fofe_path_agrees_with_direct_rows) {
    Rng rng(14);
    auto fam = mub_family(2);
    auto rho = depolarize(haar_random(2, rng), 0.1);
    auto t = estimate_coefficients_fofe(rho, fam, 40000, 3, 2);
    auto ex = exact_coefficients(rho, fam);
    for (std::size_t b = 0; b < ex.raw.size(); b++)
        for (std::size_t j = 0; j < 4; j++) EXPECT_NEAR(t.raw[b][j], ex.raw[b][j], 0.05) << b << " " << j;
}
