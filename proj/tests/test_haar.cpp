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

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "phasefe/haar.hpp"
#include "phasefe/magic.hpp"
#include "phasefe/states.hpp"

using namespace phasefe;

TEST(incomplete_beta, matches_boost) {
    for (double a : {0.5, 1.0, 2.5, 7.0, 40.0})
        for (double b : {0.5, 1.0, 3.0, 12.0})
            for (double x : {0.01, 0.3, 0.5, 0.77, 0.99}) {
                double want = boost::math::beta(a, b, x);
                EXPECT_NEAR(incomplete_beta(x, a, b), want, 1e-11 * want) << a << " " << b << " " << x;
            }
}

TEST(incomplete_beta, identities_in_log_space) {
    for (int k = 0; k <= 10; k++) {
        double a = std::ldexp(1.0, k);
        double lb = log_beta(a, a);
        EXPECT_NEAR(log_incomplete_beta(1.0, a, 3.0), log_beta(a, 3.0), 1e-10 * std::abs(log_beta(a, 3.0)) + 1e-14);
        EXPECT_NEAR(std::exp(log_incomplete_beta(0.5, a, a) - lb), 0.5, 0.5e-10);
        // B(1/2; a+1, a) = B(a,a)/4 - 1/(a 2^{2a+1}); compare after scaling by 1/B(a,a).
        double lhs = std::exp(log_incomplete_beta(0.5, a + 1, a) - lb);
        double rhs = 0.25 - std::exp(-std::log(a) - (2 * a + 1) * std::log(2.0) - lb);
        EXPECT_NEAR(lhs, rhs, 1e-10 * rhs) << a;
    }
}

TEST(haar_closed_form, single_qubit_and_scale) {
    // One qubit: <Z> is uniform on [-1, 1], so E||psi||_1 = (1 + 3/2) / 2.
    EXPECT_NEAR(haar_l1_mean_closed_form(1).value, 1.25, 1e-12);
    auto r = haar_l1_mean_closed_form(10);
    EXPECT_NEAR(r.value, 0.798 * 32, 0.02 * 0.798 * 32);
    for (int n = 1; n <= kHaarLiteralCap; n++) {
        auto c = haar_l1_mean_closed_form(n);
        EXPECT_NEAR(c.literal, c.value, 1e-7 * c.value) << n;
    }
    EXPECT_TRUE(std::isnan(haar_l1_mean_closed_form(kHaarLiteralCap + 1).literal));
    auto big = haar_l1_mean_closed_form(40);
    EXPECT_NEAR(big.value / big.asymptote, 1.0, 1e-3);
    EXPECT_THROW(haar_l1_mean_closed_form(0), DomainError);
}

TEST(haar_closed_form, two_qubits_against_sampling) {
    Rng rng(31);
    int samples = 100000;
    double s = 0, s2 = 0;
    for (int i = 0; i < samples; i++) {
        double v = norms(haar_random(2, rng), {}).l1;
        s += v;
        s2 += v * v;
    }
    double m = s / samples, se = std::sqrt((s2 / samples - m * m) / samples);
    EXPECT_NEAR(m, haar_l1_mean_closed_form(2).value, 3 * se);
}

TEST(dirichlet, pair_moment) {
    Rng rng(9);
    for (int n : {2, 4, 6}) {
        std::size_t k = std::size_t{1} << n;
        int samples = 40000;
        double s = 0, s2 = 0;
        for (int i = 0; i < samples; i++) {
            auto p = dirichlet_flat(k, rng);
            double v = std::sqrt(p[0] * p[1]);
            s += v;
            s2 += v * v;
        }
        double m = s / samples, se = std::sqrt((s2 / samples - m * m) / samples);
        double kd = static_cast<double>(k);
        double want = std::exp(std::lgamma(kd) + 2 * std::lgamma(1.5) - std::lgamma(kd + 1));
        EXPECT_NEAR(m, want, 4 * se) << n;
    }
}

TEST(stripped_estimate, class_count_matches_direct_sampling) {
    for (int n = 3; n <= 5; n++) {
        Rng rng(100 + n);
        int samples = 3000;
        double s = 0, s2 = 0;
        for (int i = 0; i < samples; i++) {
            double v = norms(phase_strip(haar_random(n, rng)).stripped, {}).l1;
            s += v;
            s2 += v * v;
        }
        double m = s / samples, se = std::sqrt((s2 / samples - m * m) / samples);
        auto e = haar_stripped_l1_estimate(n, 40000, rng, StrippedFormula::ClassCount, StrippedTerms::Full);
        EXPECT_NEAR(e.mean, m, 3.5 * std::hypot(se, e.std_error)) << n;
        auto wrong = haar_stripped_l1_estimate(n, 4000, rng, StrippedFormula::Rederived, StrippedTerms::Full);
        EXPECT_GT(wrong.mean - m, 10 * std::hypot(se, wrong.std_error)) << n;
    }
}

TEST(stripped_estimate, prefactors_are_ordered) {
    for (int n = 3; n <= 20; n++) {
        EXPECT_GT(stripped_prefactor(n, StrippedFormula::Literal), stripped_prefactor(n, StrippedFormula::Rederived));
        EXPECT_GT(stripped_prefactor(n, StrippedFormula::Rederived), stripped_prefactor(n, StrippedFormula::ClassCount));
    }
    EXPECT_EQ(parse_stripped_formula("class_count"), StrippedFormula::ClassCount);
    EXPECT_EQ(std::string(stripped_formula_name(StrippedFormula::Literal)), "literal");
    EXPECT_THROW(parse_stripped_formula("other"), DomainError);
    Rng rng(1);
    EXPECT_THROW(haar_stripped_l1_estimate(1, 10, rng), DomainError);
    EXPECT_THROW(haar_stripped_l1_estimate(4, 0, rng), DomainError);
}

TEST(stripped_estimate, ratio_at_twelve_qubits) {
    Rng rng(12);
    auto e = haar_stripped_l1_estimate(12, 3000, rng);
    double ratio = e.mean / haar_l1_mean_closed_form(12).value;
    EXPECT_NEAR(ratio, 0.437, 0.05);
}
