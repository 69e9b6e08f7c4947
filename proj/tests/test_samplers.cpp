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

#include <chrono>
#include <cmath>
#include <map>

#include "phasefe/mps.hpp"
#include "phasefe/samplers.hpp"

using namespace phasefe;

namespace {

/// l_{2 alpha} table straight from the dense coefficients.
std::vector<double> target_table(const StateVector &psi, double alpha) {
    auto c = pauli_coefficients(psi);
    std::vector<double> p(c.size());
    double z = 0;
    for (std::size_t i = 0; i < c.size(); i++) {
        p[i] = alpha == 0.5 ? std::abs(c.values[i]) : c.values[i] * c.values[i];
        z += p[i];
    }
    for (auto &v : p) v /= z;
    return p;
}

double tv_distance(const PhasePointSampler &s, const std::vector<double> &p) {
    double tv = 0;
    for (std::size_t i = 0; i < p.size(); i++) tv += std::abs(s.probability(PauliPoint::from_index(s.n(), i)) - p[i]);
    return tv / 2;
}

/// Chi-squared statistic of draw() against probability(), pooling cells with expectation < 5.
double draw_chi2(const PhasePointSampler &s, int draws, Rng &rng, int *dof) {
    std::map<std::size_t, double> cnt;
    for (int i = 0; i < draws; i++) cnt[s.draw(rng).a.index()] += 1;
    double chi2 = 0, pooled_obs = 0, pooled_exp = 0;
    *dof = -1;
    for (std::size_t i = 0; i < (std::size_t{1} << (2 * s.n())); i++) {
        double e = draws * s.probability(PauliPoint::from_index(s.n(), i));
        double o = cnt.count(i) ? cnt[i] : 0.0;
        if (e == 0) {
            EXPECT_EQ(o, 0.0) << "drew a zero-probability point";
            continue;
        }
        if (e < 5) {
            pooled_obs += o;
            pooled_exp += e;
            continue;
        }
        chi2 += (o - e) * (o - e) / e;
        ++*dof;
    }
    if (pooled_exp > 0) {
        chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++*dof;
    }
    return chi2;
}

/// Loose upper quantile for chi-squared with k degrees of freedom (about 5 sigma).
double chi2_limit(int k) { return k + 5.0 * std::sqrt(2.0 * k) + 10.0; }

/// Best of five timed runs after a warm-up; the minimum is the least load-sensitive statistic.
template <typename F>
double seconds_per_call(F &&f, int calls) {
    for (int i = 0; i < calls / 4 + 1; i++) f();
    double best = 1e300;
    for (int rep = 0; rep < 5; rep++) {
        auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < calls; i++) f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / calls);
    }
    return best;
}

}  // namespace

TEST(exact_sampler, plus_and_zero_supports) {
    auto s = exact_sampler(pauli_coefficients(plus_state(3)), 0.5);
    for (std::size_t i = 0; i < 64; i++) {
        auto a = PauliPoint::from_index(3, i);
        EXPECT_NEAR(s->probability(a), a.az == 0 ? 1.0 / 8 : 0.0, 1e-15);
    }
    auto z = exact_sampler(pauli_coefficients(StateVector::basis(3, 0)), 0.5);
    for (std::size_t i = 0; i < 64; i++) {
        auto a = PauliPoint::from_index(3, i);
        EXPECT_NEAR(z->probability(a), a.ax == 0 ? 1.0 / 8 : 0.0, 1e-15);
    }
    EXPECT_NEAR(z->normalizer(), 1.0, 1e-15);
    EXPECT_THROW(exact_sampler(pauli_coefficients(plus_state(2)), 0.3), DomainError);
}

TEST(exact_sampler, draws_follow_table) {
    Rng rng(1);
    for (double alpha : {0.5, 1.0}) {
        auto s = exact_sampler(pauli_coefficients(haar_random(3, rng)), alpha);
        int dof = 0;
        double chi2 = draw_chi2(*s, 100000, rng, &dof);
        EXPECT_GT(dof, 5);
        EXPECT_LT(chi2, chi2_limit(dof));
    }
}

TEST(exact_sampler, weight_magnitude) {
    Rng rng(2);
    auto psi = haar_random(3, rng);
    auto s = exact_sampler(pauli_coefficients(psi), 0.5);
    double l1 = 0;
    for (double v : pauli_coefficients(psi).values) l1 += std::abs(v);
    for (int i = 0; i < 100; i++) EXPECT_NEAR(std::abs(s->weight(s->draw(rng))), l1, 1e-12);
}

TEST(uniform_x_sampler, one_qubit_and_enumeration) {
    auto u = uniform_x_sampler(1);
    EXPECT_EQ(u->probability(PauliPoint::parse("I")), 0.5);
    EXPECT_EQ(u->probability(PauliPoint::parse("X")), 0.5);
    EXPECT_EQ(u->probability(PauliPoint::parse("Z")), 0.0);
    EXPECT_EQ(u->normalizer(), 1.0);
    auto u3 = uniform_x_sampler(3);
    EXPECT_LT(tv_distance(*u3, target_table(plus_state(3), 0.5)), 1e-15);
    Rng rng(3);
    for (int i = 0; i < 50; i++) EXPECT_EQ(u3->weight(u3->draw(rng)), 1.0);
}

TEST(dicke_sampler, matches_enumeration) {
    EXPECT_LT(tv_distance(*dicke_sampler(2, 1), target_table(dicke_state(2, 1), 0.5)), 1e-15);
    for (int n = 2; n <= 7; n++)
        for (int k = 0; 2 * k <= n; k++) {
            auto s = dicke_sampler(n, k);
            EXPECT_LT(tv_distance(*s, target_table(dicke_state(n, k), 0.5)), 1e-9) << n << " " << k;
            auto c = pauli_coefficients(dicke_state(n, k));
            for (std::size_t i = 0; i < c.size(); i++)
                EXPECT_NEAR(s->coefficient(PauliPoint::from_index(n, i)), c.values[i], 1e-14);
        }
    EXPECT_THROW(dicke_sampler(4, 3), DomainError);
}

TEST(dicke_sampler, draws_are_even_and_bounded) {
    Rng rng(4);
    int n = 30, k = 3;
    auto s = dicke_sampler(n, k);
    for (int i = 0; i < 20000; i++) {
        auto d = s->draw(rng);
        int w = popcount(d.a.ax);
        EXPECT_EQ(w % 2, 0);
        EXPECT_LE(w, 2 * k);
        EXPECT_NE(d.coeff, 0.0);
    }
    int dof = 0;
    auto small = dicke_sampler(5, 2);
    double chi2 = draw_chi2(*small, 100000, rng, &dof);
    EXPECT_LT(chi2, chi2_limit(dof));
}

TEST(dicke_sampler, draw_cost_growth) {
    Rng rng(5);
    auto cost = [&](int n, int k) {
        auto s = dicke_sampler(n, k);
        return seconds_per_call([&] { (void)s->draw(rng); }, 20000);
    };
    double base = cost(8, 2);
    for (int n : {8, 16, 32})
        for (int k : {2, 3, 4}) {
            double allowed = 4.0 * (std::pow(k, 4) * n) / (16.0 * 8.0);
            EXPECT_LT(cost(n, k) / base, std::max(4.0, allowed)) << n << " " << k;
        }
}

TEST(bell_sampler, zero_state_emits_z_points) {
    auto s = bell_circuit_sampler(StateVector::basis(3, 0));
    Rng rng(6);
    for (int i = 0; i < 200; i++) EXPECT_EQ(s->draw(rng).a.ax, 0u);
}

TEST(bell_sampler, output_distribution_is_l2_table) {
    Rng rng(7);
    for (int n = 1; n <= 5; n++) {
        std::vector<cplx> amps(std::size_t{1} << n);
        for (auto &a : amps) a = standard_normal(rng);
        auto psi = StateVector::from_amplitudes(n, amps, true);
        auto s = bell_circuit_sampler(psi);
        EXPECT_LT(tv_distance(*s, target_table(psi, 1.0)), 1e-10) << n;
    }
    auto psi = phase_strip(haar_random(3, rng)).stripped;
    auto s = bell_circuit_sampler(psi);
    int dof = 0;
    double chi2 = draw_chi2(*s, 100000, rng, &dof);
    EXPECT_LT(chi2, chi2_limit(dof));
    EXPECT_THROW(bell_circuit_sampler(haar_random(2, rng)), DomainError);
}

TEST(mps_sampler, product_state_and_random_chains) {
    Rng rng(8);
    auto m1 = random_real_mps(4, 1, rng);
    EXPECT_LT(tv_distance(*mps_l2_sampler(m1), target_table(mps_to_statevector(m1), 1.0)), 1e-12);
    for (int chi : {2, 3, 4}) {
        auto m = random_real_mps(6, chi, rng);
        MpsL2Sampler s(m);
        EXPECT_LT(tv_distance(s, target_table(mps_to_statevector(m), 1.0)), 1e-9) << chi;
        EXPECT_NEAR(s.marginal({}), 1.0, 1e-12);
    }
}

TEST(mps_sampler, draws_and_signs) {
    Rng rng(9);
    auto m = random_real_mps(4, 3, rng);
    MpsL2Sampler s(m);
    auto c = pauli_coefficients(mps_to_statevector(m));
    for (int i = 0; i < 2000; i++) {
        auto d = s.draw(rng);
        EXPECT_NEAR(d.coeff, c[d.a], 1e-12);
    }
    int dof = 0;
    double chi2 = draw_chi2(s, 100000, rng, &dof);
    EXPECT_LT(chi2, chi2_limit(dof));
    EXPECT_EQ(s.drift_warnings(), 0u);
}

TEST(mps_sampler, draw_cost_bounded_by_n2_chi4) {
    Rng rng(10);
    std::vector<double> normalized;
    for (int n : {4, 8, 12})
        for (int chi : {2, 4, 8}) {
            MpsL2Sampler s(random_real_mps(n, chi, rng));
            double t = seconds_per_call([&] { (void)s.draw(rng); }, chi == 8 ? 200 : 2000);
            normalized.push_back(t / (double(n) * n * std::pow(chi, 4)));
        }
    // The normalized cost may shrink (the sampler is O(n chi^4)); it must not grow.
    EXPECT_LT(normalized.back(), 3.0 * normalized.front());
    for (double v : normalized) EXPECT_LT(v, 3.0 * *std::max_element(normalized.begin(), normalized.begin() + 3));
}
