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
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "phasefe/core.hpp"
#include "phasefe/pauli.hpp"
#include "phasefe/states.hpp"

/// @file magic.hpp
/// @brief Pauli l-norms, stabilizer Renyi entropies, DFE variance bounds and
/// hypergraph rank statistics.

namespace phasefe {

struct NormReport {
    double l0 = 0.0;  ///< nonzero coefficient count / 2^n
    double l1 = 0.0;  ///< 2^{-n} sum |<T_a>|
    double l2 = 0.0;  ///< 2^n sum c^2 (purity)
    std::map<double, double> sre;  ///< alpha -> M_alpha
};

inline constexpr double kL0Threshold = 1e-10;

/// Renyi entropy of q_a = <T_a>^2 / 2^n, minus n. alpha = 1 is the Shannon limit.
inline double stabilizer_renyi_entropy(const CoeffVector &c, double alpha) {
    int n = c.n;
    double d = std::ldexp(1.0, n);
    if (alpha == 1.0) {
        double h = 0.0;
        for (double v : c.values) {
            double q = v * v * d;
            if (q > 0.0) {
                h -= q * std::log2(q);
            }
        }
        return h - n;
    }
    if (alpha == 0.0) {
        double cnt = 0.0;
        for (double v : c.values) {
            cnt += std::abs(v) > kL0Threshold;
        }
        return std::log2(cnt) - n;
    }
    double s = 0.0;
    for (double v : c.values) {
        double q = v * v * d;
        if (q > 0.0) {
            s += std::pow(q, alpha);
        }
    }
    return std::log2(s) / (1.0 - alpha) - n;
}

inline NormReport norms(const CoeffVector &c, const std::vector<double> &alphas = {0.0, 0.5, 1.0, 2.0}) {
    NormReport r;
    double d = std::ldexp(1.0, c.n);
    double cnt = 0.0, s1 = 0.0, s2 = 0.0;
    for (double v : c.values) {
        cnt += std::abs(v) > kL0Threshold;
        s1 += std::abs(v);
        s2 += v * v;
    }
    r.l0 = cnt / d;
    r.l1 = s1;
    r.l2 = s2 * d;
    for (double a : alphas) {
        if (a < 0.0) {
            throw DomainError("norms: alpha must be nonnegative");
        }
        r.sre[a] = stabilizer_renyi_entropy(c, a);
    }
    return r;
}

inline NormReport norms(const StateVector &psi, const std::vector<double> &alphas = {0.0, 0.5, 1.0, 2.0}) {
    return norms(pauli_coefficients(psi), alphas);
}

/// 2^{alpha M_{1-alpha} + (1-alpha) M_alpha}; alpha = 1/2 gives l1^2, alpha = 1 gives l0.
inline double dfe_variance_bound(const CoeffVector &c, double alpha) {
    if (alpha != 0.5 && alpha != 1.0) {
        throw DomainError("dfe_variance_bound: alpha must be 1/2 or 1");
    }
    double e = alpha * stabilizer_renyi_entropy(c, 1.0 - alpha) + (1.0 - alpha) * stabilizer_renyi_entropy(c, alpha);
    return std::exp2(e);
}

inline double dfe_variance_bound(const StateVector &psi, double alpha) {
    return dfe_variance_bound(pauli_coefficients(psi), alpha);
}

enum class BoundMethod { SampledRank, ClosedFormComplete, NormFormula };

inline const char *bound_method_name(BoundMethod m) {
    switch (m) {
        case BoundMethod::SampledRank: return "sampled-rank";
        case BoundMethod::ClosedFormComplete: return "closed-form-complete";
        default: return "norm-formula";
    }
}

struct VarianceBounds {
    double lower = 0.0;
    double upper = 0.0;
    BoundMethod method = BoundMethod::NormFormula;
};

/// Cubic part of a hypergraph phase polynomial as vertex triples.
struct CubicForm {
    int n = 0;
    std::vector<std::array<int, 3>> triangles;

    /// Validates edges: degree <= 3, distinct in-range vertices. Lower-degree edges do not
    /// affect the derivative's symplectic part and are dropped.
    static CubicForm from_edges(int n, const std::vector<std::vector<int>> &edges) {
        CubicForm f;
        f.n = n;
        for (const auto &e : edges) {
            if (e.empty() || e.size() > 3) {
                throw DomainError("CubicForm: monomials must have degree 1..3");
            }
            for (std::size_t i = 0; i < e.size(); i++) {
                if (e[i] < 0 || e[i] >= n) {
                    throw DomainError("CubicForm: vertex out of range");
                }
                for (std::size_t j = 0; j < i; j++) {
                    if (e[i] == e[j]) {
                        throw DomainError("CubicForm: repeated vertex in monomial");
                    }
                }
            }
            if (e.size() == 3) {
                f.triangles.push_back({e[0], e[1], e[2]});
            }
        }
        return f;
    }
};

/// N(x)_{mk} = sum over triangles {i,m,k} of x_i (mod 2).
inline F2Matrix hypergraph_derivative_matrix(const CubicForm &f, Word x) {
    F2Matrix m(f.n, f.n);
    for (const auto &t : f.triangles) {
        for (int r = 0; r < 3; r++) {
            int i = t[r], u = t[(r + 1) % 3], v = t[(r + 2) % 3];
            if (x & qubit_bit(f.n, i)) {
                m.flip(u, v);
                m.flip(v, u);
            }
        }
    }
    return m;
}

/// Exact 2^{-n} sum_x 2^{rank N(x)/2}, the l1 norm of a hypergraph state with this cubic part.
inline double hypergraph_l1_by_rank(const CubicForm &f) {
    check_qubits(f.n, 24, "hypergraph_l1_by_rank");
    double s = 0.0;
    Word d = Word{1} << f.n;
    for (Word x = 0; x < d; x++) {
        s += std::exp2(0.5 * static_cast<double>(f2_rank(hypergraph_derivative_matrix(f, x))));
    }
    return s / static_cast<double>(d);
}

/// Monte Carlo over uniform x: [2^{E rank}, E 2^{rank}], the 1/2-DFE variance scale.
inline VarianceBounds hypergraph_variance_bounds(const CubicForm &f, std::size_t samples, Rng &rng) {
    if (samples == 0) {
        throw DomainError("hypergraph_variance_bounds: zero samples");
    }
    double sr = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < samples; i++) {
        Word x = rng() & low_mask(f.n);
        double r = static_cast<double>(f2_rank(hypergraph_derivative_matrix(f, x)));
        sr += r;
        s2 += std::exp2(r);
    }
    double ns = static_cast<double>(samples);
    return {std::exp2(sr / ns), s2 / ns, BoundMethod::SampledRank};
}

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Number of n x n hollow-symmetric F2 matrices of the given rank (zero for odd rank).
inline BigInt hollow_symmetric_rank_count(int n, int rank) {
    if (n < 0 || rank < 0 || rank > n) {
        throw DomainError("hollow_symmetric_rank_count: need 0 <= rank <= n");
    }
    if (rank % 2) {
        return 0;
    }
    int h = rank / 2;
    BigRational r = 1;
    for (int i = 1; i <= h; i++) {
        BigInt num = BigInt(1) << (2 * i - 2);
        BigInt den = (BigInt(1) << (2 * i)) - 1;
        r *= BigRational(num, den);
    }
    for (int i = 0; i < 2 * h; i++) {
        r *= BigRational((BigInt(1) << (n - i)) - 1);
    }
    if (boost::multiprecision::denominator(r) != 1) {
        throw NumericalHealthError("hollow_symmetric_rank_count: count is not integral");
    }
    return boost::multiprecision::numerator(r);
}

/// r(n,h) = N(n,2h) 2^{-n(n-1)/2}, exact.
inline std::vector<BigRational> hollow_symmetric_rank_distribution(int n) {
    std::vector<BigRational> r;
    BigInt total = BigInt(1) << (n * (n - 1) / 2);
    for (int h = 0; 2 * h <= n; h++) {
        r.emplace_back(hollow_symmetric_rank_count(n, 2 * h), total);
    }
    return r;
}

/// Closed-form bounds in variance units: [2^{sum 2h r}, sum r 4^h].
inline VarianceBounds complete3_variance_bounds(int n) {
    if (n < 3) {
        throw DomainError("complete3_variance_bounds: n >= 3 required");
    }
    auto r = hollow_symmetric_rank_distribution(n);
    BigRational mean_rank = 0, upper = 0;
    for (std::size_t h = 0; h < r.size(); h++) {
        mean_rank += r[h] * BigRational(2 * static_cast<long>(h));
        upper += r[h] * BigRational(BigInt(1) << (2 * h));
    }
    return {std::exp2(static_cast<double>(mean_rank)), static_cast<double>(upper), BoundMethod::ClosedFormComplete};
}

}  // namespace phasefe
