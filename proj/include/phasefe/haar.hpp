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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "phasefe/core.hpp"

/// @file haar.hpp
/// @brief Incomplete beta function and Haar-average l1-norm closed forms and estimators.

namespace phasefe {

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

/// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double x, double a, double b) {
    const double tiny = 1e-300;
    const double eps = 1e-16;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 100000; m++) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            return h;
        }
    }
    throw NumericalHealthError("incomplete_beta: continued fraction did not converge");
}

}  // namespace detail

/// log of the regularized I_x(a, b).
inline double log_regularized_incomplete_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0) || !(a > 0.0) || !(b > 0.0)) {
        throw DomainError("incomplete_beta: need 0 <= x <= 1 and a, b > 0");
    }
    if (x == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (x == 1.0) {
        return 0.0;
    }
    double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return lfront + std::log(detail::beta_cf(x, a, b)) - std::log(a);
    }
    double comp = std::exp(lfront + std::log(detail::beta_cf(1.0 - x, b, a)) - std::log(b));
    return std::log1p(-comp);
}

/// log B(x; a, b) = log of int_0^x t^{a-1} (1-t)^{b-1} dt.
inline double log_incomplete_beta(double x, double a, double b) {
    return log_regularized_incomplete_beta(x, a, b) + log_beta(a, b);
}

inline double incomplete_beta(double x, double a, double b) {
    return std::exp(log_incomplete_beta(x, a, b));
}

struct HaarClosedForm {
    double value = 0.0;        ///< E||psi||_1, bracket reduced to 2/(m 4^m) by the beta identities.
    double literal = 0.0;      ///< Same quantity straight from the incomplete-beta bracket; NaN for n > 16.
    double mean_abs_z = 0.0;   ///< E|<Z>| for one nonidentity Z-type Pauli.
    double asymptote = 0.0;    ///< sqrt(2^{n+1}/pi).
};

/// log(Gamma(m + 1/2) / Gamma(m)); the series avoids cancellation between two huge lgammas.
inline double log_gamma_half_ratio(double m) {
    if (m < 16.0) {
        return std::lgamma(m + 0.5) - std::lgamma(m);
    }
    double u = 1.0 / m, u2 = u * u;
    return 0.5 * std::log(m) - u / 8.0 + u * u2 / 192.0 - u * u2 * u2 / 640.0 + 17.0 * u * u2 * u2 * u2 / 14336.0;
}

/// Largest n at which the unreduced bracket is evaluated; it cancels catastrophically above.
inline constexpr int kHaarLiteralCap = 16;

/// Haar average of the Pauli l1-norm, m = 2^{n-1}.
inline HaarClosedForm haar_l1_mean_closed_form(int n) {
    if (n < 1 || n > 60) {
        throw DomainError("haar_l1_mean_closed_form: need 1 <= n <= 60");
    }
    double m = std::ldexp(1.0, n - 1);
    double l4 = std::log(4.0);
    // log[(2^n-1)! / ((2^{n-1}-1)!)^2] - m log 4, through the duplication formula.
    double lscaled = log_gamma_half_ratio(m) - std::log(2.0) - 0.5 * std::log(3.14159265358979323846);
    double d = std::ldexp(1.0, n);
    double w = (d * d - 1.0) / d;
    HaarClosedForm r;
    r.mean_abs_z = std::exp(lscaled + std::log(2.0 / m));
    r.value = 1.0 / d + w * r.mean_abs_z;
    r.literal = std::numeric_limits<double>::quiet_NaN();
    if (n <= kHaarLiteralCap) {
        // Bracket terms are O(4^{-m}); scale them by 4^m before combining.
        auto scaled = [&](double lv) { return std::exp(lv + m * l4); };
        double bracket = 2.0 * scaled(log_incomplete_beta(0.5, m, m)) -
                         4.0 * scaled(log_incomplete_beta(0.5, m + 1, m)) - scaled(log_beta(m, m)) +
                         2.0 * scaled(log_beta(m + 1, m));
        r.literal = 1.0 / d + w * std::exp(lscaled) * bracket;
    }
    r.asymptote = std::sqrt(2.0 * d / 3.14159265358979323846);
    return r;
}

enum class StrippedFormula { Literal, Rederived, ClassCount };
enum class StrippedTerms { Dominant, Full };

inline const char *stripped_formula_name(StrippedFormula f) {
    switch (f) {
        case StrippedFormula::Literal: return "literal";
        case StrippedFormula::Rederived: return "rederived";
        default: return "class_count";
    }
}

inline StrippedFormula parse_stripped_formula(const std::string &s) {
    if (s == "literal") return StrippedFormula::Literal;
    if (s == "rederived") return StrippedFormula::Rederived;
    if (s == "class_count") return StrippedFormula::ClassCount;
    throw DomainError("unknown stripped formula '" + s + "'");
}

/// Prefactor multiplying E|S| for the ZX class.
inline double stripped_prefactor(int n, StrippedFormula f) {
    double d = std::ldexp(1.0, n);
    switch (f) {
        case StrippedFormula::Literal: return d * d - 2.0 * d + 1.0;
        case StrippedFormula::Rederived: return 2.0 * (d - 1.0) * (d - 1.0) / d;
        default: return (d - 1.0) * (d - 2.0) / d;
    }
}

/// Identity, Z-class and X-class contributions to E||psi_stripped||_1.
inline double stripped_small_terms(int n) {
    double d = std::ldexp(1.0, n);
    double ez = (haar_l1_mean_closed_form(n).value - 1.0 / d) * d / (d * d - 1.0);
    return 1.0 / d + (d - 1.0) / d * ez + 3.14159265358979323846 * (d - 1.0) / (4.0 * d);
}

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Dirichlet(1,...,1) draw via normalized exponentials.
inline std::vector<double> dirichlet_flat(std::size_t k, Rng &rng) {
    std::vector<double> p(k);
    double t = 0.0;
    for (auto &v : p) {
        v = standard_exponential(rng);
        t += v;
    }
    for (auto &v : p) {
        v /= t;
    }
    return p;
}

/// S = sum_{x'} (sqrt(p_00x' p_01x') - sqrt(p_10x' p_11x')), the first two qubits being the MSBs.
inline double stripped_zx_statistic(const std::vector<double> &p) {
    std::size_t q = p.size() / 4;
    double s = 0.0;
    for (std::size_t x = 0; x < q; x++) {
        s += std::sqrt(p[x] * p[q + x]) - std::sqrt(p[2 * q + x] * p[3 * q + x]);
    }
    return s;
}

/// Dirichlet estimate of E||psi_stripped||_1 for Haar psi.
inline MeanEstimate haar_stripped_l1_estimate(int n, std::size_t samples, Rng &rng,
                                              StrippedFormula formula = StrippedFormula::ClassCount,
                                              StrippedTerms terms = StrippedTerms::Dominant) {
    if (n < 2) {
        throw DomainError("haar_stripped_l1_estimate: n >= 2 required");
    }
    check_qubits(n, 26, "haar_stripped_l1_estimate");
    if (samples == 0) {
        throw DomainError("haar_stripped_l1_estimate: samples >= 1");
    }
    double pref = stripped_prefactor(n, formula);
    double extra = terms == StrippedTerms::Full ? stripped_small_terms(n) : 0.0;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < samples; i++) {
        double v = pref * std::abs(stripped_zx_statistic(dirichlet_flat(std::size_t{1} << n, rng))) + extra;
        s1 += v;
        s2 += v * v;
    }
    double ns = static_cast<double>(samples);
    MeanEstimate r;
    r.mean = s1 / ns;
    double var = samples > 1 ? std::max(0.0, (s2 - s1 * s1 / ns) / (ns - 1.0)) : 0.0;
    r.std_error = std::sqrt(var / ns);
    return r;
}

}  // namespace phasefe
