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
#include <atomic>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/mps.hpp"
#include "phasefe/pauli.hpp"
#include "phasefe/states.hpp"

/// @file samplers.hpp
/// @brief Phase-point samplers drawing a with probability proportional to |c(a)|^{2 alpha}.

namespace phasefe {

enum class SamplerStrategy { ExactEnumeration, UniformX, Dicke, BellCircuit, MpsMarginal };

inline const char *strategy_name(SamplerStrategy s) {
    switch (s) {
        case SamplerStrategy::ExactEnumeration: return "exact";
        case SamplerStrategy::UniformX: return "uniform-x";
        case SamplerStrategy::Dicke: return "dicke";
        case SamplerStrategy::BellCircuit: return "bell";
        default: return "mps";
    }
}

/// A drawn point and its signed target coefficient c(a) = 2^{-n}<T_a>.
struct SampledPoint {
    PauliPoint a;
    double coeff = 0.0;
};

/// Threshold on |<T_a>| below which a coefficient counts as zero for sampling.
inline constexpr double kSampleZero = 1e-12;

class PhasePointSampler {
  public:
    virtual ~PhasePointSampler() = default;

    virtual SamplerStrategy strategy() const = 0;
    virtual int n() const = 0;
    virtual double alpha() const = 0;
    /// sum_b |c_b|^{2 alpha}.
    virtual double normalizer() const = 0;
    virtual SampledPoint draw(Rng &rng) const = 0;
    /// Probability with which draw() emits a, from the sampler's own tables.
    virtual double probability(const PauliPoint &a) const = 0;
    /// Signed target coefficient c(a).
    virtual double coefficient(const PauliPoint &a) const = 0;

    /// w(a) = normalizer |c_a|^{1 - 2 alpha} sgn(c_a).
    double weight(const SampledPoint &s) const {
        double mag = alpha() == 0.5 ? 1.0 : std::pow(std::abs(s.coeff), 1.0 - 2.0 * alpha());
        return (s.coeff < 0 ? -1.0 : 1.0) * normalizer() * mag;
    }
};

using SamplerPtr = std::shared_ptr<const PhasePointSampler>;

inline void check_alpha(double alpha) {
    if (alpha != 0.5 && alpha != 1.0) {
        throw DomainError("sampler: alpha must be 1/2 or 1");
    }
}

/// Cumulative table over the nonzero coefficients.
class ExactSampler final : public PhasePointSampler {
  public:
    ExactSampler(CoeffVector coeffs, double alpha) : c_(std::move(coeffs)), alpha_(alpha) {
        check_alpha(alpha);
        double zero = kSampleZero * std::ldexp(1.0, -c_.n);
        double acc = 0.0;
        for (std::size_t i = 0; i < c_.values.size(); i++) {
            double v = std::abs(c_.values[i]);
            if (v > zero) {
                acc += alpha == 0.5 ? v : v * v;
                support_.push_back(i);
                cum_.push_back(acc);
            }
        }
        if (support_.empty()) {
            throw DomainError("exact_sampler: all coefficients are zero");
        }
        total_ = acc;
    }

    SamplerStrategy strategy() const override { return SamplerStrategy::ExactEnumeration; }
    int n() const override { return c_.n; }
    double alpha() const override { return alpha_; }
    double normalizer() const override { return total_; }

    SampledPoint draw(Rng &rng) const override {
        double u = uniform01(rng) * total_;
        std::size_t k = std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
        k = std::min(k, cum_.size() - 1);
        std::size_t idx = support_[k];
        return {PauliPoint::from_index(c_.n, idx), c_.values[idx]};
    }

    double probability(const PauliPoint &a) const override {
        auto it = std::lower_bound(support_.begin(), support_.end(), a.index());
        if (it == support_.end() || *it != a.index()) {
            return 0.0;
        }
        double v = std::abs(c_.values[a.index()]);
        return (alpha_ == 0.5 ? v : v * v) / total_;
    }

    double coefficient(const PauliPoint &a) const override { return c_.values[a.index()]; }
    const CoeffVector &coefficients() const { return c_; }

  private:
    CoeffVector c_;
    double alpha_;
    double total_ = 0.0;
    std::vector<std::size_t> support_;
    std::vector<double> cum_;
};

inline SamplerPtr exact_sampler(CoeffVector coeffs, double alpha) {
    return std::make_shared<ExactSampler>(std::move(coeffs), alpha);
}

/// Phase-stripped phase states: uniform over X-type points, all coefficients 2^{-n}.
class UniformXSampler final : public PhasePointSampler {
  public:
    UniformXSampler(int n, double alpha) : n_(n), alpha_(alpha) {
        check_alpha(alpha);
        check_qubits(n, kMaxWordQubits, "uniform_x_sampler");
    }
    SamplerStrategy strategy() const override { return SamplerStrategy::UniformX; }
    int n() const override { return n_; }
    double alpha() const override { return alpha_; }
    double normalizer() const override { return alpha_ == 0.5 ? 1.0 : std::ldexp(1.0, -n_); }
    SampledPoint draw(Rng &rng) const override {
        return {PauliPoint(n_, rng() & low_mask(n_), 0), std::ldexp(1.0, -n_)};
    }
    double probability(const PauliPoint &a) const override { return a.az == 0 ? std::ldexp(1.0, -n_) : 0.0; }
    double coefficient(const PauliPoint &a) const override { return a.az == 0 ? std::ldexp(1.0, -n_) : 0.0; }

  private:
    int n_;
    double alpha_;
};

inline SamplerPtr uniform_x_sampler(int n, double alpha = 0.5) {
    return std::make_shared<UniformXSampler>(n, alpha);
}

/// K_j^{(N)}(q) = sum_l (-1)^l C(q,l) C(N-q, j-l).
inline double krawtchouk(int N, int j, int q) {
    double s = 0.0;
    for (int l = 0; l <= j; l++) {
        double t = binomial(q, l) * binomial(N - q, j - l);
        s += (l % 2) ? -t : t;
    }
    return s;
}

namespace detail {

/// Random subset of `size` positions among the set bits of `pool` (a mask over n bits).
inline Word random_subset(Word pool, int size, Rng &rng) {
    std::vector<Word> bits;
    for (Word p = pool; p; p &= p - 1) {
        bits.push_back(p & (~p + 1));
    }
    Word out = 0;
    for (int i = 0; i < size; i++) {
        std::size_t j = i + uniform_index(rng, bits.size() - i);
        std::swap(bits[i], bits[j]);
        out |= bits[i];
    }
    return out;
}

inline std::size_t draw_index(const std::vector<double> &w, double total, Rng &rng) {
    double u = uniform01(rng) * total, acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); i++) {
        if (w[i] <= 0.0) continue;
        acc += w[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

}  // namespace detail

/// l1 sampling of Dic(n,k). |a_x| = p = 2h is drawn from its marginal, then a_x uniformly,
/// then the weights (q1, q2) of a_z on and off supp(a_x), then a_z uniformly.
class DickeSampler final : public PhasePointSampler {
  public:
    DickeSampler(int n, int k) : n_(n), k_(k) {
        check_qubits(n, kMaxWordQubits, "dicke_sampler");
        if (k < 0 || 2 * k > n) {
            throw DomainError("dicke_sampler: need 0 <= k <= n/2");
        }
        scale_ = 1.0 / (std::ldexp(1.0, n) * binomial(n, k));
        for (int h = 0; 2 * h <= std::min(2 * k, n); h++) {
            int p = 2 * h;
            Weight w;
            w.a.resize(p + 1);
            w.b.resize(n - p + 1);
            for (int q = 0; q <= p; q++) {
                w.a[q] = binomial(p, q) * std::abs(krawtchouk(p, h, q));
                if (q % 2) w.a[q] = 0.0;  // odd overlap with a_x gives a zero coefficient
                w.sa += w.a[q];
            }
            for (int q = 0; q <= n - p; q++) {
                w.b[q] = binomial(n - p, q) * std::abs(krawtchouk(n - p, k - h, q));
                w.sb += w.b[q];
            }
            w.eta = binomial(n, p) * w.sa * w.sb * scale_;
            total_ += w.eta;
            weights_.push_back(std::move(w));
        }
        for (const auto &w : weights_) {
            eta_.push_back(w.eta);
        }
    }

    SamplerStrategy strategy() const override { return SamplerStrategy::Dicke; }
    int n() const override { return n_; }
    double alpha() const override { return 0.5; }
    double normalizer() const override { return total_; }

    SampledPoint draw(Rng &rng) const override {
        std::size_t h = detail::draw_index(eta_, total_, rng);
        const Weight &w = weights_[h];
        Word all = low_mask(n_);
        Word ax = detail::random_subset(all, static_cast<int>(2 * h), rng);
        int q1 = static_cast<int>(detail::draw_index(w.a, w.sa, rng));
        int q2 = static_cast<int>(detail::draw_index(w.b, w.sb, rng));
        Word az = detail::random_subset(ax, q1, rng) | detail::random_subset(all & ~ax, q2, rng);
        PauliPoint a(n_, ax, az);
        return {a, coefficient(a)};
    }

    /// Signed c(a) from the Krawtchouk factorization.
    double coefficient(const PauliPoint &a) const override {
        int p = popcount(a.ax);
        if (p % 2 || p > 2 * k_) {
            return 0.0;
        }
        int h = p / 2;
        int q1 = popcount(a.az & a.ax), q2 = popcount(a.az & ~a.ax);
        if (q1 % 2) {
            return 0.0;
        }
        double v = krawtchouk(p, h, q1) * krawtchouk(n_ - p, k_ - h, q2) * scale_;
        return (q1 / 2) % 2 ? -v : v;
    }

    double probability(const PauliPoint &a) const override {
        int p = popcount(a.ax);
        if (p % 2 || p > 2 * k_) {
            return 0.0;
        }
        const Weight &w = weights_[p / 2];
        int q1 = popcount(a.az & a.ax), q2 = popcount(a.az & ~a.ax);
        return (w.eta / total_) / binomial(n_, p) * (w.a[q1] / w.sa) / binomial(p, q1) * (w.b[q2] / w.sb) /
               binomial(n_ - p, q2);
    }

  private:
    struct Weight {
        std::vector<double> a, b;
        double sa = 0.0, sb = 0.0, eta = 0.0;
    };
    int n_, k_;
    double scale_ = 0.0, total_ = 0.0;
    std::vector<Weight> weights_;
    std::vector<double> eta_;
};

inline SamplerPtr dicke_sampler(int n, int k) {
    return std::make_shared<DickeSampler>(n, k);
}

inline constexpr int kBellQubitCap = 12;

/// l2 sampling by simulating Bell measurement on two copies of a real state.
class BellCircuitSampler final : public PhasePointSampler {
  public:
    explicit BellCircuitSampler(StateVector stripped) : psi_(std::move(stripped)) {
        int n = psi_.n();
        check_qubits(n, kBellQubitCap, "bell_circuit_sampler");
        for (Word x = 0; x < psi_.dim(); x++) {
            if (std::abs(psi_[x].imag()) > 1e-12) {
                throw DomainError("bell_circuit_sampler: state must be real");
            }
        }
        std::size_t d = psi_.dim();
        // Register 1 occupies the high n bits of the 2n-qubit index.
        std::vector<double> v(d * d);
        for (std::size_t x1 = 0; x1 < d; x1++) {
            for (std::size_t x2 = 0; x2 < d; x2++) {
                v[(x1 << n) | (x2 ^ x1)] = psi_[x1].real() * psi_[x2].real();  // transversal CNOTs
            }
        }
        // Hadamard layer on register 1: a WHT along the high index bits.
        std::vector<double> col(d);
        double s = std::ldexp(1.0, -n);
        for (std::size_t x2 = 0; x2 < d; x2++) {
            for (std::size_t x1 = 0; x1 < d; x1++) col[x1] = v[(x1 << n) | x2];
            fwht_inplace(col);
            for (std::size_t x1 = 0; x1 < d; x1++) v[(x1 << n) | x2] = col[x1] * std::sqrt(s);
        }
        double acc = 0.0;
        for (auto &e : v) {
            acc += e * e;
            e = acc;
        }
        cum_ = std::move(v);
        total_ = acc;
    }

    SamplerStrategy strategy() const override { return SamplerStrategy::BellCircuit; }
    int n() const override { return psi_.n(); }
    double alpha() const override { return 1.0; }
    double normalizer() const override { return std::ldexp(psi_.norm_squared(), -psi_.n()); }

    SampledPoint draw(Rng &rng) const override {
        double u = uniform01(rng) * total_;
        std::size_t b = std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
        b = std::min(b, cum_.size() - 1);
        PauliPoint a = point_of_outcome(b);
        return {a, std::ldexp(pauli_expectation(psi_, a), -psi_.n())};
    }

    double coefficient(const PauliPoint &a) const override {
        return std::ldexp(pauli_expectation(psi_, a), -psi_.n());
    }

    /// Exact output probability of the simulated circuit for the outcome that maps to a.
    double probability(const PauliPoint &a) const override {
        std::size_t b = (static_cast<std::size_t>(a.az) << psi_.n()) | a.ax;
        double prev = b == 0 ? 0.0 : cum_[b - 1];
        return (cum_[b] - prev) / total_;
    }

  private:
    /// (b1, b2) -> a = (b2, b1).
    PauliPoint point_of_outcome(std::size_t b) const {
        int n = psi_.n();
        return PauliPoint(n, static_cast<Word>(b & low_mask(n)), static_cast<Word>(b >> n));
    }

    StateVector psi_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

inline SamplerPtr bell_circuit_sampler(StateVector stripped) {
    return std::make_shared<BellCircuitSampler>(std::move(stripped));
}

/// l2 sampling of a real MPS by site-wise conditionals over (a_x, a_z).
class MpsL2Sampler final : public PhasePointSampler {
  public:
    explicit MpsL2Sampler(RealMPS m) : m_(std::move(m)) {
        int n = m_.n();
        std::size_t c = m_.chi(), c2 = c * c;
        g_.resize(n);
        for (int i = 0; i < n; i++) {
            for (int s = 0; s < 4; s++) {
                int ax = s >> 1, az = s & 1;
                auto &g = g_[i][s];
                g.assign(c2 * c2, 0.0);
                for (int x = 0; x < 2; x++) {
                    double sign = (az && x) ? -1.0 : 1.0;
                    const auto &u = m_.site(i, x);
                    const auto &w = m_.site(i, x ^ ax);
                    for (std::size_t p = 0; p < c; p++)
                        for (std::size_t q = 0; q < c; q++)
                            for (std::size_t r = 0; r < c; r++)
                                for (std::size_t t = 0; t < c; t++)
                                    g[(p * c + q) * c2 + r * c + t] += sign * u[p * c + r] * w[q * c + t];
                }
            }
        }
        // Right environments HR_k = H_k ... H_{n-1} |R R>.
        right_.resize(n + 1);
        right_[n].resize(c2);
        for (std::size_t p = 0; p < c; p++)
            for (std::size_t q = 0; q < c; q++)
                right_[n][p * c + q] = m_.right()[p] * m_.right()[q];
        for (int i = n - 1; i >= 0; i--) {
            auto h = m_.transfer(i);
            right_[i].assign(c2, 0.0);
            for (std::size_t a = 0; a < c2; a++)
                for (std::size_t b = 0; b < c2; b++)
                    right_[i][a] += h[a * c2 + b] * right_[i + 1][b];
        }
        left0_.resize(c2);
        for (std::size_t p = 0; p < c; p++)
            for (std::size_t q = 0; q < c; q++)
                left0_[p * c + q] = m_.left()[p] * m_.left()[q];
    }

    SamplerStrategy strategy() const override { return SamplerStrategy::MpsMarginal; }
    int n() const override { return m_.n(); }
    double alpha() const override { return 1.0; }
    double normalizer() const override { return std::ldexp(1.0, -m_.n()); }

    SampledPoint draw(Rng &rng) const override {
        return chain(nullptr, &rng, nullptr);
    }

    double probability(const PauliPoint &a) const override {
        double p = 1.0;
        chain(&a, nullptr, &p);
        return p;
    }

    /// Sign-carrying coefficient from the transfer contraction along a.
    double coefficient(const PauliPoint &a) const override {
        std::vector<double> gl = left0_;
        int n = m_.n();
        for (int i = 0; i < n; i++) {
            Word b = qubit_bit(n, i);
            gl = step(gl, i, ((a.ax & b) ? 2 : 0) | ((a.az & b) ? 1 : 0));
        }
        double xz = 0.0;
        for (std::size_t k = 0; k < gl.size(); k++) xz += gl[k] * right_[n][k];
        int w = popcount(a.ax & a.az);
        if (w % 2) return 0.0;
        return std::ldexp((w / 2) % 2 ? -xz : xz, -n);
    }

    /// Marginal probability of a prefix of k sites, 2^{-k} <GL GL| SW_23 |HR HR>.
    double marginal(const std::vector<int> &prefix) const {
        std::vector<double> gl = left0_;
        for (std::size_t i = 0; i < prefix.size(); i++) {
            gl = step(gl, static_cast<int>(i), prefix[i]);
        }
        return std::ldexp(quadratic(gl, right_[prefix.size()]), -static_cast<int>(prefix.size()));
    }

    /// Count of sites whose conditional sum drifted by more than 1e-6 (numerical-health warning).
    std::size_t drift_warnings() const { return drift_.load(); }

  private:
    std::vector<double> step(const std::vector<double> &gl, int i, int s) const {
        std::size_t c2 = gl.size();
        std::vector<double> out(c2, 0.0);
        const auto &g = g_[i][s];
        for (std::size_t a = 0; a < c2; a++) {
            double v = gl[a];
            if (v == 0.0) continue;
            const double *row = &g[a * c2];
            for (std::size_t b = 0; b < c2; b++) out[b] += v * row[b];
        }
        return out;
    }

    /// sum X[p1,q1] X[p2,q2] H[p1,p2] H[q1,q2] = sum H .* (X H X^T).
    double quadratic(const std::vector<double> &x, const std::vector<double> &h) const {
        std::size_t c = m_.chi();
        std::vector<double> xh(c * c, 0.0);
        for (std::size_t p = 0; p < c; p++)
            for (std::size_t q = 0; q < c; q++)
                for (std::size_t r = 0; r < c; r++) xh[p * c + r] += x[p * c + q] * h[q * c + r];
        double t = 0.0;
        for (std::size_t p1 = 0; p1 < c; p1++)
            for (std::size_t p2 = 0; p2 < c; p2++) {
                double s = 0.0;
                for (std::size_t r = 0; r < c; r++) s += xh[p1 * c + r] * x[p2 * c + r];
                t += h[p1 * c + p2] * s;
            }
        return t;
    }

    /// Walks the sites. Samples when rng is set, otherwise follows `fixed` and accumulates its probability.
    SampledPoint chain(const PauliPoint *fixed, Rng *rng, double *prob) const {
        int n = m_.n();
        std::vector<double> gl = left0_;
        double parent = 1.0;
        Word ax = 0, az = 0;
        for (int i = 0; i < n; i++) {
            std::array<std::vector<double>, 4> next;
            std::array<double, 4> w{};
            double sum = 0.0;
            for (int s = 0; s < 4; s++) {
                next[s] = step(gl, i, s);
                w[s] = std::max(0.0, std::ldexp(quadratic(next[s], right_[i + 1]), -(i + 1)));
                sum += w[s];
            }
            if (!(sum > 0.0)) {
                throw NumericalHealthError("mps_l2_sampler: vanishing marginal");
            }
            if (std::abs(sum - parent) > 1e-6 * std::max(parent, 1e-300) + 1e-300) {
                drift_.fetch_add(1);
            }
            int s;
            if (rng) {
                s = static_cast<int>(detail::draw_index(std::vector<double>(w.begin(), w.end()), sum, *rng));
            } else {
                Word b = qubit_bit(n, i);
                s = ((fixed->ax & b) ? 2 : 0) | ((fixed->az & b) ? 1 : 0);
                *prob *= w[s] / sum;
                if (w[s] == 0.0) {
                    return {};
                }
            }
            if (s & 2) ax |= qubit_bit(n, i);
            if (s & 1) az |= qubit_bit(n, i);
            parent = w[s];
            gl = std::move(next[s]);
        }
        // <L L| prod G |R R> = <X^{ax} Z^{az}>; T_a adds i^{|ax & az|}.
        std::size_t c2 = gl.size();
        double xz = 0.0;
        for (std::size_t a = 0; a < c2; a++) xz += gl[a] * right_[n][a];
        int w = popcount(ax & az);
        double t = (w / 2) % 2 ? -xz : xz;
        if (w % 2) t = 0.0;
        return {PauliPoint(n, ax, az), std::ldexp(t, -n)};
    }

    RealMPS m_;
    std::vector<std::array<std::vector<double>, 4>> g_;
    std::vector<std::vector<double>> right_;
    std::vector<double> left0_;
    mutable std::atomic<std::size_t> drift_{0};
};

inline SamplerPtr mps_l2_sampler(RealMPS m) {
    return std::make_shared<MpsL2Sampler>(std::move(m));
}

}  // namespace phasefe
