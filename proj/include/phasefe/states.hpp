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
#include <functional>
#include <numbers>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/linalg.hpp"
#include "phasefe/pauli.hpp"
#include "phasefe/state_vector.hpp"

/// @file states.hpp
/// @brief Target and input states: phase, hypergraph, Dicke and Haar states, phase stripping,
/// depolarizing noise, fidelity and measurement simulation.

namespace phasefe {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr int kStateCap = 24;

inline double wrap_angle(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

/// phi: F2^n -> [0, 2pi). Dense table, Boolean polynomial (values 0 or pi) or callback.
class PhaseFunction {
  public:
    struct Table {
        std::vector<double> angles;
    };
    /// Each monomial is a mask over qubit bits; the phase is pi * (number of satisfied monomials mod 2).
    struct Polynomial {
        std::vector<Word> monomials;
    };
    struct Callback {
        std::function<double(Word)> f;
    };

    PhaseFunction() = default;

    static PhaseFunction zero(int n) { return polynomial(n, {}); }

    static PhaseFunction table(int n, std::vector<double> angles) {
        if (n < 0 || n > kMaxWordQubits || angles.size() != (std::size_t{1} << n)) {
            throw DimensionError("PhaseFunction::table: need 2^n angles");
        }
        for (auto &a : angles) {
            a = wrap_angle(a);
        }
        return PhaseFunction(n, Table{std::move(angles)});
    }

    static PhaseFunction polynomial(int n, std::vector<Word> monomials) {
        for (Word m : monomials) {
            if (m & ~low_mask(n)) {
                throw DimensionError("PhaseFunction::polynomial: vertex out of range");
            }
        }
        return PhaseFunction(n, Polynomial{std::move(monomials)});
    }

    static PhaseFunction callback(int n, std::function<double(Word)> f) {
        return PhaseFunction(n, Callback{std::move(f)});
    }

    int n() const { return n_; }

    double operator()(Word x) const {
        if (auto *t = std::get_if<Table>(&rep_)) {
            return t->angles[x];
        }
        if (auto *p = std::get_if<Polynomial>(&rep_)) {
            int s = 0;
            for (Word m : p->monomials) {
                s ^= ((x & m) == m);
            }
            return s ? kPi : 0.0;
        }
        return wrap_angle(std::get<Callback>(rep_).f(x));
    }

    /// phi^(a)(x) = phi(x ^ ax) - phi(x) mod 2pi.
    double shifted_difference(Word ax, Word x) const { return wrap_angle((*this)(x ^ ax) - (*this)(x)); }

    /// True when every value lies in {0, pi} within 1e-12.
    bool is_real_valued() const {
        if (std::holds_alternative<Polynomial>(rep_)) {
            return true;
        }
        for (Word x = 0; x < (Word{1} << n_); x++) {
            double v = (*this)(x);
            if (std::min({v, std::abs(v - kPi), kTwoPi - v}) > 1e-12) {
                return false;
            }
        }
        return true;
    }

    const Polynomial *as_polynomial() const { return std::get_if<Polynomial>(&rep_); }

  private:
    template <typename R>
    PhaseFunction(int n, R r) : n_(n), rep_(std::move(r)) {}

    int n_ = 0;
    std::variant<Table, Polynomial, Callback> rep_;
};

/// D(phi)|v>.
inline StateVector apply_phase(const PhaseFunction &phi, const StateVector &v) {
    if (phi.n() != v.n()) {
        throw DimensionError("apply_phase: qubit counts differ");
    }
    std::vector<cplx> out(v.dim());
    for (Word x = 0; x < v.dim(); x++) {
        out[x] = v[x] * std::polar(1.0, phi(x));
    }
    return StateVector::from_amplitudes(v.n(), std::move(out), false);
}

inline StateVector plus_state(int n) {
    check_qubits(n, kStateCap, "plus_state");
    std::size_t d = std::size_t{1} << n;
    return StateVector::from_amplitudes(n, std::vector<cplx>(d, 1.0 / std::sqrt(static_cast<double>(d))), false);
}

inline StateVector phase_state(const PhaseFunction &phi) {
    return apply_phase(phi, plus_state(phi.n()));
}

struct HypergraphState {
    StateVector state;
    PhaseFunction phase;
};

/// prod_A C_A Z |+>^n with phase pi * sum_A prod_{i in A} x_i. Edges list 0-based vertices.
inline HypergraphState hypergraph_state(int n, const std::vector<std::vector<int>> &edges) {
    check_qubits(n, kStateCap, "hypergraph_state");
    std::vector<Word> monos;
    for (const auto &e : edges) {
        if (e.empty()) {
            throw DomainError("hypergraph_state: empty hyperedge");
        }
        Word m = 0;
        for (int v : e) {
            if (v < 0 || v >= n) {
                throw DomainError("hypergraph_state: vertex out of range");
            }
            if (m & qubit_bit(n, v)) {
                throw DomainError("hypergraph_state: repeated vertex in hyperedge");
            }
            m |= qubit_bit(n, v);
        }
        monos.push_back(m);
    }
    PhaseFunction phi = PhaseFunction::polynomial(n, std::move(monos));
    return {phase_state(phi), phi};
}

/// All C(n,3) triples.
inline std::vector<std::vector<int>> complete3_edges(int n) {
    std::vector<std::vector<int>> e;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            for (int k = j + 1; k < n; k++) {
                e.push_back({i, j, k});
            }
        }
    }
    return e;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

inline StateVector dicke_state(int n, int k) {
    check_qubits(n, kStateCap, "dicke_state");
    if (k < 0 || k > n) {
        throw DomainError("dicke_state: k out of range");
    }
    std::size_t d = std::size_t{1} << n;
    std::vector<cplx> a(d, 0.0);
    double amp = 1.0 / std::sqrt(binomial(n, k));
    for (Word x = 0; x < d; x++) {
        if (popcount(x) == k) {
            a[x] = amp;
        }
    }
    return StateVector::from_amplitudes(n, std::move(a), true);
}

/// I.i.d. complex Gaussian amplitudes, normalized.
inline StateVector haar_random(int n, Rng &rng) {
    check_qubits(n, kStateCap, "haar_random");
    std::vector<cplx> a(std::size_t{1} << n);
    for (auto &z : a) {
        double re = standard_normal(rng);
        double im = standard_normal(rng);
        z = {re, im};
    }
    return StateVector::from_amplitudes(n, std::move(a), true);
}

struct StrippedState {
    StateVector stripped;
    PhaseFunction phase;
};

/// |psi> -> (|psi_stripped>, phi) with psi = D(phi) psi_stripped; arg(0) := 0.
inline StrippedState phase_strip(const StateVector &psi) {
    std::vector<cplx> mod(psi.dim());
    std::vector<double> ang(psi.dim());
    for (Word x = 0; x < psi.dim(); x++) {
        double m = std::abs(psi[x]);
        mod[x] = m;
        ang[x] = m == 0.0 ? 0.0 : std::arg(psi[x]);
    }
    return {StateVector::from_amplitudes(psi.n(), std::move(mod), false), PhaseFunction::table(psi.n(), std::move(ang))};
}

/// Weighted pure components plus a maximally mixed part I/2^n.
struct TrajectoryMixture {
    std::vector<std::pair<double, StateVector>> components;
    double mixed_weight = 0.0;
};

/// Density operator as a trajectory mixture or a dense matrix.
class DensityState {
  public:
    DensityState() = default;

    static DensityState pure(StateVector psi) {
        TrajectoryMixture m;
        m.components.emplace_back(1.0, std::move(psi));
        return mixture(std::move(m));
    }

    static DensityState mixture(TrajectoryMixture m) {
        if (m.components.empty() && m.mixed_weight <= 0.0) {
            throw DomainError("DensityState: empty mixture");
        }
        int n = m.components.empty() ? -1 : m.components.front().second.n();
        double total = m.mixed_weight;
        if (m.mixed_weight < 0.0) {
            throw DomainError("DensityState: negative weight");
        }
        for (const auto &[w, s] : m.components) {
            if (w < 0.0) {
                throw DomainError("DensityState: negative weight");
            }
            if (s.n() != n) {
                throw DimensionError("DensityState: components differ in qubit count");
            }
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw DomainError("DensityState: weights must sum to 1");
        }
        DensityState d;
        d.n_ = n;
        d.rep_ = std::move(m);
        return d;
    }

    /// Maximally mixed state on n qubits.
    static DensityState maximally_mixed(int n) {
        TrajectoryMixture m;
        m.mixed_weight = 1.0;
        DensityState d;
        d.n_ = n;
        d.rep_ = std::move(m);
        return d;
    }

    static DensityState dense(int n, ComplexMatrix rho) {
        if (rho.dim() != (std::size_t{1} << n)) {
            throw DimensionError("DensityState::dense: dimension must be 2^n");
        }
        if (rho.hermiticity_error() > 1e-12) {
            throw DomainError("DensityState::dense: not Hermitian");
        }
        if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-9) {
            throw DomainError("DensityState::dense: trace must be 1");
        }
        DensityState d;
        d.n_ = n;
        d.rep_ = std::move(rho);
        return d;
    }

    int n() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }
    bool is_dense() const { return std::holds_alternative<ComplexMatrix>(rep_); }
    const ComplexMatrix &matrix() const { return std::get<ComplexMatrix>(rep_); }
    const TrajectoryMixture &trajectories() const { return std::get<TrajectoryMixture>(rep_); }

    ComplexMatrix to_dense() const {
        if (is_dense()) {
            return matrix();
        }
        const auto &m = trajectories();
        ComplexMatrix r(dim());
        for (const auto &[w, s] : m.components) {
            r += ComplexMatrix::projector(s.amplitudes(), w);
        }
        for (std::size_t i = 0; i < dim(); i++) {
            r(i, i) += m.mixed_weight / static_cast<double>(dim());
        }
        return r;
    }

    /// Trajectory form; dense matrices are eigendecomposed (tiny negative eigenvalues clipped).
    TrajectoryMixture to_mixture() const {
        if (!is_dense()) {
            return trajectories();
        }
        HermitianEigen e = jacobi_eigh(matrix());
        TrajectoryMixture m;
        double total = 0.0;
        for (std::size_t k = 0; k < e.values.size(); k++) {
            if (e.values[k] > 1e-14) {
                total += e.values[k];
            }
        }
        for (std::size_t k = 0; k < e.values.size(); k++) {
            if (e.values[k] > 1e-14) {
                m.components.emplace_back(e.values[k] / total,
                                          StateVector::from_amplitudes(n_, e.vectors[k], true));
            }
        }
        return m;
    }

  private:
    int n_ = 0;
    std::variant<TrajectoryMixture, ComplexMatrix> rep_;
};

/// (1 - p)|psi><psi| + p I / 2^n.
inline DensityState depolarize(const StateVector &psi, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("depolarize: p must lie in [0, 1]");
    }
    TrajectoryMixture m;
    if (p < 1.0) {
        m.components.emplace_back(1.0 - p, psi);
    }
    m.mixed_weight = p;
    if (m.components.empty()) {
        return DensityState::maximally_mixed(psi.n());
    }
    return DensityState::mixture(std::move(m));
}

/// Depolarizing strength giving fidelity f with the clean target.
inline double depolarizing_for_fidelity(int n, double f) {
    double d = std::ldexp(1.0, n);
    return (1.0 - f) * d / (d - 1.0);
}

/// <psi|rho|psi>.
inline double exact_fidelity(const DensityState &rho, const StateVector &psi) {
    if (rho.n() != psi.n()) {
        throw DimensionError("exact_fidelity: qubit counts differ");
    }
    if (rho.is_dense()) {
        const auto &m = rho.matrix();
        cplx t = 0.0;
        for (std::size_t i = 0; i < m.dim(); i++) {
            for (std::size_t j = 0; j < m.dim(); j++) {
                t += std::conj(psi[i]) * m(i, j) * psi[j];
            }
        }
        return t.real();
    }
    const auto &m = rho.trajectories();
    double f = m.mixed_weight / static_cast<double>(rho.dim());
    for (const auto &[w, s] : m.components) {
        f += w * std::norm(inner(s, psi));
    }
    return f;
}

/// tr(rho T_a).
inline double pauli_expectation(const DensityState &rho, const PauliPoint &a) {
    if (rho.n() != a.n) {
        throw DimensionError("pauli_expectation: qubit counts differ");
    }
    if (rho.is_dense()) {
        const auto &m = rho.matrix();
        if (std::abs(m.trace().real() - 1.0) > 1e-9) {
            throw DomainError("pauli_expectation: state not normalized");
        }
        cplx g = i_pow(popcount(a.ax & a.az));
        cplx t = 0.0;
        for (Word x = 0; x < m.dim(); x++) {
            cplx v = g * m(x, x ^ a.ax);
            t += parity(a.az & x) ? -v : v;
        }
        return t.real();
    }
    const auto &m = rho.trajectories();
    double t = a.is_identity() ? m.mixed_weight : 0.0;
    for (const auto &[w, s] : m.components) {
        t += w * pauli_expectation(s, a);
    }
    return t;
}

using Gate1 = std::array<cplx, 4>;  // row-major 2x2

inline Gate1 gate_h() {
    double r = 1.0 / std::sqrt(2.0);
    return {r, r, r, -r};
}
inline Gate1 gate_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Gate1 gate_s() { return {1.0, 0.0, 0.0, cplx(0.0, 1.0)}; }
/// H S^dagger: maps the +1 (-1) eigenvector of Y to |0> (|1>).
inline Gate1 gate_y_to_z() {
    double r = 1.0 / std::sqrt(2.0);
    return {r, cplx(0.0, -r), r, cplx(0.0, r)};
}

inline void apply_gate1(std::vector<cplx> &v, int n, int q, const Gate1 &g) {
    Word b = qubit_bit(n, q);
    for (Word x = 0; x < v.size(); x++) {
        if (x & b) {
            continue;
        }
        cplx a0 = v[x], a1 = v[x | b];
        v[x] = g[0] * a0 + g[1] * a1;
        v[x | b] = g[2] * a0 + g[3] * a1;
    }
}

inline void apply_cnot(std::vector<cplx> &v, int n, int control, int target) {
    Word c = qubit_bit(n, control), t = qubit_bit(n, target);
    for (Word x = 0; x < v.size(); x++) {
        if ((x & c) && !(x & t)) {
            std::swap(v[x], v[x | t]);
        }
    }
}

inline Gate1 frame_rotation(Basis b) {
    switch (b) {
        case Basis::X: return gate_h();
        case Basis::Y: return gate_y_to_z();
        default: return {1.0, 0.0, 0.0, 1.0};
    }
}

inline void rotate_into_frame(std::vector<cplx> &v, int n, const Frame &frame) {
    if (static_cast<int>(frame.size()) != n) {
        throw DimensionError("rotate_into_frame: frame length must equal n");
    }
    for (int q = 0; q < n; q++) {
        if (frame[q] != Basis::Z) {
            apply_gate1(v, n, q, frame_rotation(frame[q]));
        }
    }
}

/// Exact Born distribution of a pure state measured in a local frame.
inline std::vector<double> born_distribution(const StateVector &psi, const Frame &frame) {
    std::vector<cplx> v = psi.amplitudes();
    rotate_into_frame(v, psi.n(), frame);
    std::vector<double> p(v.size());
    for (std::size_t i = 0; i < v.size(); i++) {
        p[i] = std::norm(v[i]);
    }
    return p;
}

/// Exact Born distribution of a density state in a local frame.
inline std::vector<double> born_distribution(const DensityState &rho, const Frame &frame) {
    std::size_t d = rho.dim();
    int n = rho.n();
    if (rho.is_dense()) {
        // Rotate columns of rho then rows of the result: U rho U^dagger.
        ComplexMatrix m = rho.matrix();
        std::vector<cplx> col(d);
        for (std::size_t j = 0; j < d; j++) {
            for (std::size_t i = 0; i < d; i++) {
                col[i] = m(i, j);
            }
            rotate_into_frame(col, n, frame);
            for (std::size_t i = 0; i < d; i++) {
                m(i, j) = col[i];
            }
        }
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; i++) {
            std::vector<cplx> row(d);
            for (std::size_t j = 0; j < d; j++) {
                row[j] = std::conj(m(i, j));
            }
            rotate_into_frame(row, n, frame);
            p[i] = std::conj(row[i]).real();
        }
        return p;
    }
    const auto &mix = rho.trajectories();
    std::vector<double> p(d, mix.mixed_weight / static_cast<double>(d));
    for (const auto &[w, s] : mix.components) {
        auto q = born_distribution(s, frame);
        for (std::size_t i = 0; i < d; i++) {
            p[i] += w * q[i];
        }
    }
    return p;
}

/// Draw an index from unnormalized nonnegative weights.
inline std::size_t sample_discrete(const std::vector<double> &w, Rng &rng) {
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); i++) {
        if (w[i] <= 0.0) {
            continue;
        }
        acc += w[i];
        last = i;
        if (u < acc) {
            return i;
        }
    }
    return last;
}

inline Word measure_computational(const StateVector &psi, const Frame &frame, Rng &rng) {
    return static_cast<Word>(sample_discrete(born_distribution(psi, frame), rng));
}

/// Trajectory mixtures draw a component first; dense states sample the exact Born distribution.
inline Word measure_computational(const DensityState &rho, const Frame &frame, Rng &rng) {
    if (rho.is_dense()) {
        return static_cast<Word>(sample_discrete(born_distribution(rho, frame), rng));
    }
    const auto &mix = rho.trajectories();
    double u = uniform01(rng);
    double acc = 0.0;
    for (const auto &[w, s] : mix.components) {
        acc += w;
        if (u < acc) {
            return measure_computational(s, frame, rng);
        }
    }
    if (mix.mixed_weight > 0.0) {
        // Any local rotation leaves I/2^n invariant.
        return uniform_index(rng, rho.dim());
    }
    return measure_computational(mix.components.back().second, frame, rng);
}

/// Random stabilizer state from a circuit of X, H and CNOT gates (and S when `with_s`) on |0...0>.
inline StateVector random_stabilizer_state(int n, Rng &rng, bool with_s = false) {
    check_qubits(n, kStateCap, "random_stabilizer_state");
    std::vector<cplx> v = StateVector::basis(n, 0).amplitudes();
    int kinds = with_s ? 4 : 3;
    for (int g = 0; g < 6 * n; g++) {
        int kind = static_cast<int>(uniform_index(rng, kinds));
        int q = static_cast<int>(uniform_index(rng, n));
        if (kind == 0) {
            apply_gate1(v, n, q, gate_x());
        } else if (kind == 1) {
            apply_gate1(v, n, q, gate_h());
        } else if (kind == 2 && n > 1) {
            int t = static_cast<int>(uniform_index(rng, n - 1));
            apply_cnot(v, n, q, t >= q ? t + 1 : t);
        } else if (kind == 3) {
            apply_gate1(v, n, q, gate_s());
        }
    }
    return StateVector::from_amplitudes(n, std::move(v), true);
}

}  // namespace phasefe
