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
#include <exception>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/pauli.hpp"
#include "phasefe/samplers.hpp"
#include "phasefe/states.hpp"

/// @file estimation.hpp
/// @brief alpha-DFE, fan-out fidelity estimation (FOFE) and nonlinear DFE (NLDFE) shots,
/// aggregation and parallel shot execution.

namespace phasefe {

enum class Branch : unsigned char { None, Real, Imag, Both };

struct ShotRecord {
    double value = 0.0;
    PauliPoint point;
    int group = -1;
    Branch branch = Branch::None;
    Word outcome = 0;       ///< DFE/NLDFE outcome, or the FOFE real-branch (b1, b') word.
    Word outcome_imag = 0;  ///< FOFE imaginary-branch (b1', b'') word.
    double real_part = 0.0;
    double imag_part = 0.0;
};

/// Two-outcome POVM simulation: Bernoulli((1 + tr rho T_a)/2) or frame rotation plus parity.
enum class PovmPath { Bernoulli, Frame };

/// (-1)^p w(a).
inline ShotRecord dfe_shot(const DensityState &rho, const PhasePointSampler &sampler, Rng &rng,
                           PovmPath path = PovmPath::Frame) {
    if (rho.n() != sampler.n()) {
        throw DimensionError("dfe_shot: qubit counts differ");
    }
    SampledPoint s = sampler.draw(rng);
    if (s.coeff == 0.0) {
        throw NumericalHealthError("dfe_shot: sampled a zero coefficient");
    }
    double w = sampler.weight(s);
    ShotRecord r;
    r.point = s.a;
    int p;
    if (path == PovmPath::Bernoulli) {
        double p0 = 0.5 * (1.0 + pauli_expectation(rho, s.a));
        p = uniform01(rng) < p0 ? 0 : 1;
        r.outcome = static_cast<Word>(p);
    } else {
        DiagonalFrame f = diagonalizing_frame(s.a);
        r.outcome = measure_computational(rho, f.frame, rng);
        p = parity(r.outcome & f.support);
    }
    r.value = p ? -w : w;
    return r;
}

/// P(parity 0) of the frame measurement for a, from the exact Born distribution.
inline double dfe_parity_zero_probability(const DensityState &rho, const PauliPoint &a) {
    DiagonalFrame f = diagonalizing_frame(a);
    auto born = born_distribution(rho, f.frame);
    double p0 = 0.0;
    for (std::size_t b = 0; b < born.size(); b++) {
        if (!parity(static_cast<Word>(b) & f.support)) {
            p0 += born[b];
        }
    }
    return p0;
}

/// Shot expectation from exact sampling and outcome distributions (frame path).
inline double dfe_exact_expectation(const DensityState &rho, const PhasePointSampler &sampler) {
    int n = sampler.n();
    double e = 0.0;
    for (std::size_t i = 0; i < (std::size_t{1} << (2 * n)); i++) {
        PauliPoint a = PauliPoint::from_index(n, i);
        double pa = sampler.probability(a);
        if (pa == 0.0) {
            continue;
        }
        double w = sampler.weight({a, sampler.coefficient(a)});
        e += pa * w * (2.0 * dfe_parity_zero_probability(rho, a) - 1.0);
    }
    return e;
}

/// Sign convention of the imaginary FOFE branch. `Literal` multiplies sin by (-1)^{b1+1};
/// `Corrected` by (-1)^{b1}. See fofe_branch_value.
enum class ImagSign { Literal, Corrected };

inline constexpr ImagSign kDefaultImagSign = ImagSign::Corrected;

namespace detail {

/// Hadamard-test output on n+1 qubits (ancilla = qubit 0): |+>, T_a applied when the ancilla
/// is 0, then H on the ancilla. With `y_basis` the ancilla is rotated for a Y measurement.
inline std::vector<cplx> hadamard_test_state(const StateVector &phi, const PauliPoint &a, bool y_basis) {
    int n = phi.n();
    std::size_t d = phi.dim();
    std::vector<cplx> v(2 * d);
    double r = 1.0 / std::sqrt(2.0);
    StateVector t = apply_pauli(a, phi);
    for (std::size_t x = 0; x < d; x++) {
        v[x] = r * t[x];      // ancilla 0 block: controlled T_a fired
        v[d + x] = r * phi[x];  // ancilla 1 block
    }
    apply_gate1(v, n + 1, 0, gate_h());
    if (y_basis) {
        apply_gate1(v, n + 1, 0, gate_y_to_z());
    }
    return v;
}

inline const StateVector &trajectory_component(const TrajectoryMixture &m, int n, Rng &rng, StateVector &scratch) {
    double u = uniform01(rng), acc = 0.0;
    for (const auto &[w, s] : m.components) {
        acc += w;
        if (u < acc) {
            return s;
        }
    }
    if (m.mixed_weight > 0.0) {
        scratch = StateVector::basis(n, uniform_index(rng, std::size_t{1} << n));
        return scratch;
    }
    return m.components.back().second;
}

}  // namespace detail

/// Post-processing of one branch outcome word (b1 is the top bit of the n+1 bit word).
inline double fofe_branch_value(const PhaseFunction &phi, const PauliPoint &a, Word outcome, bool imag,
                                ImagSign sign = kDefaultImagSign) {
    int n = phi.n();
    int b1 = static_cast<int>(outcome >> n) & 1;
    Word rest = outcome & low_mask(n);
    double ang = phi.shifted_difference(a.ax, rest);
    if (!imag) {
        return b1 ? -std::cos(ang) : std::cos(ang);
    }
    int e = sign == ImagSign::Literal ? b1 + 1 : b1;
    return (e % 2) ? -std::sin(ang) : std::sin(ang);
}

/// Prepared FOFE input: trajectories of rho and a draw of its pure components.
class FofeInput {
  public:
    explicit FofeInput(const DensityState &rho) : n_(rho.n()), mix_(rho.to_mixture()) {}
    int n() const { return n_; }
    const TrajectoryMixture &mixture() const { return mix_; }

    /// One circuit execution on a fresh copy; returns the (b1, b') outcome word.
    Word execute(const PauliPoint &a, bool y_basis, Rng &rng) const {
        StateVector scratch;
        const StateVector &phi = detail::trajectory_component(mix_, n_, rng, scratch);
        auto v = detail::hadamard_test_state(phi, a, y_basis);
        std::vector<double> p(v.size());
        for (std::size_t i = 0; i < v.size(); i++) {
            p[i] = std::norm(v[i]);
        }
        return static_cast<Word>(sample_discrete(p, rng));
    }

  private:
    int n_;
    TrajectoryMixture mix_;
};

/// One FOFE shot: real branch, plus the imaginary branch on a second copy unless phi is real.
inline ShotRecord fofe_shot(const FofeInput &in, const PhasePointSampler &sampler, const PhaseFunction &phi,
                            bool phi_is_real, Rng &rng, ImagSign sign = kDefaultImagSign) {
    if (in.n() != sampler.n() || phi.n() != sampler.n()) {
        throw DimensionError("fofe_shot: qubit counts differ");
    }
    SampledPoint s = sampler.draw(rng);
    if (s.coeff == 0.0) {
        throw NumericalHealthError("fofe_shot: sampled a zero coefficient");
    }
    double w = sampler.weight(s);
    ShotRecord r;
    r.point = s.a;
    r.outcome = in.execute(s.a, false, rng);
    r.real_part = w * fofe_branch_value(phi, s.a, r.outcome, false, sign);
    r.branch = Branch::Real;
    if (!phi_is_real) {
        r.outcome_imag = in.execute(s.a, true, rng);
        r.imag_part = w * fofe_branch_value(phi, s.a, r.outcome_imag, true, sign);
        r.branch = Branch::Both;
    }
    r.value = r.real_part + r.imag_part;
    return r;
}

inline ShotRecord fofe_shot(const DensityState &rho, const PhasePointSampler &sampler, const PhaseFunction &phi,
                            Rng &rng) {
    return fofe_shot(FofeInput(rho), sampler, phi, phi.is_real_valued(), rng);
}

/// Exact branch expectations on a pure input for point a: (E real, E imag) before weighting.
inline std::pair<double, double> fofe_exact_branches(const StateVector &phi_in, const PhaseFunction &phi,
                                                     const PauliPoint &a, ImagSign sign = kDefaultImagSign) {
    double er = 0.0, ei = 0.0;
    for (int y = 0; y < 2; y++) {
        auto v = detail::hadamard_test_state(phi_in, a, y == 1);
        for (std::size_t b = 0; b < v.size(); b++) {
            double p = std::norm(v[b]);
            if (p == 0.0) continue;
            double val = fofe_branch_value(phi, a, static_cast<Word>(b), y == 1, sign);
            (y ? ei : er) += p * val;
        }
    }
    return {er, ei};
}

/// Shot expectation from exact sampling and circuit outcome distributions.
inline double fofe_exact_expectation(const DensityState &rho, const PhasePointSampler &sampler,
                                     const PhaseFunction &phi, ImagSign sign = kDefaultImagSign) {
    int n = sampler.n();
    TrajectoryMixture mix = rho.to_mixture();
    bool skip_imag = phi.is_real_valued();
    double e = 0.0;
    for (std::size_t i = 0; i < (std::size_t{1} << (2 * n)); i++) {
        PauliPoint a = PauliPoint::from_index(n, i);
        double pa = sampler.probability(a);
        if (pa == 0.0) continue;
        double w = sampler.weight({a, sampler.coefficient(a)});
        double acc = 0.0;
        auto add = [&](double q, const StateVector &s) {
            auto [er, ei] = fofe_exact_branches(s, phi, a, sign);
            acc += q * (er + (skip_imag ? 0.0 : ei));
        };
        for (const auto &[q, s] : mix.components) add(q, s);
        if (mix.mixed_weight > 0.0) {
            double q = mix.mixed_weight / static_cast<double>(std::size_t{1} << n);
            for (Word x = 0; x < (Word{1} << n); x++) add(q, StateVector::basis(n, x));
        }
        e += pa * w * acc;
    }
    return e;
}

/// Gate-level description of the FOFE circuit for a: fan-out from the ancilla plus local
/// Cliffords V with V X V^dagger = T_{a_i}. Documentation only.
inline std::vector<std::string> fofe_circuit_description(const PauliPoint &a) {
    std::vector<std::string> lines{"prepare anc |+>", "X anc"};
    std::vector<int> targets;
    for (int q = 0; q < a.n; q++) {
        Word b = qubit_bit(a.n, q);
        bool x = a.ax & b, z = a.az & b;
        if (!x && !z) continue;
        targets.push_back(q);
        if (z && !x) lines.push_back("H q" + std::to_string(q));
        if (z && x) lines.push_back("Sdg q" + std::to_string(q) + "; H q" + std::to_string(q));
    }
    std::string fan = "fanout anc ->";
    for (int q : targets) fan += " q" + std::to_string(q);
    lines.push_back(fan);
    for (int q : targets) {
        Word b = qubit_bit(a.n, q);
        bool x = a.ax & b, z = a.az & b;
        if (z && !x) lines.push_back("H q" + std::to_string(q));
        if (z && x) lines.push_back("H q" + std::to_string(q) + "; S q" + std::to_string(q));
    }
    lines.push_back("X anc");
    lines.push_back("H anc");
    lines.push_back("measure anc (Z for real branch, Y for imaginary branch), measure q in Z");
    return lines;
}

struct QWCGroup {
    Frame frame;
    std::size_t frame_index = 0;  ///< Ternary index, qubit 0 most significant, digits Z=0 X=1 Y=2.
    std::vector<double> chat;     ///< WHT of the assigned coefficients.
    double weight = 0.0;          ///< ||chat||_inf
    std::size_t claimed = 0;      ///< Number of nonzero coefficients assigned.
};

enum class GroupOrdering { Canonical, GreedyWeight };

struct QWCPartition {
    int n = 0;
    std::vector<QWCGroup> groups;
    double total_weight = 0.0;
    std::vector<double> cumulative;
};

inline constexpr int kQwcCap = 9;

inline Frame frame_from_index(int n, std::size_t t) {
    Frame f(n, Basis::Z);
    for (int q = n - 1; q >= 0; q--) {
        f[q] = static_cast<Basis>(t % 3);
        t /= 3;
    }
    return f;
}

/// Frames in canonical or greedy order; each group claims the still-unclaimed Paulis it diagonalizes.
inline QWCPartition build_qwc_partition(const CoeffVector &c, GroupOrdering ordering = GroupOrdering::Canonical) {
    int n = c.n;
    if (n > kQwcCap) {
        throw CapExceeded("build_qwc_partition: n=" + std::to_string(n) + " exceeds cap 9",
                          std::pow(3.0, n) * std::ldexp(1.0, n));
    }
    std::size_t nframes = 1, d = std::size_t{1} << n;
    for (int i = 0; i < n; i++) nframes *= 3;
    std::vector<char> claimed(c.values.size(), 0);
    std::vector<std::size_t> point_of(d);

    auto points = [&](const Frame &f) {
        for (Word m = 0; m < d; m++) point_of[m] = frame_pauli(f, m).index();
    };
    auto mass = [&](const Frame &f) {
        points(f);
        double s = 0.0;
        for (Word m = 0; m < d; m++)
            if (!claimed[point_of[m]]) s += std::abs(c.values[point_of[m]]);
        return s;
    };

    QWCPartition part;
    part.n = n;
    auto take = [&](std::size_t t) {
        QWCGroup g;
        g.frame = frame_from_index(n, t);
        g.frame_index = t;
        points(g.frame);
        g.chat.assign(d, 0.0);
        for (Word m = 0; m < d; m++) {
            std::size_t idx = point_of[m];
            if (claimed[idx]) continue;
            claimed[idx] = 1;
            g.chat[m] = c.values[idx];
            g.claimed += std::abs(c.values[idx]) > 0.0;
        }
        fwht_inplace(g.chat);
        for (double v : g.chat) g.weight = std::max(g.weight, std::abs(v));
        if (g.weight > 1e-15) part.groups.push_back(std::move(g));
    };

    if (ordering == GroupOrdering::Canonical) {
        for (std::size_t t = 0; t < nframes; t++) take(t);
    } else {
        // Lazy greedy on unclaimed mass; masses only shrink as Paulis are claimed.
        using Item = std::pair<double, std::size_t>;
        auto cmp = [](const Item &x, const Item &y) {
            return x.first < y.first || (x.first == y.first && x.second > y.second);
        };
        std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
        for (std::size_t t = 0; t < nframes; t++) pq.push({mass(frame_from_index(n, t)), t});
        while (!pq.empty()) {
            Item top = pq.top();
            pq.pop();
            double cur = mass(frame_from_index(n, top.second));
            if (cur <= 0.0) continue;
            if (!pq.empty() && cur < pq.top().first) {
                pq.push({cur, top.second});
                continue;
            }
            take(top.second);
        }
    }
    double acc = 0.0;
    for (const auto &g : part.groups) {
        acc += g.weight;
        part.cumulative.push_back(acc);
    }
    part.total_weight = acc;
    return part;
}

/// W * chat_b / ||chat||_inf for a group drawn proportionally to its weight.
inline ShotRecord nldfe_shot(const DensityState &rho, const QWCPartition &part, Rng &rng) {
    if (part.groups.empty()) {
        throw DomainError("nldfe_shot: empty partition");
    }
    if (rho.n() != part.n) {
        throw DimensionError("nldfe_shot: qubit counts differ");
    }
    double u = uniform01(rng) * part.total_weight;
    std::size_t k = std::upper_bound(part.cumulative.begin(), part.cumulative.end(), u) - part.cumulative.begin();
    k = std::min(k, part.groups.size() - 1);
    const QWCGroup &g = part.groups[k];
    ShotRecord r;
    r.group = static_cast<int>(k);
    r.outcome = measure_computational(rho, g.frame, rng);
    r.value = part.total_weight * g.chat[r.outcome] / g.weight;
    return r;
}

inline double nldfe_exact_expectation(const DensityState &rho, const QWCPartition &part) {
    double e = 0.0;
    for (const auto &g : part.groups) {
        auto born = born_distribution(rho, g.frame);
        for (std::size_t b = 0; b < born.size(); b++) e += born[b] * g.chat[b];
    }
    return e;
}

/// Median of K batch means of N values each; K = 1 is the plain mean of the first N.
inline double median_of_means(const std::vector<double> &values, std::size_t batch_size, std::size_t batches) {
    if (batch_size == 0 || batches == 0 || values.size() < batch_size * batches) {
        throw DomainError("median_of_means: need at least N*K values with N, K >= 1");
    }
    std::vector<double> means(batches);
    for (std::size_t k = 0; k < batches; k++) {
        double s = 0.0;
        for (std::size_t i = 0; i < batch_size; i++) s += values[k * batch_size + i];
        means[k] = s / static_cast<double>(batch_size);
    }
    std::sort(means.begin(), means.end());
    if (batches % 2) return means[batches / 2];
    return 0.5 * (means[batches / 2 - 1] + means[batches / 2]);
}

struct EstimateReport {
    std::size_t shots = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< Unbiased sample variance.
    double mom = 0.0;
    std::size_t mom_batches = 1;
    double std_error = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  ///< mean +- 3 standard errors
    double exact_fidelity = std::numeric_limits<double>::quiet_NaN();
    double variance_bound = std::numeric_limits<double>::quiet_NaN();
    std::size_t executions = 0;  ///< Circuit executions (copies of rho) consumed.
};

/// Mean, variance and MOM over the given values. mom_batches = 1 gives the plain mean.
inline EstimateReport summarize(const std::vector<double> &values, std::size_t mom_batches = 1) {
    if (values.empty()) {
        throw DomainError("summarize: no shots");
    }
    EstimateReport r;
    r.shots = values.size();
    double ns = static_cast<double>(values.size());
    double s = 0.0;
    for (double v : values) s += v;
    r.mean = s / ns;
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.variance = values.size() > 1 ? ss / (ns - 1.0) : 0.0;
    r.std_error = std::sqrt(r.variance / ns);
    r.ci_low = r.mean - 3.0 * r.std_error;
    r.ci_high = r.mean + 3.0 * r.std_error;
    r.mom_batches = std::max<std::size_t>(1, std::min(mom_batches, values.size()));
    r.mom = median_of_means(values, values.size() / r.mom_batches, r.mom_batches);
    return r;
}

inline constexpr std::size_t kShotChunk = 256;

/// Generates `total` items in fixed chunks; chunk j uses RNG stream j of `seed`. The output
/// does not depend on the worker count.
template <typename R, typename Fn>
std::vector<R> parallel_generate(std::size_t total, unsigned workers, std::uint64_t seed, Fn &&fn) {
    if (total == 0) {
        throw DomainError("parallel_generate: zero items");
    }
    std::vector<R> out(total);
    std::size_t nchunks = (total + kShotChunk - 1) / kShotChunk;
    auto work = [&](std::size_t first_chunk, std::size_t stride) {
        for (std::size_t j = first_chunk; j < nchunks; j += stride) {
            Rng rng = make_stream(seed, j);
            std::size_t end = std::min(total, (j + 1) * kShotChunk);
            for (std::size_t i = j * kShotChunk; i < end; i++) out[i] = fn(rng);
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1 || nchunks == 1) {
        work(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                work(w, workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

template <typename ShotFn>
std::vector<ShotRecord> run_shots(std::size_t total, unsigned workers, std::uint64_t seed, ShotFn &&fn) {
    return parallel_generate<ShotRecord>(total, workers, seed, std::forward<ShotFn>(fn));
}

inline std::vector<double> shot_values(const std::vector<ShotRecord> &shots) {
    std::vector<double> v(shots.size());
    for (std::size_t i = 0; i < shots.size(); i++) v[i] = shots[i].value;
    return v;
}

struct MultiTargetResult {
    std::vector<EstimateReport> reports;
    std::size_t executions = 0;
};

/// One outcome stream, post-processed once per target phase.
inline MultiTargetResult fofe_multi_target(const DensityState &rho, const PhasePointSampler &sampler,
                                           const std::vector<PhaseFunction> &phases, std::size_t shots,
                                           std::uint64_t seed, unsigned workers = 1) {
    if (phases.empty()) {
        throw DomainError("fofe_multi_target: no targets");
    }
    for (const auto &p : phases) {
        if (p.n() != sampler.n()) throw DimensionError("fofe_multi_target: phase with mismatched n");
    }
    std::vector<char> real(phases.size());
    bool any_complex = false;
    for (std::size_t t = 0; t < phases.size(); t++) {
        real[t] = phases[t].is_real_valued();
        any_complex |= !real[t];
    }
    FofeInput in(rho);
    auto recs = run_shots(shots, workers, seed, [&](Rng &rng) {
        SampledPoint s = sampler.draw(rng);
        ShotRecord r;
        r.point = s.a;
        r.value = sampler.weight(s);
        r.outcome = in.execute(s.a, false, rng);
        if (any_complex) r.outcome_imag = in.execute(s.a, true, rng);
        r.branch = any_complex ? Branch::Both : Branch::Real;
        return r;
    });
    MultiTargetResult res;
    res.executions = shots * (any_complex ? 2 : 1);
    std::vector<double> vals(shots);
    for (std::size_t t = 0; t < phases.size(); t++) {
        for (std::size_t i = 0; i < shots; i++) {
            const auto &r = recs[i];
            double v = fofe_branch_value(phases[t], r.point, r.outcome, false);
            if (!real[t]) v += fofe_branch_value(phases[t], r.point, r.outcome_imag, true);
            vals[i] = r.value * v;
        }
        EstimateReport rep = summarize(vals);
        rep.executions = res.executions;
        res.reports.push_back(rep);
    }
    return res;
}

}  // namespace phasefe
