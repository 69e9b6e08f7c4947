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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "phasefe/estimation.hpp"
#include "phasefe/haar.hpp"
#include "phasefe/io.hpp"
#include "phasefe/magic.hpp"
#include "phasefe/mps.hpp"
#include "phasefe/samplers.hpp"
#include "phasefe/states.hpp"
#include "phasefe/table.hpp"
#include "phasefe/tomography.hpp"

/// @file experiments.hpp
/// @brief Experiment runners behind the command-line tool. Each returns a ResultTable.

namespace phasefe {

inline constexpr const char *kVersion = "0.1.0";

struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool deterministic = false;

    int n = 7;
    int n_min = 1, n_max = 10;
    std::size_t shots = 5000;
    std::size_t mom_batches = 1;
    double alpha = 0.5;

    std::string target = "complete3";  ///< plus, complete3, hypergraph, random-phase, dicke, haar, mps
    std::string scheme = "fofe";       ///< dfe, fofe, nldfe
    std::string edges;                 ///< "0-1-2,1-2-3"; empty means random 3-uniform
    std::string input;                 ///< optional JSON input state
    int k = 2;
    int chi = 4;
    double p = std::numeric_limits<double>::quiet_NaN();
    double fidelity = std::numeric_limits<double>::quiet_NaN();

    std::size_t samples = 50;               ///< Haar copies / random states / rank samples
    std::size_t dirichlet_samples = 10000;
    int mc_cap = 8;                          ///< haar-scan: exact l1 Monte Carlo up to this n
    int emp_cap = 7;                         ///< hypergraph-bounds: empirical second moment up to this n
    std::string stripped = "both";           ///< haar-scan: exact, dirichlet, both
    std::string formula = "class_count";
    std::string terms = "dominant";
    std::string ordering = "canonical";
    std::string path = "direct";             ///< tomography: direct, fofe
    std::vector<std::size_t> ladder{100, 1000, 10000, 100000};
    std::size_t repetitions = 10;
    std::vector<double> alphas{0.0, 0.5, 1.0, 2.0};
    bool verify = false;
};

namespace detail {

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

inline void require(bool ok, const std::string &msg) {
    if (!ok) throw DomainError(msg);
}

inline void cap(int n, int limit, const std::string &what) {
    if (n > limit) {
        throw CapExceeded(what + ": n=" + std::to_string(n) + " exceeds cap " + std::to_string(limit),
                          std::ldexp(1.0, n));
    }
}

/// Target RNG stream, disjoint from the shot chunk streams.
inline Rng target_rng(std::uint64_t seed, std::uint64_t tag = 0) {
    return make_stream(seed, 0xfffffff000000000ULL + tag);
}

inline ResultTable start_table(const ExperimentConfig &cfg, std::vector<std::string> columns) {
    ResultTable t(std::move(columns));
    t.add_meta("phasefe", kVersion);
    t.add_meta("command", cfg.command);
    t.add_meta("seed", std::to_string(cfg.seed));
    if (!cfg.deterministic) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        t.add_meta("timestamp", buf);
    }
    return t;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// "0-1-2,1-2-3" -> {{0,1,2},{1,2,3}}.
inline std::vector<std::vector<int>> parse_edges(const std::string &s) {
    std::vector<std::vector<int>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::vector<int> e;
        std::stringstream es(item);
        std::string v;
        while (std::getline(es, v, '-')) {
            try {
                std::size_t used = 0;
                e.push_back(std::stoi(v, &used));
                if (used != v.size()) throw std::invalid_argument(v);
            } catch (const std::exception &) {
                throw DomainError("bad hyperedge '" + item + "'; expected vertices joined by '-'");
            }
        }
        out.push_back(e);
    }
    return out;
}

/// Erdos-Renyi 3-uniform hypergraph, each triple kept with probability 1/2.
inline std::vector<std::vector<int>> random_triples(int n, Rng &rng) {
    std::vector<std::vector<int>> e;
    for (auto &t : complete3_edges(n))
        if (rng() >> 63) e.push_back(t);
    return e;
}

/// Target psi = D(phase) stripped, plus the FOFE sampler over the stripped coefficients.
struct Target {
    std::string family;
    StateVector psi;
    StateVector stripped;
    PhaseFunction phase;
    SamplerPtr fofe_sampler;
    std::optional<RealMPS> mps;
};

inline Target make_target(const ExperimentConfig &cfg, int n) {
    detail::require(n >= 1, "n must be >= 1");
    check_qubits(n, kStateCap, "target");
    Rng rng = detail::target_rng(cfg.seed);
    Target t;
    t.family = cfg.target;
    auto phase_target = [&](PhaseFunction phi) {
        t.phase = phi;
        t.stripped = plus_state(n);
        t.psi = apply_phase(phi, t.stripped);
        t.fofe_sampler = uniform_x_sampler(n, 0.5);
    };
    if (cfg.target == "plus") {
        phase_target(PhaseFunction::zero(n));
    } else if (cfg.target == "complete3") {
        phase_target(hypergraph_state(n, complete3_edges(n)).phase);
    } else if (cfg.target == "hypergraph") {
        auto e = cfg.edges.empty() ? random_triples(n, rng) : parse_edges(cfg.edges);
        phase_target(hypergraph_state(n, e).phase);
    } else if (cfg.target == "random-phase") {
        std::vector<double> ang(std::size_t{1} << n);
        for (auto &a : ang) a = kTwoPi * uniform01(rng);
        phase_target(PhaseFunction::table(n, std::move(ang)));
    } else if (cfg.target == "dicke") {
        detail::require(cfg.k >= 0 && 2 * cfg.k <= n, "dicke target needs 0 <= k <= n/2");
        t.psi = dicke_state(n, cfg.k);
        t.stripped = t.psi;
        t.phase = PhaseFunction::zero(n);
        t.fofe_sampler = dicke_sampler(n, cfg.k);
    } else if (cfg.target == "haar") {
        detail::cap(n, kBellQubitCap, "haar target");
        t.psi = haar_random(n, rng);
        auto s = phase_strip(t.psi);
        t.stripped = s.stripped;
        t.phase = s.phase;
        t.fofe_sampler = bell_circuit_sampler(t.stripped);
    } else if (cfg.target == "mps") {
        detail::cap(n, kMpsConvertQubitCap, "mps target");
        detail::require(cfg.chi >= 1 && cfg.chi <= kMpsConvertChiCap, "mps target needs 1 <= chi <= 8");
        t.mps = random_real_mps(n, cfg.chi, rng);
        t.psi = mps_to_statevector(*t.mps);
        // Any split psi = D(phi) chi works; the MPS itself with a flat phase.
        t.stripped = t.psi;
        t.phase = PhaseFunction::zero(n);
        t.fofe_sampler = mps_l2_sampler(*t.mps);
    } else {
        throw DomainError("unknown target '" + cfg.target +
                          "' (plus, complete3, hypergraph, random-phase, dicke, haar, mps)");
    }
    return t;
}

inline DensityState make_input(const ExperimentConfig &cfg, const Target &t) {
    if (!cfg.input.empty()) {
        DensityState rho = density_from_json(load_json(cfg.input));
        if (rho.n() != t.psi.n()) throw DimensionError("input state has a different qubit count than the target");
        return rho;
    }
    detail::require(std::isnan(cfg.p) || std::isnan(cfg.fidelity), "give at most one of --p and --fidelity");
    double p = 0.0;
    if (!std::isnan(cfg.fidelity)) p = depolarizing_for_fidelity(t.psi.n(), cfg.fidelity);
    if (!std::isnan(cfg.p)) p = cfg.p;
    detail::require(p >= 0.0 && p <= 1.0, "depolarizing p must lie in [0, 1]");
    return depolarize(t.psi, p);
}

/// Shots of one scheme against a target; fills exact fidelity and the variance scale.
inline EstimateReport estimate(const std::string &scheme, const Target &t, const DensityState &rho, double alpha,
                               std::size_t shots, std::size_t mom_batches, std::uint64_t seed, unsigned workers,
                               std::vector<double> *values = nullptr) {
    detail::require(shots >= 1, "shots must be >= 1");
    int n = t.psi.n();
    std::vector<ShotRecord> recs;
    double bound = detail::nan();
    std::size_t per_shot = 1;
    if (scheme == "dfe") {
        check_alpha(alpha);
        SamplerPtr s;
        if (t.family == "dicke" && alpha == 0.5 && n > kCoeffCap) {
            s = t.fofe_sampler;
        } else if (t.family == "mps" && alpha == 1.0) {
            s = t.fofe_sampler;
        } else {
            detail::cap(n, kCoeffCap, "dfe exact sampler");
            s = exact_sampler(pauli_coefficients(t.psi), alpha);
        }
        bound = alpha == 0.5 ? s->normalizer() * s->normalizer() : detail::nan();
        if (alpha == 1.0 && n <= kCoeffCap) bound = dfe_variance_bound(t.psi, 1.0);
        recs = run_shots(shots, workers, seed, [&](Rng &r) { return dfe_shot(rho, *s, r); });
    } else if (scheme == "fofe") {
        FofeInput in(rho);
        bool real = t.phase.is_real_valued();
        const PhasePointSampler &s = *t.fofe_sampler;
        if (s.alpha() == 0.5) bound = s.normalizer() * s.normalizer() * (real ? 1.0 : 2.0);
        per_shot = real ? 1 : 2;
        recs = run_shots(shots, workers, seed, [&](Rng &r) { return fofe_shot(in, s, t.phase, real, r); });
    } else if (scheme == "nldfe") {
        detail::cap(n, kQwcCap, "nldfe partition");
        QWCPartition part = build_qwc_partition(pauli_coefficients(t.psi));
        bound = part.total_weight * part.total_weight;
        recs = run_shots(shots, workers, seed, [&](Rng &r) { return nldfe_shot(rho, part, r); });
    } else {
        throw DomainError("unknown scheme '" + scheme + "' (dfe, fofe, nldfe)");
    }
    auto v = shot_values(recs);
    EstimateReport rep = summarize(v, mom_batches);
    rep.exact_fidelity = exact_fidelity(rho, t.psi);
    rep.variance_bound = bound;
    rep.executions = shots * per_shot;
    if (values) *values = std::move(v);
    return rep;
}

inline ResultTable cmd_fig2a(const ExperimentConfig &cfg) {
    detail::require(cfg.n >= 3, "fig2a needs n >= 3");
    detail::cap(cfg.n, kCoeffCap, "fig2a");
    ExperimentConfig c = cfg;
    c.target = "complete3";
    if (std::isnan(c.p) && std::isnan(c.fidelity)) c.fidelity = 0.8955;
    Target t = make_target(c, c.n);
    DensityState rho = make_input(c, t);
    ResultTable tab = detail::start_table(cfg, {"scheme", "n", "shots", "executions", "mean", "variance", "std_error",
                                                "mom", "min_value", "max_value", "non_unit_shots", "exact_fidelity",
                                                "variance_bound"});
    tab.add_meta("n", std::to_string(c.n));
    tab.add_meta("target", "complete 3-uniform hypergraph");
    double p = std::isnan(c.p) ? depolarizing_for_fidelity(c.n, c.fidelity) : c.p;
    tab.add_meta("depolarizing_p", p);
    tab.add_meta("shots", std::to_string(c.shots));
    for (std::string scheme : {"dfe", "fofe"}) {
        std::vector<double> v;
        // Distinct shot streams per scheme.
        std::uint64_t seed = splitmix64(c.seed + (scheme == "dfe" ? 1 : 2));
        EstimateReport r = estimate(scheme, t, rho, 0.5, c.shots, c.mom_batches, seed, c.workers, &v);
        double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
        long long off = 0;
        for (double x : v) off += std::abs(std::abs(x) - 1.0) > 1e-12;
        tab.add_row({scheme, static_cast<long long>(c.n), static_cast<long long>(r.shots),
                     static_cast<long long>(r.executions), r.mean, r.variance, r.std_error, r.mom, lo, hi, off,
                     r.exact_fidelity, r.variance_bound});
    }
    return tab;
}

inline ResultTable cmd_haar_scan(const ExperimentConfig &cfg) {
    detail::require(cfg.n_min >= 1 && cfg.n_min <= cfg.n_max, "haar-scan needs 1 <= n_min <= n_max");
    detail::require(cfg.samples >= 2 && cfg.dirichlet_samples >= 2, "haar-scan needs >= 2 samples");
    detail::require(cfg.stripped == "exact" || cfg.stripped == "dirichlet" || cfg.stripped == "both",
                    "--stripped must be exact, dirichlet or both");
    bool use_exact = cfg.stripped != "dirichlet", use_dir = cfg.stripped != "exact";
    if (!use_dir) detail::cap(cfg.n_max, 6, "haar-scan exact stripped norm (use --stripped dirichlet above)");
    detail::cap(cfg.mc_cap, kCoeffCap, "haar-scan Monte Carlo");
    detail::cap(cfg.n_max, 20, "haar-scan Dirichlet estimator");
    StrippedFormula formula = parse_stripped_formula(cfg.formula);
    detail::require(cfg.terms == "dominant" || cfg.terms == "full", "--terms must be dominant or full");
    StrippedTerms terms = cfg.terms == "full" ? StrippedTerms::Full : StrippedTerms::Dominant;

    ResultTable tab = detail::start_table(
        cfg, {"n", "l1_mc", "l1_mc_stderr", "l1_closed", "l1_closed_literal", "stripped_mc", "stripped_mc_stderr",
              "stripped_est", "stripped_est_stderr", "stripped_est_full", "ratio", "ratio_stderr"});
    tab.add_meta("haar_samples", std::to_string(cfg.samples));
    tab.add_meta("dirichlet_samples", std::to_string(cfg.dirichlet_samples));
    tab.add_meta("formula", stripped_formula_name(formula));
    tab.add_meta("terms", cfg.terms);
    double sxy = 0.0, sxx = 0.0;
    int fit_lo = -1, fit_hi = -1;
    for (int n = cfg.n_min; n <= cfg.n_max; n++) {
        Rng rng = detail::target_rng(cfg.seed, static_cast<std::uint64_t>(n));
        double l1m = detail::nan(), l1e = detail::nan(), sm = detail::nan(), se = detail::nan();
        if (n <= cfg.mc_cap) {
            double a = 0, a2 = 0, b = 0, b2 = 0;
            bool strip = use_exact && n <= 6;
            for (std::size_t i = 0; i < cfg.samples; i++) {
                StateVector psi = haar_random(n, rng);
                double v = norms(psi, {}).l1;
                a += v;
                a2 += v * v;
                if (strip) {
                    double w = norms(phase_strip(psi).stripped, {}).l1;
                    b += w;
                    b2 += w * w;
                }
            }
            double s = static_cast<double>(cfg.samples);
            l1m = a / s;
            l1e = std::sqrt(std::max(0.0, (a2 - a * a / s) / (s - 1.0)) / s);
            if (strip) {
                sm = b / s;
                se = std::sqrt(std::max(0.0, (b2 - b * b / s) / (s - 1.0)) / s);
            }
            if (n >= 4) {
                double x = std::exp2(0.5 * n);
                sxy += x * l1m;
                sxx += x * x;
                if (fit_lo < 0) fit_lo = n;
                fit_hi = n;
            }
        }
        HaarClosedForm cf = haar_l1_mean_closed_form(n);
        double est = detail::nan(), este = detail::nan(), full = detail::nan(), ratio = detail::nan(),
               ratioe = detail::nan();
        if (use_dir && n >= 2) {
            Rng drng = make_stream(cfg.seed, 0xfffffff100000000ULL + static_cast<std::uint64_t>(n));
            MeanEstimate m = haar_stripped_l1_estimate(n, cfg.dirichlet_samples, drng, formula, terms);
            est = m.mean;
            este = m.std_error;
            full = terms == StrippedTerms::Full ? est : est + stripped_small_terms(n);
            ratio = est / cf.value;
            ratioe = este / cf.value;
        }
        tab.add_row({static_cast<long long>(n), l1m, l1e, cf.value, cf.literal, sm, se, est, este, full, ratio,
                     ratioe});
    }
    if (sxx > 0.0) {
        tab.add_meta("fitted_prefactor", sxy / sxx);
        tab.add_meta("fit_range", std::to_string(fit_lo) + ".." + std::to_string(fit_hi));
    }
    return tab;
}

inline ResultTable cmd_nldfe_compare(const ExperimentConfig &cfg) {
    detail::require(cfg.n_min >= 1 && cfg.n_min <= cfg.n_max, "nldfe-compare needs 1 <= n_min <= n_max");
    detail::cap(cfg.n_max, kQwcCap, "nldfe-compare");
    detail::require(cfg.samples >= 1 && cfg.shots >= 2, "nldfe-compare needs samples >= 1 and shots >= 2");
    GroupOrdering ord = cfg.ordering == "greedy" ? GroupOrdering::GreedyWeight : GroupOrdering::Canonical;
    detail::require(cfg.ordering == "greedy" || cfg.ordering == "canonical", "--ordering must be canonical or greedy");
    ResultTable tab = detail::start_table(cfg, {"n", "mean_l1", "mean_w", "improvement", "min_margin", "stabilizer_w",
                                                "dfe_variance", "nldfe_variance", "exact_fidelity"});
    tab.add_meta("samples", std::to_string(cfg.samples));
    tab.add_meta("ordering", cfg.ordering);
    tab.add_meta("variance_pair", "Haar target, input depolarized with p=0.1");
    for (int n = cfg.n_min; n <= cfg.n_max; n++) {
        Rng rng = detail::target_rng(cfg.seed, static_cast<std::uint64_t>(n));
        double sl = 0, sw = 0, margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cfg.samples; i++) {
            CoeffVector c = pauli_coefficients(haar_random(n, rng));
            double l1 = norms(c, {}).l1;
            double w = build_qwc_partition(c, ord).total_weight;
            sl += l1;
            sw += w;
            margin = std::min(margin, l1 - w);
        }
        double stab_w = build_qwc_partition(pauli_coefficients(random_stabilizer_state(n, rng)), ord).total_weight;

        ExperimentConfig c = cfg;
        c.target = "haar";
        c.seed = splitmix64(cfg.seed + static_cast<std::uint64_t>(n));
        Target t = make_target(c, n);
        DensityState rho = depolarize(t.psi, 0.1);
        EstimateReport d = estimate("dfe", t, rho, 0.5, cfg.shots, 1, c.seed, cfg.workers);
        EstimateReport g = estimate("nldfe", t, rho, 0.5, cfg.shots, 1, splitmix64(c.seed), cfg.workers);
        double s = static_cast<double>(cfg.samples);
        tab.add_row({static_cast<long long>(n), sl / s, sw / s, sl / sw, margin, stab_w, d.variance, g.variance,
                     d.exact_fidelity});
    }
    return tab;
}

inline ResultTable cmd_hypergraph_bounds(const ExperimentConfig &cfg) {
    detail::require(cfg.n_min >= 3 && cfg.n_min <= cfg.n_max, "hypergraph-bounds needs 3 <= n_min <= n_max");
    detail::cap(cfg.n_max, 16, "hypergraph-bounds");
    detail::cap(cfg.emp_cap, kCoeffCap, "hypergraph-bounds empirical second moment");
    detail::require(cfg.samples >= 1 && cfg.shots >= 2, "hypergraph-bounds needs samples >= 1 and shots >= 2");
    ResultTable tab = detail::start_table(
        cfg, {"n", "sampled_lower", "sampled_upper", "random_l1sq", "closed_lower", "closed_upper", "complete_l1sq",
              "empirical_second_moment", "second_moment_stderr", "closed_ratio", "count_identity"});
    tab.add_meta("rank_samples", std::to_string(cfg.samples));
    tab.add_meta("shots", std::to_string(cfg.shots));
    for (int n = cfg.n_min; n <= cfg.n_max; n++) {
        Rng rng = detail::target_rng(cfg.seed, static_cast<std::uint64_t>(n));
        CubicForm rnd = CubicForm::from_edges(n, random_triples(n, rng));
        VarianceBounds sb = hypergraph_variance_bounds(rnd, cfg.samples, rng);
        double rl1 = hypergraph_l1_by_rank(rnd);
        CubicForm kn = CubicForm::from_edges(n, complete3_edges(n));
        double kl1 = hypergraph_l1_by_rank(kn);
        VarianceBounds cb = complete3_variance_bounds(n);
        double m2 = detail::nan(), m2e = detail::nan();
        if (n <= cfg.emp_cap) {
            ExperimentConfig c = cfg;
            c.target = "complete3";
            Target t = make_target(c, n);
            std::vector<double> v;
            estimate("dfe", t, DensityState::pure(t.psi), 0.5, cfg.shots, 1,
                     splitmix64(cfg.seed + static_cast<std::uint64_t>(n)), cfg.workers, &v);
            double a = 0, a2 = 0;
            for (double x : v) {
                a += x * x;
                a2 += x * x * x * x;
            }
            double s = static_cast<double>(v.size());
            m2 = a / s;
            m2e = std::sqrt(std::max(0.0, (a2 - a * a / s) / (s - 1.0)) / s);
        }
        BigInt sum = 0;
        for (int r = 0; r <= n; r += 2) sum += hollow_symmetric_rank_count(n, r);
        long long ok = sum == (BigInt(1) << (n * (n - 1) / 2));
        tab.add_row({static_cast<long long>(n), sb.lower, sb.upper, rl1 * rl1, cb.lower, cb.upper, kl1 * kl1, m2, m2e,
                     cb.lower / cb.upper, ok});
    }
    return tab;
}

inline ResultTable cmd_run(const ExperimentConfig &cfg) {
    Target t = make_target(cfg, cfg.n);
    DensityState rho = make_input(cfg, t);
    EstimateReport r = estimate(cfg.scheme, t, rho, cfg.alpha, cfg.shots, cfg.mom_batches, cfg.seed, cfg.workers);
    ResultTable tab = detail::start_table(cfg, {"scheme", "target", "n", "alpha", "shots", "executions", "mean",
                                                "variance", "std_error", "mom", "mom_batches", "ci_low", "ci_high",
                                                "exact_fidelity", "variance_bound"});
    tab.add_meta("sampler", strategy_name(t.fofe_sampler->strategy()));
    if (!cfg.input.empty()) tab.add_meta("input", cfg.input);
    if (!std::isnan(cfg.p)) tab.add_meta("depolarizing_p", cfg.p);
    if (!std::isnan(cfg.fidelity)) tab.add_meta("target_fidelity", cfg.fidelity);
    if (cfg.target == "hypergraph") tab.add_meta("edges", cfg.edges.empty() ? "random" : cfg.edges);
    if (cfg.target == "dicke") tab.add_meta("k", std::to_string(cfg.k));
    if (cfg.target == "mps") tab.add_meta("chi", std::to_string(cfg.chi));
    double alpha = cfg.scheme == "fofe" ? t.fofe_sampler->alpha() : cfg.scheme == "nldfe" ? detail::nan() : cfg.alpha;
    tab.add_row({cfg.scheme, cfg.target, static_cast<long long>(cfg.n), alpha, static_cast<long long>(r.shots),
                 static_cast<long long>(r.executions), r.mean, r.variance, r.std_error, r.mom,
                 static_cast<long long>(r.mom_batches), r.ci_low, r.ci_high, r.exact_fidelity, r.variance_bound});
    return tab;
}

/// Least-squares slope of log(error) against log(shots).
inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

inline ResultTable cmd_tomography(const ExperimentConfig &cfg) {
    detail::require(cfg.n >= 1, "tomography needs n >= 1");
    detail::cap(cfg.n, kMubCap, "tomography");
    detail::require(cfg.path == "direct" || cfg.path == "fofe", "--path must be direct or fofe");
    detail::require(cfg.repetitions >= 1 && !cfg.ladder.empty(), "tomography needs repetitions >= 1 and a shot ladder");
    for (auto s : cfg.ladder) detail::require(s >= 1, "shot ladder entries must be >= 1");
    double p = std::isnan(cfg.p) ? 0.2 : cfg.p;
    detail::require(p >= 0.0 && p <= 1.0, "depolarizing p must lie in [0, 1]");
    Rng rng = detail::target_rng(cfg.seed);
    DensityState rho = depolarize(haar_random(cfg.n, rng), p);
    MUBFamily fam = mub_family(cfg.n);
    ComplexMatrix truth = rho.to_dense();

    ResultTable tab = detail::start_table(cfg, {"n", "shots", "path", "mean_l2_error", "std_l2_error", "min_l2_error",
                                                "max_l2_error"});
    tab.add_meta("input", "Haar state depolarized with p=" + ResultTable::format(p));
    tab.add_meta("repetitions", std::to_string(cfg.repetitions));
    auto row = [&](std::size_t shots, const std::vector<double> &e) {
        double m = 0, m2 = 0;
        for (double x : e) m += x;
        m /= static_cast<double>(e.size());
        for (double x : e) m2 += (x - m) * (x - m);
        double sd = e.size() > 1 ? std::sqrt(m2 / static_cast<double>(e.size() - 1)) : 0.0;
        tab.add_row({static_cast<long long>(cfg.n), static_cast<long long>(shots), cfg.path, m, sd,
                     *std::min_element(e.begin(), e.end()), *std::max_element(e.begin(), e.end())});
        return m;
    };
    row(0, {(psd_project(reconstruct(exact_coefficients(rho, fam), fam)) - truth).frobenius_norm()});
    std::vector<double> xs, ys;
    for (std::size_t shots : cfg.ladder) {
        std::vector<double> e;
        for (std::size_t r = 0; r < cfg.repetitions; r++) {
            std::uint64_t s = splitmix64(cfg.seed ^ (shots * 0x9e3779b97f4a7c15ULL) ^ r);
            CoefficientTable t;
            if (cfg.path == "fofe") {
                t = estimate_coefficients_fofe(rho, fam, shots, s, cfg.workers);
            } else {
                Rng srng = make_stream(s, 0);
                t = estimate_coefficients(rho, fam, shots, srng);
            }
            e.push_back((psd_project(reconstruct(t, fam)) - truth).frobenius_norm());
        }
        xs.push_back(static_cast<double>(shots));
        ys.push_back(row(shots, e));
    }
    if (xs.size() >= 2) tab.add_meta("loglog_slope", loglog_slope(xs, ys));
    return tab;
}

inline ResultTable cmd_mps_sample(const ExperimentConfig &cfg) {
    detail::require(cfg.n >= 1 && cfg.chi >= 1, "mps-sample needs n >= 1 and chi >= 1");
    detail::cap(cfg.n, kMaxWordQubits, "mps-sample");
    detail::require(cfg.chi <= 64, "mps-sample: chi <= 64");
    if (cfg.verify) {
        detail::cap(cfg.n, 8, "mps-sample --verify enumeration");
        detail::require(cfg.chi <= kMpsConvertChiCap, "mps-sample --verify needs chi <= 8");
    }
    detail::require(cfg.shots >= 1, "mps-sample needs shots >= 1");
    Rng rng = detail::target_rng(cfg.seed);
    RealMPS m = random_real_mps(cfg.n, cfg.chi, rng);
    MpsL2Sampler s(m);
    auto t0 = std::chrono::steady_clock::now();
    auto draws = parallel_generate<SampledPoint>(cfg.shots, cfg.workers, cfg.seed, [&](Rng &r) { return s.draw(r); });
    double secs = detail::seconds_since(t0);
    long long neg = 0;
    for (const auto &d : draws) neg += d.coeff < 0.0;
    double tv = detail::nan();
    if (cfg.verify) {
        CoeffVector c = pauli_coefficients(mps_to_statevector(m));
        double z = 0.0;
        for (double v : c.values) z += v * v;
        tv = 0.0;
        for (std::size_t i = 0; i < c.values.size(); i++) {
            tv += std::abs(s.probability(PauliPoint::from_index(cfg.n, i)) - c.values[i] * c.values[i] / z);
        }
        tv *= 0.5;
    }
    ResultTable tab = detail::start_table(cfg, {"n", "chi", "draws", "tv_distance", "negative_fraction",
                                                "root_marginal", "drift_warnings"});
    if (!cfg.deterministic) tab.add_meta("seconds_per_draw", secs / static_cast<double>(cfg.shots));
    tab.add_row({static_cast<long long>(cfg.n), static_cast<long long>(cfg.chi), static_cast<long long>(cfg.shots), tv,
                 static_cast<double>(neg) / static_cast<double>(cfg.shots), s.marginal({}),
                 static_cast<long long>(s.drift_warnings())});
    return tab;
}

inline ResultTable cmd_dicke(const ExperimentConfig &cfg) {
    detail::require(cfg.n >= 1 && cfg.k >= 0 && 2 * cfg.k <= cfg.n, "dicke needs n >= 1 and 0 <= k <= n/2");
    detail::cap(cfg.n, kMaxWordQubits, "dicke");
    if (cfg.verify) detail::cap(cfg.n, kCoeffCap, "dicke --verify enumeration");
    detail::require(cfg.shots >= 1, "dicke needs shots >= 1");
    DickeSampler s(cfg.n, cfg.k);
    auto t0 = std::chrono::steady_clock::now();
    auto draws = parallel_generate<SampledPoint>(cfg.shots, cfg.workers, cfg.seed, [&](Rng &r) { return s.draw(r); });
    double secs = detail::seconds_since(t0);
    long long even = 0;
    for (const auto &d : draws) even += popcount(d.a.ax) % 2 == 0 && popcount(d.a.ax & d.a.az) % 2 == 0;
    double tv = detail::nan();
    if (cfg.verify) {
        CoeffVector c = pauli_coefficients(dicke_state(cfg.n, cfg.k));
        double z = 0.0;
        for (double v : c.values) z += std::abs(v);
        tv = 0.0;
        for (std::size_t i = 0; i < c.values.size(); i++) {
            tv += std::abs(s.probability(PauliPoint::from_index(cfg.n, i)) - std::abs(c.values[i]) / z);
        }
        tv *= 0.5;
    }
    ResultTable tab = detail::start_table(cfg, {"n", "k", "draws", "tv_distance", "even_fraction", "l1_norm"});
    if (!cfg.deterministic) tab.add_meta("seconds_per_draw", secs / static_cast<double>(cfg.shots));
    tab.add_row({static_cast<long long>(cfg.n), static_cast<long long>(cfg.k), static_cast<long long>(cfg.shots), tv,
                 static_cast<double>(even) / static_cast<double>(cfg.shots), s.normalizer()});
    return tab;
}

inline ResultTable cmd_norms(const ExperimentConfig &cfg) {
    StateVector psi;
    std::string label = cfg.target;
    if (!cfg.input.empty()) {
        psi = state_from_json(load_json(cfg.input));
        label = cfg.input;
    } else {
        psi = make_target(cfg, cfg.n).psi;
    }
    detail::cap(psi.n(), kCoeffCap, "norms");
    std::vector<std::string> cols{"target", "n", "l0", "l1", "l2", "l1_squared"};
    for (double a : cfg.alphas) cols.push_back("sre_" + ResultTable::format(a));
    ResultTable tab = detail::start_table(cfg, cols);
    NormReport r = norms(psi, cfg.alphas);
    std::vector<Cell> row{label, static_cast<long long>(psi.n()), r.l0, r.l1, r.l2, r.l1 * r.l1};
    for (double a : cfg.alphas) row.push_back(r.sre.at(a));
    tab.add_row(row);
    return tab;
}

inline ResultTable run_experiment(const ExperimentConfig &cfg) {
    const std::string &c = cfg.command;
    if (c == "fig2a") return cmd_fig2a(cfg);
    if (c == "haar-scan") return cmd_haar_scan(cfg);
    if (c == "nldfe-compare") return cmd_nldfe_compare(cfg);
    if (c == "hypergraph-bounds") return cmd_hypergraph_bounds(cfg);
    if (c == "run") return cmd_run(cfg);
    if (c == "tomography") return cmd_tomography(cfg);
    if (c == "mps-sample") return cmd_mps_sample(cfg);
    if (c == "dicke") return cmd_dicke(cfg);
    if (c == "norms") return cmd_norms(cfg);
    throw DomainError("unknown command '" + c + "'");
}

}  // namespace phasefe
