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
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/estimation.hpp"
#include "phasefe/linalg.hpp"
#include "phasefe/pauli.hpp"
#include "phasefe/samplers.hpp"
#include "phasefe/states.hpp"

/// @file tomography.hpp
/// @brief l2 state tomography from mutually unbiased bases.

namespace phasefe {

inline constexpr int kMubCap = 4;

struct MUBBasis {
    std::vector<PauliPoint> pauli_class;           ///< 2^n - 1 commuting nontrivial Paulis.
    std::vector<std::vector<cplx>> vectors;         ///< 2^n orthonormal common eigenvectors.
    ComplexMatrix unitary;                          ///< Columns are the basis vectors.
    bool computational = false;
};

struct MUBFamily {
    int n = 0;
    std::vector<MUBBasis> bases;
};

namespace gf2n {

inline Word irreducible(int n) {
    switch (n) {
        case 1: return 0b11;
        case 2: return 0b111;
        case 3: return 0b1011;
        case 4: return 0b10011;
        default: throw DomainError("gf2n: degree not tabulated");
    }
}

inline Word mul(Word a, Word b, int n) {
    Word poly = irreducible(n), r = 0;
    for (int i = 0; i < n; i++) {
        if ((b >> i) & 1) r ^= a;
        a <<= 1;
        if ((a >> n) & 1) a ^= poly;
    }
    return r;
}

/// Tr(y) = y + y^2 + ... + y^{2^{n-1}}, returned as 0 or 1.
inline int trace(Word y, int n) {
    Word t = 0, p = y;
    for (int i = 0; i < n; i++) {
        t ^= p;
        p = mul(p, p, n);
    }
    return static_cast<int>(t & 1);
}

}  // namespace gf2n

/// Symmetric matrix (as row masks over qubit bits) of the form (x, y) -> Tr(a x y).
inline std::vector<Word> spread_matrix(Word a, int n) {
    std::vector<Word> rows(n, 0);
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            Word bij = gf2n::mul(Word{1} << i, Word{1} << j, n);
            if (gf2n::trace(gf2n::mul(a, bij, n), n)) rows[i] |= qubit_bit(n, j);
        }
    }
    return rows;
}

inline Word apply_f2(const std::vector<Word> &rows, Word x) {
    int n = static_cast<int>(rows.size());
    Word y = 0;
    for (int i = 0; i < n; i++)
        if (parity(rows[i] & x)) y |= qubit_bit(n, i);
    return y;
}

/// Verifies 2^n + 1 classes of 2^n - 1 pairwise commuting Paulis partitioning all nontrivial Paulis.
inline bool verify_pauli_spread(int n, const std::vector<std::vector<PauliPoint>> &classes) {
    std::size_t d = std::size_t{1} << n;
    if (classes.size() != d + 1) return false;
    std::vector<char> seen(d * d, 0);
    for (const auto &cl : classes) {
        if (cl.size() != d - 1) return false;
        for (std::size_t i = 0; i < cl.size(); i++) {
            if (cl[i].is_identity() || seen[cl[i].index()]) return false;
            seen[cl[i].index()] = 1;
            for (std::size_t j = 0; j < i; j++)
                if (symplectic_product(cl[i], cl[j])) return false;
        }
    }
    return true;
}

/// Spread from symmetric matrices: Z class plus {(x, M x)} for each M in the set.
inline std::vector<std::vector<PauliPoint>> classes_from_matrices(int n, const std::vector<std::vector<Word>> &mats) {
    std::size_t d = std::size_t{1} << n;
    std::vector<std::vector<PauliPoint>> classes;
    std::vector<PauliPoint> zc;
    for (Word z = 1; z < d; z++) zc.emplace_back(n, 0, z);
    classes.push_back(zc);
    for (const auto &m : mats) {
        std::vector<PauliPoint> cl;
        for (Word x = 1; x < d; x++) cl.emplace_back(n, x, apply_f2(m, x));
        classes.push_back(cl);
    }
    return classes;
}

/// Backtracking search for 2^n symmetric matrices with pairwise invertible differences.
inline std::vector<std::vector<Word>> search_symmetric_spread(int n) {
    int npairs = n * (n + 1) / 2;
    std::vector<std::vector<Word>> all;
    for (Word code = 0; code < (Word{1} << npairs); code++) {
        std::vector<Word> m(n, 0);
        int k = 0;
        for (int i = 0; i < n; i++)
            for (int j = i; j < n; j++, k++)
                if ((code >> k) & 1) {
                    m[i] |= qubit_bit(n, j);
                    m[j] |= qubit_bit(n, i);
                }
        all.push_back(m);
    }
    auto invertible_diff = [&](const std::vector<Word> &a, const std::vector<Word> &b) {
        F2Matrix f(n, n);
        for (int i = 0; i < n; i++)
            for (int j = 0; j < n; j++)
                if (((a[i] ^ b[i]) & qubit_bit(n, j))) f.set(i, j, true);
        return static_cast<int>(f2_rank(f)) == n;
    };
    std::size_t need = std::size_t{1} << n;
    std::vector<std::size_t> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t start) {
        if (chosen.size() == need) return true;
        for (std::size_t c = start; c < all.size(); c++) {
            bool ok = true;
            for (std::size_t s : chosen)
                if (!invertible_diff(all[s], all[c])) { ok = false; break; }
            if (!ok) continue;
            chosen.push_back(c);
            if (rec(c + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (!rec(0)) throw NumericalHealthError("search_symmetric_spread: no spread found");
    std::vector<std::vector<Word>> out;
    for (std::size_t s : chosen) out.push_back(all[s]);
    return out;
}

namespace detail {

/// Common eigenvectors of commuting generators, indexed by the sign pattern of the generators.
/// Each vector is the largest projection prod_i (I + s_i P_i)/2 |x> over basis states x.
inline std::vector<std::vector<cplx>> common_eigenbasis(int n, const std::vector<PauliPoint> &gens) {
    std::size_t d = std::size_t{1} << n;
    std::vector<std::vector<cplx>> out(d);
    for (Word s = 0; s < d; s++) {
        double best = 0.0;
        for (Word x = 0; x < d; x++) {
            std::vector<cplx> a = StateVector::basis(n, x).amplitudes();
            for (int i = 0; i < n; i++) {
                std::vector<cplx> t(d);
                cplx g = i_pow(popcount(gens[i].ax & gens[i].az));
                for (Word y = 0; y < d; y++) t[y ^ gens[i].ax] = (parity(gens[i].az & y) ? -g : g) * a[y];
                double sg = (s >> i) & 1 ? -1.0 : 1.0;
                for (std::size_t k = 0; k < d; k++) a[k] = 0.5 * (a[k] + sg * t[k]);
            }
            double nrm = 0.0;
            for (const auto &z : a) nrm += std::norm(z);
            if (nrm > best + 1e-12) {
                best = nrm;
                for (auto &z : a) z /= std::sqrt(nrm);
                out[s] = a;
            }
        }
    }
    return out;
}

}  // namespace detail

/// 2^n + 1 mutually unbiased stabilizer bases from a symplectic spread over GF(2^n).
inline MUBFamily mub_family(int n) {
    check_qubits(n, kMubCap, "mub_family");
    std::size_t d = std::size_t{1} << n;
    std::vector<std::vector<Word>> mats;
    for (Word a = 0; a < d; a++) mats.push_back(spread_matrix(a, n));
    auto classes = classes_from_matrices(n, mats);
    if (!verify_pauli_spread(n, classes)) {
        classes = classes_from_matrices(n, search_symmetric_spread(n));
        if (!verify_pauli_spread(n, classes)) throw NumericalHealthError("mub_family: spread verification failed");
    }
    MUBFamily fam;
    fam.n = n;
    for (std::size_t c = 0; c < classes.size(); c++) {
        MUBBasis b;
        b.pauli_class = classes[c];
        b.computational = c == 0;
        if (b.computational) {
            for (Word x = 0; x < d; x++) b.vectors.push_back(StateVector::basis(n, x).amplitudes());
        } else {
            std::vector<PauliPoint> gens;
            for (int i = 0; i < n; i++) {
                Word x = qubit_bit(n, i);
                gens.emplace_back(n, x, apply_f2(mats[c - 1], x));
            }
            b.vectors = detail::common_eigenbasis(n, gens);
        }
        b.unitary = ComplexMatrix(d);
        for (std::size_t j = 0; j < d; j++)
            for (std::size_t i = 0; i < d; i++) b.unitary(i, j) = b.vectors[j][i];
        fam.bases.push_back(std::move(b));
    }
    return fam;
}

/// Euclidean projection onto the probability simplex (sort and threshold).
inline std::vector<double> simplex_project(const std::vector<double> &v) {
    if (v.empty()) throw DomainError("simplex_project: empty vector");
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError("simplex_project: non-finite entry");
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < u.size(); j++) {
        cum += u[j];
        double t = (cum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); i++) out[i] = std::max(0.0, v[i] - theta);
    return out;
}

struct CoefficientTable {
    std::vector<std::vector<double>> raw;        ///< Per basis, estimated <phi|rho|phi>.
    std::vector<std::vector<double>> projected;  ///< Rows projected onto the simplex.
};

inline std::vector<double> basis_probabilities(const ComplexMatrix &rho, const MUBBasis &b) {
    std::vector<double> p;
    for (const auto &v : b.vectors) {
        auto rv = rho.apply(v);
        cplx t = 0.0;
        for (std::size_t i = 0; i < v.size(); i++) t += std::conj(v[i]) * rv[i];
        p.push_back(t.real());
    }
    return p;
}

/// Exact rows (infinite statistics).
inline CoefficientTable exact_coefficients(const DensityState &rho, const MUBFamily &fam) {
    if (rho.n() != fam.n) throw DimensionError("exact_coefficients: qubit counts differ");
    ComplexMatrix m = rho.to_dense();
    CoefficientTable t;
    for (const auto &b : fam.bases) {
        t.raw.push_back(basis_probabilities(m, b));
        t.projected.push_back(simplex_project(t.raw.back()));
    }
    return t;
}

/// Empirical frequencies from `shots` measurements per basis.
inline CoefficientTable estimate_coefficients(const DensityState &rho, const MUBFamily &fam, std::size_t shots,
                                              Rng &rng) {
    if (shots == 0) throw DomainError("estimate_coefficients: shots >= 1");
    if (rho.n() != fam.n) throw DimensionError("estimate_coefficients: qubit counts differ");
    ComplexMatrix m = rho.to_dense();
    CoefficientTable t;
    for (const auto &b : fam.bases) {
        auto p = basis_probabilities(m, b);
        for (auto &x : p) x = std::max(0.0, x);
        std::vector<double> cum(p.size());
        std::partial_sum(p.begin(), p.end(), cum.begin());
        std::vector<double> f(p.size(), 0.0);
        for (std::size_t s = 0; s < shots; s++) {
            double u = uniform01(rng) * cum.back();
            std::size_t k = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
            f[std::min(k, f.size() - 1)] += 1.0;
        }
        for (auto &x : f) x /= static_cast<double>(shots);
        t.raw.push_back(f);
        t.projected.push_back(simplex_project(f));
    }
    return t;
}

/// FOFE-driven rows for the phase-state bases; the computational basis is measured directly.
inline CoefficientTable estimate_coefficients_fofe(const DensityState &rho, const MUBFamily &fam, std::size_t shots,
                                                   std::uint64_t seed, unsigned workers = 1) {
    int n = fam.n;
    std::size_t d = std::size_t{1} << n;
    std::vector<PhaseFunction> phases;
    for (std::size_t c = 1; c < fam.bases.size(); c++) {
        for (const auto &v : fam.bases[c].vectors) {
            std::vector<double> ang(d);
            for (std::size_t x = 0; x < d; x++) ang[x] = std::arg(v[x]);
            phases.push_back(PhaseFunction::table(n, ang));
        }
    }
    auto res = fofe_multi_target(rho, *uniform_x_sampler(n), phases, shots, seed, workers);
    Rng rng = make_stream(seed, ~std::uint64_t{0});
    MUBFamily zonly;
    zonly.n = n;
    zonly.bases.push_back(fam.bases[0]);
    CoefficientTable t = estimate_coefficients(rho, zonly, shots, rng);
    for (std::size_t c = 1; c < fam.bases.size(); c++) {
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; j++) row[j] = res.reports[(c - 1) * d + j].mean;
        t.raw.push_back(row);
        t.projected.push_back(simplex_project(row));
    }
    return t;
}

/// rho_hat = sum over all basis elements of b_phi |phi><phi| - I.
inline ComplexMatrix reconstruct(const CoefficientTable &t, const MUBFamily &fam, bool use_projected = true) {
    const auto &rows = use_projected ? t.projected : t.raw;
    if (rows.size() != fam.bases.size()) throw DimensionError("reconstruct: row count != basis count");
    std::size_t d = std::size_t{1} << fam.n;
    ComplexMatrix r(d);
    for (std::size_t c = 0; c < rows.size(); c++) {
        if (rows[c].size() != d) throw DimensionError("reconstruct: row length != 2^n");
        for (std::size_t j = 0; j < d; j++) r += ComplexMatrix::projector(fam.bases[c].vectors[j], rows[c][j]);
    }
    r -= ComplexMatrix::identity(d);
    return r;
}

/// Closest density matrix in Frobenius norm: simplex projection of the spectrum.
inline ComplexMatrix psd_project(const ComplexMatrix &h) {
    if (h.hermiticity_error() > 1e-9) throw DomainError("psd_project: input is not Hermitian");
    HermitianEigen e = jacobi_eigh(h);
    auto lam = simplex_project(e.values);
    ComplexMatrix r(h.dim());
    for (std::size_t k = 0; k < lam.size(); k++)
        if (lam[k] > 0.0) r += ComplexMatrix::projector(e.vectors[k], lam[k]);
    // Exact Hermitian symmetrization removes rounding asymmetry.
    ComplexMatrix s = (r + r.adjoint()) * cplx(0.5, 0.0);
    return s;
}

struct TomographyResult {
    ComplexMatrix estimate;
    double l2_error = 0.0;
};

/// mub -> estimate -> project rows -> reconstruct -> psd_project. shots = 0 uses exact rows.
inline TomographyResult tomography_pipeline(const DensityState &rho, std::size_t shots, std::uint64_t seed) {
    MUBFamily fam = mub_family(rho.n());
    Rng rng = make_stream(seed, 0);
    CoefficientTable t = shots == 0 ? exact_coefficients(rho, fam) : estimate_coefficients(rho, fam, shots, rng);
    TomographyResult r;
    r.estimate = psd_project(reconstruct(t, fam));
    r.l2_error = (r.estimate - rho.to_dense()).frobenius_norm();
    return r;
}

}  // namespace phasefe
