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
#include <numeric>
#include <vector>

#include "phasefe/core.hpp"
#include "phasefe/state_vector.hpp"

/// @file linalg.hpp
/// @brief Small dense complex matrices and a cyclic Jacobi Hermitian eigensolver.

namespace phasefe {

/// Row-major square complex matrix.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t d) : d_(d), a_(d * d, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t d) {
        ComplexMatrix m(d);
        for (std::size_t i = 0; i < d; i++) {
            m(i, i) = 1.0;
        }
        return m;
    }

    /// |v><v| scaled by w.
    static ComplexMatrix projector(const std::vector<cplx> &v, double w = 1.0) {
        ComplexMatrix m(v.size());
        for (std::size_t i = 0; i < v.size(); i++) {
            for (std::size_t j = 0; j < v.size(); j++) {
                m(i, j) = w * v[i] * std::conj(v[j]);
            }
        }
        return m;
    }

    std::size_t dim() const { return d_; }
    cplx &operator()(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }
    const std::vector<cplx> &data() const { return a_; }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); i++) {
            a_[i] += o.a_[i];
        }
        return *this;
    }
    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        check_same(o);
        for (std::size_t i = 0; i < a_.size(); i++) {
            a_[i] -= o.a_[i];
        }
        return *this;
    }
    ComplexMatrix &operator*=(cplx s) {
        for (auto &e : a_) {
            e *= s;
        }
        return *this;
    }
    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        a.check_same(b);
        ComplexMatrix c(a.d_);
        for (std::size_t i = 0; i < a.d_; i++) {
            for (std::size_t k = 0; k < a.d_; k++) {
                cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) {
                    continue;
                }
                for (std::size_t j = 0; j < a.d_; j++) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    std::vector<cplx> apply(const std::vector<cplx> &v) const {
        std::vector<cplx> r(d_, 0.0);
        for (std::size_t i = 0; i < d_; i++) {
            for (std::size_t j = 0; j < d_; j++) {
                r[i] += (*this)(i, j) * v[j];
            }
        }
        return r;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(d_);
        for (std::size_t i = 0; i < d_; i++) {
            for (std::size_t j = 0; j < d_; j++) {
                m(i, j) = std::conj((*this)(j, i));
            }
        }
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < d_; i++) {
            t += (*this)(i, i);
        }
        return t;
    }

    double frobenius_norm() const {
        double t = 0.0;
        for (const auto &e : a_) {
            t += std::norm(e);
        }
        return std::sqrt(t);
    }

    double hermiticity_error() const {
        double e = 0.0;
        for (std::size_t i = 0; i < d_; i++) {
            for (std::size_t j = 0; j <= i; j++) {
                e = std::max(e, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        }
        return e;
    }

  private:
    void check_same(const ComplexMatrix &o) const {
        if (o.d_ != d_) {
            throw DimensionError("ComplexMatrix: dimension mismatch");
        }
    }

    std::size_t d_ = 0;
    std::vector<cplx> a_;
};

struct HermitianEigen {
    std::vector<double> values;              ///< Descending.
    std::vector<std::vector<cplx>> vectors;  ///< vectors[k] pairs with values[k].
    double off_diagonal = 0.0;               ///< Final off-diagonal Frobenius norm.
};

/// Cyclic complex Jacobi. Each pivot is phase-aligned to a real 2x2 problem, then rotated away.
inline HermitianEigen jacobi_eigh(const ComplexMatrix &h, double tol = 1e-12, int max_sweeps = 100) {
    if (h.hermiticity_error() > 1e-9) {
        throw DomainError("jacobi_eigh: matrix is not Hermitian");
    }
    std::size_t d = h.dim();
    ComplexMatrix a = h;
    ComplexMatrix v = ComplexMatrix::identity(d);
    auto off = [&]() {
        double t = 0.0;
        for (std::size_t i = 0; i < d; i++) {
            for (std::size_t j = 0; j < d; j++) {
                if (i != j) {
                    t += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(t);
    };
    double scale = std::max(1.0, h.frobenius_norm());
    double cur = off();
    for (int sweep = 0; sweep < max_sweeps && cur > tol * scale * 1e-3; sweep++) {
        for (std::size_t p = 0; p + 1 < d; p++) {
            for (std::size_t q = p + 1; q < d; q++) {
                double mag = std::abs(a(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                cplx ph = a(p, q) / mag;  // e^{i theta}
                double app = a(p, p).real(), aqq = a(q, q).real();
                double tau = (aqq - app) / (2.0 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                cplx ep = std::conj(ph);  // e^{-i theta}
                cplx g_pp = c, g_pq = s, g_qp = -s * ep, g_qq = c * ep;
                for (std::size_t k = 0; k < d; k++) {
                    cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * g_pp + akq * g_qp;
                    a(k, q) = akp * g_pq + akq * g_qq;
                    cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * g_pp + vkq * g_qp;
                    v(k, q) = vkp * g_pq + vkq * g_qq;
                }
                for (std::size_t k = 0; k < d; k++) {
                    cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
                    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
        cur = off();
    }
    if (cur > tol * scale) {
        throw NumericalHealthError("jacobi_eigh: did not converge");
    }
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    HermitianEigen out;
    out.off_diagonal = cur;
    for (std::size_t k : order) {
        out.values.push_back(a(k, k).real());
        std::vector<cplx> col(d);
        for (std::size_t i = 0; i < d; i++) {
            col[i] = v(i, k);
        }
        out.vectors.push_back(std::move(col));
    }
    return out;
}

}  // namespace phasefe
