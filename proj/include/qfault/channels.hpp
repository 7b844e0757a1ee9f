// Copyright 2026 The qfault Authors
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

/**
 * @file channels.hpp
 * @brief Kraus channels for decoherence faults and their superoperators.
 */

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qfault/common.hpp"

namespace qfault {

/// Completely positive trace-preserving map {E_k} on 1 or 2 qubits.
class KrausChannel {
  public:
    /// Throws InvalidInput unless the set is non-empty, square of size
    /// 2^arity, and trace preserving within tol::kTracePreserving.
    explicit KrausChannel(std::vector<Matrix> kraus)
        : kraus_(std::move(kraus)) {
        if (kraus_.empty()) {
            throw InvalidInput("Kraus set must be non-empty");
        }
        const auto dim = kraus_.front().rows();
        if (dim != 2 && dim != 4) {
            throw InvalidInput("Kraus matrices must be 2x2 or 4x4");
        }
        for (const auto &e : kraus_) {
            if (e.rows() != dim || e.cols() != dim) {
                throw InvalidInput("Kraus matrices must share one square shape");
            }
        }
        if (double err = trace_preservation_error(); !(err <= tol::kTracePreserving)) {
            throw InvalidInput("Kraus set is not trace preserving (error " +
                               std::to_string(err) + ")");
        }
    }

    static KrausChannel unitary(const Matrix &u) { return KrausChannel({u}); }

    static KrausChannel identity(std::size_t arity) {
        return KrausChannel({Matrix::Identity(1 << arity, 1 << arity)});
    }

    std::size_t arity() const { return kraus_.front().rows() == 2 ? 1 : 2; }
    std::size_t dim() const { return static_cast<std::size_t>(kraus_.front().rows()); }
    const std::vector<Matrix> &kraus() const { return kraus_; }

    /// max-norm of sum_k E_k^dagger E_k - I.
    double trace_preservation_error() const {
        const auto d = kraus_.front().rows();
        Matrix sum = Matrix::Zero(d, d);
        for (const auto &e : kraus_) {
            sum += e.adjoint() * e;
        }
        return max_abs(sum - Matrix::Identity(d, d));
    }

    /// sum_k E_k rho E_k^dagger on a matrix of the channel's own dimension.
    Matrix apply(const Matrix &rho) const {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto &e : kraus_) {
            out += e * rho * e.adjoint();
        }
        return out;
    }

  private:
    std::vector<Matrix> kraus_;
};

/// Decoherence timing: relaxation time T1, total dephasing time T2 and gate
/// duration dt, all in seconds.
struct NoiseParams {
    double t1 = 100e-6;
    double t2 = 20e-6;
    double dt = 30e-9;

    void validate() const {
        if (!(t1 > 0) || !std::isfinite(t1)) {
            throw InvalidInput("T1 must be positive");
        }
        if (!(dt >= 0) || !std::isfinite(dt)) {
            throw InvalidInput("gate time must be non-negative");
        }
        if (!(t2 > 0) || !(t2 <= 2 * t1)) {
            throw InvalidInput("T2 must satisfy 0 < T2 <= 2 T1");
        }
    }

    /// Pure-dephasing time from 1/Tphi = 1/T2 - 1/(2 T1); infinity when
    /// T2 = 2 T1.
    double t_phi() const {
        const double rate = 1.0 / t2 - 1.0 / (2.0 * t1);
        return rate <= 0 ? std::numeric_limits<double>::infinity() : 1.0 / rate;
    }

    friend bool operator==(const NoiseParams &, const NoiseParams &) = default;
};

inline KrausChannel amplitude_damping(const NoiseParams &p) {
    p.validate();
    Matrix e1(2, 2);
    Matrix e2(2, 2);
    e1 << 1, 0, 0, std::exp(-p.dt / (2 * p.t1));
    e2 << 0, std::sqrt(-std::expm1(-p.dt / p.t1)), 0, 0;
    return KrausChannel({e1, e2});
}

/// Three-element pure-dephasing set; collapses to {I} when Tphi is infinite.
inline KrausChannel phase_damping(const NoiseParams &p) {
    p.validate();
    const double t_phi = p.t_phi();
    if (std::isinf(t_phi)) {
        return KrausChannel::identity(1);
    }
    const double keep = std::exp(-p.dt / (2 * t_phi));
    const double flip = std::sqrt(-std::expm1(-p.dt / t_phi));
    Matrix e0 = keep * Matrix::Identity(2, 2);
    Matrix e1 = Matrix::Zero(2, 2);
    Matrix e2 = Matrix::Zero(2, 2);
    e1(0, 0) = flip;
    e2(1, 1) = flip;
    return KrausChannel({e0, e1, e2});
}

namespace detail {

inline std::vector<Matrix> prune_zero(std::vector<Matrix> kraus) {
    std::vector<Matrix> kept;
    for (auto &e : kraus) {
        if (max_abs(e) >= tol::kPrune) {
            kept.push_back(std::move(e));
        }
    }
    if (kept.empty()) {
        // Not reachable for trace-preserving inputs; keep the shape valid.
        kept.push_back(std::move(kraus.front()));
    }
    return kept;
}

} // namespace detail

/// b after a: Kraus set {B_j A_i} with zero products pruned.
inline KrausChannel compose(const KrausChannel &a, const KrausChannel &b) {
    if (a.arity() != b.arity()) {
        throw InvalidInput("cannot compose channels of different arity");
    }
    std::vector<Matrix> out;
    out.reserve(a.kraus().size() * b.kraus().size());
    for (const auto &bj : b.kraus()) {
        for (const auto &ai : a.kraus()) {
            out.push_back(bj * ai);
        }
    }
    return KrausChannel(detail::prune_zero(std::move(out)));
}

/// Phase damping applied after amplitude damping.
inline KrausChannel decoherence(const NoiseParams &p) {
    return compose(amplitude_damping(p), phase_damping(p));
}

/// sum_k E_k (x) conj(E_k). Acts on row-major vec(rho), |i><j| -> |i>|j>.
inline Matrix matrix_representation(const KrausChannel &c) {
    const auto d = static_cast<Eigen::Index>(c.dim());
    Matrix m = Matrix::Zero(d * d, d * d);
    for (const auto &e : c.kraus()) {
        m += kron(e, e.conjugate());
    }
    return m;
}

/// Row-major vectorization: entry (i, j) lands at i * cols + j.
inline Vector vec(const Matrix &rho) {
    Vector v(rho.size());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            v(i * rho.cols() + j) = rho(i, j);
        }
    }
    return v;
}

inline Matrix unvec(const Vector &v, Eigen::Index dim) {
    Matrix rho(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            rho(i, j) = v(i * dim + j);
        }
    }
    return rho;
}

} // namespace qfault
