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
 * @file oracle.hpp
 * @brief Dense state-vector and density-matrix reference simulation.
 *
 * Qubit 0 is the most significant bit of a basis index, matching
 * ProductState::dense(). Operators are applied by index arithmetic.
 */

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qfault/channels.hpp"
#include "qfault/circuit.hpp"
#include "qfault/faults.hpp"

namespace qfault {

inline constexpr std::size_t kDefaultOracleCap = 10;

namespace detail {

/// Bit masks selecting each operand of an operator in an n-qubit index.
inline std::vector<std::size_t> operand_bits(const std::vector<std::size_t> &qubits,
                                             std::size_t n) {
    std::vector<std::size_t> bits;
    for (std::size_t q : qubits) {
        if (q >= n) {
            throw InvalidInput("qubit index " + std::to_string(q) + " out of range");
        }
        bits.push_back(std::size_t{1} << (n - 1 - q));
    }
    return bits;
}

/// m <- op * m on the rows, with op acting on `qubits`.
inline void apply_rows(Matrix &m, const Matrix &op, const std::vector<std::size_t> &qubits,
                       std::size_t n) {
    const auto bits = operand_bits(qubits, n);
    const std::size_t k = bits.size();
    const std::size_t d = std::size_t{1} << k;
    std::size_t mask = 0;
    for (auto b : bits) {
        mask |= b;
    }
    std::vector<std::size_t> offset(d, 0);
    for (std::size_t s = 0; s < d; ++s) {
        for (std::size_t i = 0; i < k; ++i) {
            if ((s >> (k - 1 - i)) & 1U) {
                offset[s] |= bits[i];
            }
        }
    }
    const auto rows = static_cast<std::size_t>(m.rows());
    Vector in(static_cast<Eigen::Index>(d));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (std::size_t base = 0; base < rows; ++base) {
            if (base & mask) {
                continue;
            }
            for (std::size_t s = 0; s < d; ++s) {
                in(static_cast<Eigen::Index>(s)) = m(static_cast<Eigen::Index>(base | offset[s]), c);
            }
            const Vector out = op * in;
            for (std::size_t s = 0; s < d; ++s) {
                m(static_cast<Eigen::Index>(base | offset[s]), c) = out(static_cast<Eigen::Index>(s));
            }
        }
    }
}

inline void check_cap(std::size_t n, std::size_t cap) {
    if (n > cap) {
        throw InvalidInput("dense simulation of " + std::to_string(n) +
                           " qubits exceeds the cap of " + std::to_string(cap));
    }
}

} // namespace detail

/// 2^n x 2^n density matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(std::size_t n, std::size_t cap = kDefaultOracleCap) : n_(n) {
        detail::check_cap(n, cap);
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
        rho_ = Matrix::Zero(d, d);
        rho_(0, 0) = 1.0;
    }

    static DensityMatrix pure(const Vector &psi, std::size_t cap = kDefaultOracleCap) {
        std::size_t n = 0;
        while ((Eigen::Index{1} << n) < psi.size()) {
            ++n;
        }
        if ((Eigen::Index{1} << n) != psi.size() || n == 0) {
            throw InvalidInput("state length must be a power of two");
        }
        DensityMatrix dm(n, cap);
        dm.rho_ = psi * psi.adjoint();
        return dm;
    }

    static DensityMatrix from_matrix(std::size_t n, Matrix rho,
                                     std::size_t cap = kDefaultOracleCap) {
        DensityMatrix dm(n, cap);
        if (rho.rows() != dm.rho_.rows() || rho.cols() != dm.rho_.cols()) {
            throw InvalidInput("density matrix has the wrong dimension");
        }
        dm.rho_ = std::move(rho);
        return dm;
    }

    std::size_t n_qubits() const { return n_; }
    const Matrix &matrix() const { return rho_; }

    /// Largest deviation from Hermiticity, unit trace and, when `check_psd`
    /// is set, the negative part of the smallest eigenvalue.
    double validity_error(bool check_psd = false) const {
        double err = std::max(max_abs(rho_ - rho_.adjoint()), std::abs(rho_.trace() - 1.0));
        if (check_psd) {
            const Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
            err = std::max(err, -es.eigenvalues().minCoeff());
        }
        return err;
    }

    /// <psi| rho |psi>.
    Complex expectation(const Vector &psi) const {
        return psi.dot(rho_ * psi);
    }

  private:
    friend DensityMatrix apply_operator_sum(const DensityMatrix &, const std::vector<Matrix> &,
                                            const std::vector<std::size_t> &);
    std::size_t n_;
    Matrix rho_;
};

/// sum_k K rho K^dagger with each K acting on `qubits`.
inline DensityMatrix apply_operator_sum(const DensityMatrix &rho, const std::vector<Matrix> &ops,
                                        const std::vector<std::size_t> &qubits) {
    DensityMatrix out = rho;
    out.rho_.setZero();
    for (const auto &k : ops) {
        Matrix m = rho.rho_;
        detail::apply_rows(m, k, qubits, rho.n_);
        m.adjointInPlace();
        detail::apply_rows(m, k, qubits, rho.n_);
        out.rho_ += m.adjoint();
    }
    return out;
}

inline DensityMatrix apply_gate(const DensityMatrix &rho, const Gate &g) {
    validate_gate(g, rho.n_qubits());
    return apply_operator_sum(rho, {gate_matrix(g)}, g.qubits);
}

inline DensityMatrix apply_channel(const DensityMatrix &rho, const KrausChannel &c,
                                   const std::vector<std::size_t> &qubits) {
    if (qubits.size() != c.arity()) {
        throw InvalidInput("channel arity does not match its operands");
    }
    return apply_operator_sum(rho, c.kraus(), qubits);
}

inline DensityMatrix apply_element(const DensityMatrix &rho, const Element &e) {
    if (const auto *ch = std::get_if<ChannelFault>(&e)) {
        return apply_channel(rho, ch->channel, ch->qubits);
    }
    return apply_gate(rho, *element_gate(e));
}

/// U|psi> for a dense state vector.
inline Vector apply_gate(const Vector &psi, const Gate &g, std::size_t n) {
    validate_gate(g, n);
    Matrix m = psi;
    detail::apply_rows(m, gate_matrix(g), g.qubits, n);
    return m.col(0);
}

/// The noiseless output state of `c` on `psi_t`.
inline Vector dense_output(const Circuit &c, const ProductState &psi_t,
                           std::size_t cap = kDefaultOracleCap) {
    detail::check_cap(c.n_qubits(), cap);
    if (psi_t.size() != c.n_qubits()) {
        throw InvalidInput("state and circuit differ in qubit count");
    }
    Vector psi = psi_t.dense();
    for (const auto &g : c.gates()) {
        psi = apply_gate(psi, g, c.n_qubits());
    }
    return psi;
}

/// E_f(|psi_t><psi_t|).
inline DensityMatrix dense_evolve(const FaultyCircuit &fc, const ProductState &psi_t,
                                  std::size_t cap = kDefaultOracleCap) {
    if (psi_t.size() != fc.n_qubits()) {
        throw InvalidInput("state and circuit differ in qubit count");
    }
    DensityMatrix rho = DensityMatrix::pure(psi_t.dense(), cap);
    for (const auto &e : fc.elements()) {
        rho = apply_element(rho, e);
    }
    return rho;
}

/// <psi_e| E_f(|psi_t><psi_t|) |psi_e> for any dense psi_e.
inline double dense_fault_effect(const FaultyCircuit &fc, const ProductState &psi_t,
                                 const Vector &psi_e, std::size_t cap = kDefaultOracleCap) {
    const DensityMatrix rho = dense_evolve(fc, psi_t, cap);
    if (psi_e.size() != rho.matrix().rows()) {
        throw InvalidInput("expected state and circuit differ in qubit count");
    }
    return rho.expectation(psi_e).real();
}

inline double dense_fault_effect(const FaultyCircuit &fc, const ProductState &psi_t,
                                 const ProductState &psi_e, std::size_t cap = kDefaultOracleCap) {
    detail::check_cap(fc.n_qubits(), cap);
    return dense_fault_effect(fc, psi_t, psi_e.dense(), cap);
}

/// F(U|psi_t>, E_f(psi_t)) with U the ideal circuit.
inline double dense_fidelity_vs_ideal(const FaultyCircuit &fc, const Circuit &ideal,
                                      const ProductState &psi_t,
                                      std::size_t cap = kDefaultOracleCap) {
    return dense_fault_effect(fc, psi_t, dense_output(ideal, psi_t, cap), cap);
}

} // namespace qfault
