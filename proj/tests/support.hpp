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


// Shared generators and reference helpers for the test suites.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qfault/qfault.hpp"

namespace qfault::testing {

inline double uniform(Rng &rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline Complex random_complex(Rng &rng) {
    // Box-Muller pair gives a circularly symmetric Gaussian.
    const double u = std::max(rng.uniform(), 1e-300);
    const double v = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    return {r * std::cos(2 * std::numbers::pi * v), r * std::sin(2 * std::numbers::pi * v)};
}

inline Qubit random_qubit(Rng &rng) {
    Complex a = random_complex(rng);
    Complex b = random_complex(rng);
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    return {a / norm, b / norm};
}

inline ProductState random_product_state(Rng &rng, std::size_t n) {
    std::vector<Qubit> qs(n);
    for (auto &q : qs) {
        q = random_qubit(rng);
    }
    return ProductState(std::move(qs));
}

inline double random_angle(Rng &rng) { return uniform(rng, -std::numbers::pi, std::numbers::pi); }

/// Any gate kind, including controlled inner gates, on random operands.
inline Gate random_gate(Rng &rng, std::size_t n) {
    static constexpr GateKind kOne[] = {GateKind::H,  GateKind::X,  GateKind::Y, GateKind::Z,
                                        GateKind::T,  GateKind::Rx, GateKind::Ry, GateKind::Rz};
    static constexpr GateKind kTwo[] = {GateKind::CZ, GateKind::CRz, GateKind::CU};
    if (n < 2 || rng.below(3) != 0) {
        const GateKind k = kOne[rng.below(8)];
        return Gate{k, {rng.below(n)}, has_angle(k) ? random_angle(rng) : 0.0, std::nullopt};
    }
    const std::size_t a = rng.below(n);
    std::size_t b = rng.below(n - 1);
    if (b >= a) {
        ++b;
    }
    const GateKind k = kTwo[rng.below(3)];
    if (k == GateKind::CU) {
        const GateKind inner = kOne[rng.below(8)];
        return Gate::cu(a, b, {inner, has_angle(inner) ? random_angle(rng) : 0.0});
    }
    return Gate{k, {a, b}, k == GateKind::CRz ? random_angle(rng) : 0.0, std::nullopt};
}

inline Circuit random_circuit(Rng &rng, std::size_t n, std::size_t gates) {
    Circuit c(n);
    for (std::size_t i = 0; i < gates; ++i) {
        c.add(random_gate(rng, n));
    }
    return c;
}

/// Circuit with exactly the requested depth under left-packing.
inline Circuit random_circuit_of_depth(Rng &rng, std::size_t n, std::size_t depth) {
    Circuit c(n);
    while (c.depth() < depth) {
        Circuit next = c;
        next.add(random_gate(rng, n));
        if (next.depth() > depth) {
            break;
        }
        c = std::move(next);
    }
    return c;
}

inline NoiseParams random_noise(Rng &rng) {
    NoiseParams p;
    p.t1 = uniform(rng, 10e-6, 200e-6);
    p.t2 = uniform(rng, 1e-6, 2 * p.t1);
    p.dt = uniform(rng, 0.0, 20e-6);
    return p;
}

/// A random channel: decoherence, one of its parts, or a mixture of two
/// random unitaries on one or two qubits.
inline KrausChannel random_channel(Rng &rng, std::size_t arity) {
    if (arity == 2) {
        // Mixture of two random 4x4 unitaries.
        const auto unitary = [&rng] {
            const Matrix local = kron(gate_matrix(Gate{GateKind::Rx, {0}, random_angle(rng), std::nullopt}),
                                      gate_matrix(Gate{GateKind::Ry, {0}, random_angle(rng), std::nullopt}));
            return Matrix(gate_matrix(Gate::crz(0, 1, random_angle(rng))) * local);
        };
        const double p = rng.uniform();
        return KrausChannel({std::sqrt(p) * unitary(), std::sqrt(1 - p) * unitary()});
    }
    const NoiseParams p = random_noise(rng);
    switch (rng.below(3)) {
    case 0:
        return amplitude_damping(p);
    case 1:
        return phase_damping(p);
    default:
        return decoherence(p);
    }
}

/// Inserts up to `max_faults` faults of both kinds at random positions.
inline FaultyCircuit random_faulty(Rng &rng, const Circuit &c, std::size_t max_faults) {
    const std::size_t n = c.n_qubits();
    std::vector<Element> out;
    for (const auto &g : c.gates()) {
        out.emplace_back(IdealGate{g});
    }
    const std::size_t faults = rng.below(max_faults + 1);
    for (std::size_t f = 0; f < faults; ++f) {
        const std::size_t pos = rng.below(out.size() + 1);
        Element e = IdealGate{Gate::h(0)};
        const auto kind = rng.below(3);
        if (kind == 0 && n >= 2) {
            const std::size_t a = rng.below(n);
            std::size_t b = rng.below(n - 1);
            b += b >= a ? 1 : 0;
            e = UnitaryFault{Gate::crz(a, b, uniform(rng, -0.5, 0.5))};
        } else if (kind == 1 && n >= 2 && rng.below(3) == 0) {
            const std::size_t a = rng.below(n);
            std::size_t b = rng.below(n - 1);
            b += b >= a ? 1 : 0;
            e = ChannelFault{random_channel(rng, 2), {a, b}};
        } else {
            e = ChannelFault{random_channel(rng, 1), {rng.below(n)}};
        }
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), std::move(e));
    }
    return FaultyCircuit(n, std::move(out));
}

inline Matrix random_density(Rng &rng, std::size_t dim) {
    Matrix a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            a(i, j) = random_complex(rng);
        }
    }
    Matrix rho = a * a.adjoint();
    return rho / rho.trace();
}

/// Operator on `qubits` of an n-qubit register built from explicit
/// Kronecker products and a basis permutation; independent of the index
/// arithmetic used by the library.
inline Matrix kron_embed(const Matrix &op, const std::vector<std::size_t> &qubits, std::size_t n) {
    const std::size_t k = qubits.size();
    Matrix full = op;
    for (std::size_t i = k; i < n; ++i) {
        full = kron(full, Matrix::Identity(2, 2));
    }
    // full acts with its operands on positions 0..k-1; permute position j
    // of that layout to the requested qubit order.
    std::vector<std::size_t> where(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < k; ++i) {
        where[i] = qubits[i];
        used[qubits[i]] = true;
    }
    std::size_t next = 0;
    for (std::size_t i = k; i < n; ++i) {
        while (used[next]) {
            ++next;
        }
        where[i] = next++;
    }
    const auto dim = Eigen::Index{1} << n;
    Matrix perm = Matrix::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        Eigen::Index y = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((x >> (n - 1 - i)) & 1) {
                y |= Eigen::Index{1} << (n - 1 - where[i]);
            }
        }
        perm(y, x) = 1;
    }
    return perm * full * perm.transpose();
}

/// E_f(rho) computed with kron_embed.
inline Matrix reference_evolve(const FaultyCircuit &fc, Matrix rho) {
    const std::size_t n = fc.n_qubits();
    for (const auto &e : fc.elements()) {
        if (const auto *ch = std::get_if<ChannelFault>(&e)) {
            Matrix next = Matrix::Zero(rho.rows(), rho.cols());
            for (const auto &k : ch->channel.kraus()) {
                const Matrix big = kron_embed(k, ch->qubits, n);
                next += big * rho * big.adjoint();
            }
            rho = next;
        } else {
            const Gate &g = *element_gate(e);
            const Matrix big = kron_embed(gate_matrix(g), g.qubits, n);
            rho = big * rho * big.adjoint();
        }
    }
    return rho;
}

inline double reference_fault_effect(const FaultyCircuit &fc, const Vector &psi_t,
                                     const Vector &psi_e) {
    const Matrix rho = reference_evolve(fc, psi_t * psi_t.adjoint());
    return psi_e.dot(rho * psi_e).real();
}

} // namespace qfault::testing
