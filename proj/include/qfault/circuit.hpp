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
 * @file circuit.hpp
 * @brief Gate set, circuit container and product states.
 *
 * Gates act on one or two qubits. Two-qubit gates are stored control first;
 * their 4x4 matrices use the (operand 0) x (operand 1) ordering, so operand 0
 * is the high-order bit of the row/column index.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfault/common.hpp"

namespace qfault {

enum class GateKind { H, X, Y, Z, T, Rx, Ry, Rz, CZ, CRz, CU };

inline constexpr std::array<std::pair<GateKind, std::string_view>, 11>
    kGateNames{{{GateKind::H, "H"},
                {GateKind::X, "X"},
                {GateKind::Y, "Y"},
                {GateKind::Z, "Z"},
                {GateKind::T, "T"},
                {GateKind::Rx, "Rx"},
                {GateKind::Ry, "Ry"},
                {GateKind::Rz, "Rz"},
                {GateKind::CZ, "CZ"},
                {GateKind::CRz, "CRz"},
                {GateKind::CU, "CU"}}};

inline std::string_view gate_name(GateKind kind) {
    for (const auto &[k, name] : kGateNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (const auto &[k, n] : kGateNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

inline constexpr std::size_t arity(GateKind kind) {
    switch (kind) {
    case GateKind::CZ:
    case GateKind::CRz:
    case GateKind::CU:
        return 2;
    default:
        return 1;
    }
}

inline constexpr bool has_angle(GateKind kind) {
    return kind == GateKind::Rx || kind == GateKind::Ry ||
           kind == GateKind::Rz || kind == GateKind::CRz;
}

/// The 1-qubit payload of a CU gate.
struct InnerGate {
    GateKind kind = GateKind::X;
    double angle = 0.0;

    friend bool operator==(const InnerGate &, const InnerGate &) = default;
};

struct Gate {
    GateKind kind = GateKind::H;
    std::vector<std::size_t> qubits;
    double angle = 0.0;
    std::optional<InnerGate> inner;

    friend bool operator==(const Gate &, const Gate &) = default;

    static Gate h(std::size_t q) { return {GateKind::H, {q}, 0.0, std::nullopt}; }
    static Gate x(std::size_t q) { return {GateKind::X, {q}, 0.0, std::nullopt}; }
    static Gate y(std::size_t q) { return {GateKind::Y, {q}, 0.0, std::nullopt}; }
    static Gate z(std::size_t q) { return {GateKind::Z, {q}, 0.0, std::nullopt}; }
    static Gate t(std::size_t q) { return {GateKind::T, {q}, 0.0, std::nullopt}; }
    static Gate rx(std::size_t q, double theta) {
        return {GateKind::Rx, {q}, theta, std::nullopt};
    }
    static Gate ry(std::size_t q, double theta) {
        return {GateKind::Ry, {q}, theta, std::nullopt};
    }
    static Gate rz(std::size_t q, double theta) {
        return {GateKind::Rz, {q}, theta, std::nullopt};
    }
    static Gate cz(std::size_t control, std::size_t target) {
        return {GateKind::CZ, {control, target}, 0.0, std::nullopt};
    }
    static Gate crz(std::size_t control, std::size_t target, double theta) {
        return {GateKind::CRz, {control, target}, theta, std::nullopt};
    }
    static Gate cu(std::size_t control, std::size_t target, InnerGate inner) {
        return {GateKind::CU, {control, target}, 0.0, inner};
    }
};

/// Checks the Gate invariants against a register of n_qubits; throws
/// InvalidInput with a message naming the violated rule.
inline void validate_gate(const Gate &g, std::size_t n_qubits) {
    if (g.qubits.size() != arity(g.kind)) {
        throw InvalidInput(std::string(gate_name(g.kind)) + " expects " +
                           std::to_string(arity(g.kind)) + " operand(s), got " +
                           std::to_string(g.qubits.size()));
    }
    for (std::size_t q : g.qubits) {
        if (q >= n_qubits) {
            throw InvalidInput("qubit index " + std::to_string(q) +
                               " out of range [0, " + std::to_string(n_qubits) +
                               ")");
        }
    }
    if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
        throw InvalidInput("duplicate operand " + std::to_string(g.qubits[0]));
    }
    if (!std::isfinite(g.angle)) {
        throw InvalidInput("angle must be finite");
    }
    if (g.kind == GateKind::CU) {
        if (!g.inner) {
            throw InvalidInput("CU requires an inner 1-qubit gate");
        }
        if (arity(g.inner->kind) != 1) {
            throw InvalidInput("CU inner gate must be a 1-qubit kind");
        }
        if (!std::isfinite(g.inner->angle)) {
            throw InvalidInput("angle must be finite");
        }
    } else if (g.inner) {
        throw InvalidInput("only CU carries an inner gate");
    }
}

namespace detail {

inline Matrix one_qubit_matrix(GateKind kind, double theta) {
    using namespace std::complex_literals;
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Matrix m(2, 2);
    switch (kind) {
    case GateKind::H: {
        const double r = 1.0 / std::numbers::sqrt2;
        m << r, r, r, -r;
        break;
    }
    case GateKind::X:
        m << 0, 1, 1, 0;
        break;
    case GateKind::Y:
        m << 0, -1i, 1i, 0;
        break;
    case GateKind::Z:
        m << 1, 0, 0, -1;
        break;
    case GateKind::T:
        m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
        break;
    case GateKind::Rx:
        m << c, -1i * s, -1i * s, c;
        break;
    case GateKind::Ry:
        m << c, -s, s, c;
        break;
    case GateKind::Rz:
        m << std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2);
        break;
    default:
        throw InvalidInput("not a 1-qubit gate kind");
    }
    return m;
}

inline Matrix controlled(const Matrix &u) {
    Matrix m = Matrix::Identity(4, 4);
    m.block(2, 2, 2, 2) = u;
    return m;
}

} // namespace detail

/// Unitary of a gate: 2x2 for 1-qubit kinds, diag(I, U) for controlled kinds.
inline Matrix gate_matrix(const Gate &g) {
    switch (g.kind) {
    case GateKind::CZ:
        return detail::controlled(detail::one_qubit_matrix(GateKind::Z, 0));
    case GateKind::CRz:
        return detail::controlled(
            detail::one_qubit_matrix(GateKind::Rz, g.angle));
    case GateKind::CU: {
        const InnerGate inner = g.inner.value_or(InnerGate{});
        return detail::controlled(
            detail::one_qubit_matrix(inner.kind, inner.angle));
    }
    default:
        return detail::one_qubit_matrix(g.kind, g.angle);
    }
}

class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits == 0) {
            throw InvalidInput("a circuit needs at least one qubit");
        }
    }

    Circuit(std::size_t n_qubits, std::vector<Gate> gates)
        : Circuit(n_qubits) {
        gates_.reserve(gates.size());
        for (auto &g : gates) {
            add(std::move(g));
        }
    }

    Circuit &add(Gate g) {
        validate_gate(g, n_qubits_);
        gates_.push_back(std::move(g));
        return *this;
    }

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    /// Number of moments when gates are packed left-greedily into layers of
    /// disjoint qubits.
    std::size_t depth() const {
        std::vector<std::size_t> level(n_qubits_, 0);
        std::size_t depth = 0;
        for (const auto &g : gates_) {
            std::size_t l = 0;
            for (std::size_t q : g.qubits) {
                l = std::max(l, level[q]);
            }
            ++l;
            for (std::size_t q : g.qubits) {
                level[q] = l;
            }
            depth = std::max(depth, l);
        }
        return depth;
    }

    std::size_t count(GateKind kind) const {
        return static_cast<std::size_t>(
            std::count_if(gates_.begin(), gates_.end(),
                          [kind](const Gate &g) { return g.kind == kind; }));
    }

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
};

using Qubit = std::array<Complex, 2>;

/// Tensor product of normalized single-qubit states.
class ProductState {
  public:
    explicit ProductState(std::vector<Qubit> qubits)
        : qubits_(std::move(qubits)) {
        if (qubits_.empty()) {
            throw InvalidInput("product state needs at least one qubit");
        }
        for (std::size_t q = 0; q < qubits_.size(); ++q) {
            const double norm =
                std::norm(qubits_[q][0]) + std::norm(qubits_[q][1]);
            if (!(std::abs(norm - 1.0) <= tol::kNormalized)) {
                throw InvalidInput("qubit " + std::to_string(q) +
                                   " of product state is not normalized");
            }
        }
    }

    static ProductState zeros(std::size_t n) {
        return ProductState(std::vector<Qubit>(n, Qubit{1.0, 0.0}));
    }

    /// Computational basis state; bit q of `bits` (counting from the most
    /// significant of n) selects qubit q.
    static ProductState basis(std::size_t n, std::size_t bits) {
        std::vector<Qubit> qs(n);
        for (std::size_t q = 0; q < n; ++q) {
            const bool one = (bits >> (n - 1 - q)) & 1U;
            qs[q] = one ? Qubit{0.0, 1.0} : Qubit{1.0, 0.0};
        }
        return ProductState(std::move(qs));
    }

    /// Parses one character per qubit from {0,1,+,-,r,l} (r/l are the
    /// +i/-i eigenstates of Y). A single character is broadcast to n qubits.
    static ProductState parse(std::string_view text, std::size_t n) {
        if (text.size() == 1 && n > 1) {
            return parse(std::string(n, text[0]), n);
        }
        if (text.size() != n) {
            throw InvalidInput("state string has " +
                               std::to_string(text.size()) +
                               " characters, expected " + std::to_string(n));
        }
        using namespace std::complex_literals;
        const double r = 1.0 / std::numbers::sqrt2;
        std::vector<Qubit> qs;
        qs.reserve(n);
        for (char c : text) {
            switch (c) {
            case '0':
                qs.push_back({1.0, 0.0});
                break;
            case '1':
                qs.push_back({0.0, 1.0});
                break;
            case '+':
                qs.push_back({r, r});
                break;
            case '-':
                qs.push_back({r, -r});
                break;
            case 'r':
                qs.push_back({r, r * 1i});
                break;
            case 'l':
                qs.push_back({r, -r * 1i});
                break;
            default:
                throw InvalidInput(std::string("unknown state character '") +
                                   c + "'");
            }
        }
        return ProductState(std::move(qs));
    }

    std::size_t size() const { return qubits_.size(); }
    const Qubit &operator[](std::size_t q) const { return qubits_[q]; }
    const std::vector<Qubit> &qubits() const { return qubits_; }

    /// Dense 2^n amplitude vector, qubit 0 most significant.
    Vector dense() const {
        Vector v = Vector::Ones(1);
        for (const auto &q : qubits_) {
            Vector next(v.size() * 2);
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                next(2 * i) = v(i) * q[0];
                next(2 * i + 1) = v(i) * q[1];
            }
            v = std::move(next);
        }
        return v;
    }

    friend bool operator==(const ProductState &, const ProductState &) =
        default;

  private:
    std::vector<Qubit> qubits_;
};

} // namespace qfault
