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
 * @file tensornet.hpp
 * @brief Doubled tensor networks of faulty circuits.
 *
 * A circuit on n qubits becomes a network on 2n rails. Rail q < n carries the
 * state itself and rail q + n its entry-wise conjugate, so that the pair
 * (q, q + n) holds the row-major vectorized density matrix. A unitary G adds
 * G on rail q and conj(G) on rail q + n; a Kraus channel adds one tensor
 * sum_k E_k (x) conj(E_k) spanning both rails.
 *
 * Gate tensors carry legs [out..., in...] with the operand order of the gate,
 * so their row-major data is the gate matrix itself.
 */

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfault/channels.hpp"
#include "qfault/circuit.hpp"
#include "qfault/faults.hpp"
#include "qfault/tensor.hpp"

namespace qfault {

namespace detail {

/// Places network tensors on rails, tracking the open segment of each rail.
class RailBuilder {
  public:
    explicit RailBuilder(std::size_t rails) : segment_(rails, 0) {}

    void boundary(std::size_t rail, const Qubit &v) {
        net_.add(Tensor::qubit_legs({make_index(id(rail), segment_[rail])}, {v[0], v[1]}));
    }

    /// Operator `m` of dimension 2^k on `rails` (first rail most significant).
    void op(const std::vector<std::size_t> &rails, const Matrix &m) {
        const std::size_t k = rails.size();
        std::vector<IndexId> legs(2 * k);
        for (std::size_t i = 0; i < k; ++i) {
            legs[k + i] = make_index(id(rails[i]), segment_[rails[i]]);
            legs[i] = make_index(id(rails[i]), ++segment_[rails[i]]);
        }
        std::vector<Complex> data(static_cast<std::size_t>(m.size()));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                data[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
            }
        }
        net_.add(Tensor::qubit_legs(std::move(legs), std::move(data)));
    }

    TensorNetwork take() { return std::move(net_); }

  private:
    static std::uint32_t id(std::size_t rail) { return static_cast<std::uint32_t>(rail); }

    std::vector<std::uint32_t> segment_;
    TensorNetwork net_;
};

inline std::vector<std::size_t> mirrored(const std::vector<std::size_t> &qubits,
                                         std::size_t n) {
    std::vector<std::size_t> out = qubits;
    for (auto &q : out) {
        q += n;
    }
    return out;
}

inline void add_element(RailBuilder &b, const Element &e, std::size_t n) {
    if (const auto *ch = std::get_if<ChannelFault>(&e)) {
        std::vector<std::size_t> rails = ch->qubits;
        const auto mirror = mirrored(ch->qubits, n);
        rails.insert(rails.end(), mirror.begin(), mirror.end());
        b.op(rails, matrix_representation(ch->channel));
        return;
    }
    const Gate &g = *element_gate(e);
    const Matrix u = gate_matrix(g);
    b.op(g.qubits, u);
    b.op(mirrored(g.qubits, n), u.conjugate());
}

inline Qubit conj(const Qubit &v) { return {std::conj(v[0]), std::conj(v[1])}; }

/// Superoperator of a unitary or channel element embedded on `support`.
inline Matrix superoperator_on(const Element &e, const std::vector<std::size_t> &support);

/// Embeds `m`, acting on the qubits `qubits`, into the 2^k space of `support`
/// (first support qubit most significant).
inline Matrix embed(const Matrix &m, const std::vector<std::size_t> &qubits,
                    const std::vector<std::size_t> &support) {
    const std::size_t k = support.size();
    const std::size_t dim = std::size_t{1} << k;
    std::vector<std::size_t> shift(qubits.size());
    std::size_t mask = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const auto pos = static_cast<std::size_t>(
            std::find(support.begin(), support.end(), qubits[i]) - support.begin());
        shift[i] = k - 1 - pos;
        mask |= std::size_t{1} << shift[i];
    }
    const auto sub = [&](std::size_t x) {
        std::size_t s = 0;
        for (std::size_t i = 0; i < shift.size(); ++i) {
            s = (s << 1) | ((x >> shift[i]) & 1U);
        }
        return s;
    };
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~mask) == (c & ~mask)) {
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    m(static_cast<Eigen::Index>(sub(r)), static_cast<Eigen::Index>(sub(c)));
            }
        }
    }
    return out;
}

inline Matrix superoperator_on(const Element &e, const std::vector<std::size_t> &support) {
    const auto &qs = element_qubits(e);
    if (const auto *ch = std::get_if<ChannelFault>(&e)) {
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << support.size());
        Matrix s = Matrix::Zero(d * d, d * d);
        for (const auto &k : ch->channel.kraus()) {
            const Matrix big = embed(k, qs, support);
            s += kron(big, big.conjugate());
        }
        return s;
    }
    const Matrix big = embed(gate_matrix(*element_gate(e)), qs, support);
    return kron(big, big.conjugate());
}

/// Whether two elements commute as maps on density matrices.
inline bool elements_commute(const Element &a, const Element &b) {
    std::vector<std::size_t> support = element_qubits(a);
    for (std::size_t q : element_qubits(b)) {
        if (std::find(support.begin(), support.end(), q) == support.end()) {
            support.push_back(q);
        }
    }
    const Gate *ga = element_gate(a);
    const Gate *gb = element_gate(b);
    if (ga != nullptr && gb != nullptr) {
        const Matrix ua = embed(gate_matrix(*ga), ga->qubits, support);
        const Matrix ub = embed(gate_matrix(*gb), gb->qubits, support);
        return max_abs(ua * ub - ub * ua) <= tol::kCommute;
    }
    const Matrix sa = superoperator_on(a, support);
    const Matrix sb = superoperator_on(b, support);
    return max_abs(sa * sb - sb * sa) <= tol::kCommute;
}

} // namespace detail

/// Closed network whose value is <psi_e| E_f(|psi_t><psi_t|) |psi_e>.
///
/// Node order: 2n boundary vectors (rails 0..2n-1), the element tensors in
/// circuit order, then 2n terminal covectors.
inline TensorNetwork build_doubled_network(const FaultyCircuit &fc, const ProductState &psi_t,
                                           const ProductState &psi_e) {
    const std::size_t n = fc.n_qubits();
    if (psi_t.size() != n || psi_e.size() != n) {
        throw InvalidInput("state has " +
                           std::to_string(psi_t.size() != n ? psi_t.size() : psi_e.size()) +
                           " qubits but the circuit has " + std::to_string(n));
    }
    detail::RailBuilder b(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
        b.boundary(q, psi_t[q]);
    }
    for (std::size_t q = 0; q < n; ++q) {
        b.boundary(q + n, detail::conj(psi_t[q]));
    }
    for (const auto &e : fc.elements()) {
        detail::add_element(b, e, n);
    }
    for (std::size_t q = 0; q < n; ++q) {
        b.boundary(q, detail::conj(psi_e[q]));
    }
    for (std::size_t q = 0; q < n; ++q) {
        b.boundary(q + n, psi_e[q]);
    }
    return b.take();
}

/// The faulty sequence and the ideal gates still to be inverted after
/// trailing-gate cancellation.
struct CancelledCircuits {
    FaultyCircuit faulty;
    Circuit ideal;
};

/// Drops every ideal gate after the last fault, together with its inverse
/// in the appended sequence. With no faults both results are empty.
inline CancelledCircuits cancel_trailing_gates(const FaultyCircuit &fc, const Circuit &ideal) {
    if (fc.n_qubits() != ideal.n_qubits()) {
        throw InvalidInput("faulty and ideal circuits differ in qubit count");
    }
    const auto last = fc.last_fault_index();
    const std::size_t keep = last ? *last + 1 : 0;
    std::vector<Element> elements(fc.elements().begin(),
                                  fc.elements().begin() + static_cast<std::ptrdiff_t>(keep));
    Circuit kept(ideal.n_qubits());
    std::size_t gate = 0;
    for (const auto &e : elements) {
        if (!is_fault(e)) {
            kept.add(ideal.gates()[gate++]);
        }
    }
    return {FaultyCircuit(fc.n_qubits(), std::move(elements)), std::move(kept)};
}

struct FidelityNetworkOptions {
    /// Remove ideal gates after the last fault and their inverses.
    bool cancel_trailing = true;
    /// Also remove any ideal gate that commutes with every later element on
    /// its qubits; it then meets its own inverse and cancels.
    bool cancel_commuting = true;
    /// Omit rail pairs no remaining element touches (each contributes 1).
    bool drop_idle_rails = true;
};

namespace detail {

/// Indices of the elements that survive commuting-gate cancellation.
inline std::vector<bool> commuting_survivors(const FaultyCircuit &fc) {
    const auto &els = fc.elements();
    std::vector<bool> kept(els.size(), true);
    // later[q]: kept elements after the current position that touch q.
    std::vector<std::vector<std::size_t>> later(fc.n_qubits());
    for (std::size_t j = els.size(); j-- > 0;) {
        const auto &qs = element_qubits(els[j]);
        if (!is_fault(els[j])) {
            bool free = true;
            std::vector<std::size_t> seen;
            for (std::size_t q : qs) {
                for (auto it = later[q].rbegin(); free && it != later[q].rend(); ++it) {
                    if (std::find(seen.begin(), seen.end(), *it) != seen.end()) {
                        continue;
                    }
                    seen.push_back(*it);
                    free = elements_commute(els[j], els[*it]);
                }
            }
            kept[j] = !free;
        }
        if (kept[j]) {
            for (std::size_t q : qs) {
                later[q].push_back(j);
            }
        }
    }
    return kept;
}

} // namespace detail

namespace detail {

/// The elements left after the cancellations selected in `opts`.
inline std::vector<Element> fidelity_elements(const FaultyCircuit &fc, const Circuit &ideal,
                                              const FidelityNetworkOptions &opts) {
    if (!(strip_faults(fc) == ideal)) {
        throw InvalidInput("the fault-free part of the circuit differs from the ideal circuit");
    }
    std::vector<Element> elements = opts.cancel_trailing
                                        ? cancel_trailing_gates(fc, ideal).faulty.elements()
                                        : fc.elements();
    if (opts.cancel_commuting) {
        const FaultyCircuit trimmed(fc.n_qubits(), std::move(elements));
        const auto kept = commuting_survivors(trimmed);
        elements.clear();
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (kept[i]) {
                elements.push_back(trimmed.elements()[i]);
            }
        }
    }
    return elements;
}

inline std::vector<bool> active_rails(const std::vector<Element> &elements, std::size_t n,
                                      bool drop_idle) {
    std::vector<bool> active(n, !drop_idle);
    for (const auto &e : elements) {
        for (std::size_t q : element_qubits(e)) {
            active[q] = true;
        }
    }
    return active;
}

inline void check_state(const ProductState &s, std::size_t n) {
    if (s.size() != n) {
        throw InvalidInput("state has " + std::to_string(s.size()) +
                           " qubits but the circuit has " + std::to_string(n));
    }
}

} // namespace detail

/// Closed network whose value is F(U|psi_t>, E_f(psi_t)): the doubled faulty
/// network followed by the inverse ideal circuit and <psi_t| covectors.
inline TensorNetwork build_fidelity_network(const FaultyCircuit &fc, const Circuit &ideal,
                                            const ProductState &psi_t,
                                            const FidelityNetworkOptions &opts = {}) {
    const std::size_t n = fc.n_qubits();
    detail::check_state(psi_t, n);
    const std::vector<Element> elements = detail::fidelity_elements(fc, ideal, opts);
    if (opts.cancel_trailing && std::none_of(elements.begin(), elements.end(), is_fault)) {
        return {};
    }
    const auto active = detail::active_rails(elements, n, opts.drop_idle_rails);

    detail::RailBuilder b(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
        if (active[q]) {
            b.boundary(q, psi_t[q]);
            b.boundary(q + n, detail::conj(psi_t[q]));
        }
    }
    for (const auto &e : elements) {
        detail::add_element(b, e, n);
    }
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
        if (const auto *g = std::get_if<IdealGate>(&*it)) {
            const Matrix u = gate_matrix(g->gate);
            b.op(g->gate.qubits, u.adjoint());
            b.op(detail::mirrored(g->gate.qubits, n), u.transpose());
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (active[q]) {
            b.boundary(q, detail::conj(psi_t[q]));
            b.boundary(q + n, psi_t[q]);
        }
    }
    return b.take();
}

inline bool has_channels(const FaultyCircuit &fc) {
    return std::any_of(fc.elements().begin(), fc.elements().end(), [](const Element &e) {
        return std::holds_alternative<ChannelFault>(e);
    });
}

/// Single-copy network with value <psi_e| U_f |psi_t> for a faulty circuit
/// made of unitaries only; the fault effect is its squared magnitude.
inline TensorNetwork build_amplitude_network(const FaultyCircuit &fc, const ProductState &psi_t,
                                             const ProductState &psi_e) {
    const std::size_t n = fc.n_qubits();
    detail::check_state(psi_t, n);
    detail::check_state(psi_e, n);
    if (has_channels(fc)) {
        throw InvalidInput("amplitude networks need a circuit without channels");
    }
    detail::RailBuilder b(n);
    for (std::size_t q = 0; q < n; ++q) {
        b.boundary(q, psi_t[q]);
    }
    for (const auto &e : fc.elements()) {
        const Gate &g = *element_gate(e);
        b.op(g.qubits, gate_matrix(g));
    }
    for (std::size_t q = 0; q < n; ++q) {
        b.boundary(q, detail::conj(psi_e[q]));
    }
    return b.take();
}

/// Single-copy network with value <psi_t| U^dagger U_f |psi_t> for a faulty
/// circuit made of unitaries only, after the cancellations in `opts`.
inline TensorNetwork build_fidelity_amplitude_network(const FaultyCircuit &fc,
                                                      const Circuit &ideal,
                                                      const ProductState &psi_t,
                                                      const FidelityNetworkOptions &opts = {}) {
    const std::size_t n = fc.n_qubits();
    detail::check_state(psi_t, n);
    if (has_channels(fc)) {
        throw InvalidInput("amplitude networks need a circuit without channels");
    }
    const std::vector<Element> elements = detail::fidelity_elements(fc, ideal, opts);
    if (opts.cancel_trailing && std::none_of(elements.begin(), elements.end(), is_fault)) {
        return {};
    }
    const auto active = detail::active_rails(elements, n, opts.drop_idle_rails);
    detail::RailBuilder b(n);
    for (std::size_t q = 0; q < n; ++q) {
        if (active[q]) {
            b.boundary(q, psi_t[q]);
        }
    }
    for (const auto &e : elements) {
        const Gate &g = *element_gate(e);
        b.op(g.qubits, gate_matrix(g));
    }
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
        if (const auto *g = std::get_if<IdealGate>(&*it)) {
            b.op(g->gate.qubits, gate_matrix(g->gate).adjoint());
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (active[q]) {
            b.boundary(q, detail::conj(psi_t[q]));
        }
    }
    return b.take();
}

/// JSON view of a network: per node its dims and legs (as [rail, segment]),
/// plus the data as [re, im] pairs when `include_data` is set.
inline nlohmann::json network_to_json(const TensorNetwork &net, bool include_data = false) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto &t : net.nodes()) {
        nlohmann::json legs = nlohmann::json::array();
        for (IndexId leg : t.legs()) {
            legs.push_back({index_rail(leg), index_segment(leg)});
        }
        nlohmann::json node = {{"dims", t.dims()}, {"legs", legs}, {"has_data", include_data}};
        if (include_data) {
            nlohmann::json data = nlohmann::json::array();
            for (const auto &z : t.data()) {
                data.push_back({z.real(), z.imag()});
            }
            node["data"] = std::move(data);
        }
        nodes.push_back(std::move(node));
    }
    return {{"nodes", std::move(nodes)}};
}

} // namespace qfault
