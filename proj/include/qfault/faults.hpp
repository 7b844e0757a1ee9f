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
 * @file faults.hpp
 * @brief Faulty circuits and the two fault-injection plans.
 *
 * A FaultyCircuit interleaves the ideal gates of a Circuit with fault
 * elements: an erroneous unitary (a CRz after a CZ) or a Kraus channel.
 * Removing the faults gives back the ideal circuit exactly.
 */

#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfault/channels.hpp"
#include "qfault/circuit.hpp"
#include "qfault/random.hpp"

namespace qfault {

struct IdealGate {
    Gate gate;
};

struct UnitaryFault {
    Gate gate;
};

struct ChannelFault {
    KrausChannel channel;
    std::vector<std::size_t> qubits;
};

using Element = std::variant<IdealGate, UnitaryFault, ChannelFault>;

inline bool is_fault(const Element &e) {
    return !std::holds_alternative<IdealGate>(e);
}

/// The unitary carried by an element, or nullptr for a channel.
inline const Gate *element_gate(const Element &e) {
    if (const auto *g = std::get_if<IdealGate>(&e)) {
        return &g->gate;
    }
    if (const auto *u = std::get_if<UnitaryFault>(&e)) {
        return &u->gate;
    }
    return nullptr;
}

inline const std::vector<std::size_t> &element_qubits(const Element &e) {
    return std::visit(
        [](const auto &x) -> const std::vector<std::size_t> & {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ChannelFault>) {
                return x.qubits;
            } else {
                return x.gate.qubits;
            }
        },
        e);
}

class FaultyCircuit {
  public:
    FaultyCircuit(std::size_t n_qubits, std::vector<Element> elements)
        : n_qubits_(n_qubits), elements_(std::move(elements)) {
        if (n_qubits_ == 0) {
            throw InvalidInput("a circuit needs at least one qubit");
        }
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            try {
                check(elements_[i]);
            } catch (const InvalidInput &e) {
                throw InvalidInput("element " + std::to_string(i) + ": " +
                                   e.what());
            }
            if (is_fault(elements_[i])) {
                last_fault_ = i;
            }
        }
    }

    /// The ideal circuit with no faults.
    static FaultyCircuit from_ideal(const Circuit &c) {
        std::vector<Element> elements;
        elements.reserve(c.size());
        for (const auto &g : c.gates()) {
            elements.emplace_back(IdealGate{g});
        }
        return FaultyCircuit(c.n_qubits(), std::move(elements));
    }

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<Element> &elements() const { return elements_; }
    std::optional<std::size_t> last_fault_index() const { return last_fault_; }

    std::size_t fault_count() const {
        return static_cast<std::size_t>(std::count_if(
            elements_.begin(), elements_.end(),
            [](const Element &e) { return is_fault(e); }));
    }

  private:
    void check(const Element &e) const {
        if (const auto *ch = std::get_if<ChannelFault>(&e)) {
            if (ch->qubits.size() != ch->channel.arity()) {
                throw InvalidInput("channel arity does not match its operands");
            }
            for (std::size_t q : ch->qubits) {
                if (q >= n_qubits_) {
                    throw InvalidInput("qubit index " + std::to_string(q) +
                                       " out of range");
                }
            }
            if (ch->qubits.size() == 2 && ch->qubits[0] == ch->qubits[1]) {
                throw InvalidInput("duplicate operand");
            }
        } else {
            validate_gate(*element_gate(e), n_qubits_);
        }
    }

    std::size_t n_qubits_;
    std::vector<Element> elements_;
    std::optional<std::size_t> last_fault_;
};

/// The ideal circuit underlying a faulty one.
inline Circuit strip_faults(const FaultyCircuit &fc) {
    Circuit c(fc.n_qubits());
    for (const auto &e : fc.elements()) {
        if (const auto *g = std::get_if<IdealGate>(&e)) {
            c.add(g->gate);
        }
    }
    return c;
}

/// A CRz(theta) fault after every CZ, controlled on the CZ's operand 0.
struct UnitaryAfterEachCZ {
    double theta = 0.1;
};

/// m decoherence channels at distinct (gate, qubit) sites drawn uniformly
/// without replacement.
struct RandomDecoherence {
    std::size_t m = 0;
    NoiseParams params;
    std::uint64_t seed = 0;
};

using FaultPlan = std::variant<UnitaryAfterEachCZ, RandomDecoherence>;

/// Number of (gate, qubit) insertion sites of a circuit.
inline std::size_t insertion_sites(const Circuit &c) {
    return std::accumulate(c.gates().begin(), c.gates().end(), std::size_t{0},
                           [](std::size_t acc, const Gate &g) {
                               return acc + g.qubits.size();
                           });
}

inline FaultyCircuit inject_faults(const Circuit &c, const FaultPlan &plan) {
    std::vector<Element> out;
    if (const auto *u = std::get_if<UnitaryAfterEachCZ>(&plan)) {
        if (!std::isfinite(u->theta)) {
            throw InvalidInput("fault angle must be finite");
        }
        for (const auto &g : c.gates()) {
            out.emplace_back(IdealGate{g});
            if (g.kind == GateKind::CZ) {
                out.emplace_back(
                    UnitaryFault{Gate::crz(g.qubits[0], g.qubits[1], u->theta)});
            }
        }
        return FaultyCircuit(c.n_qubits(), std::move(out));
    }

    const auto &d = std::get<RandomDecoherence>(plan);
    d.params.validate();
    // Site s enumerates gate operands in order: gate 0 operand 0, ...
    std::vector<std::pair<std::size_t, std::size_t>> sites;
    sites.reserve(insertion_sites(c));
    for (std::size_t g = 0; g < c.size(); ++g) {
        for (std::size_t q : c.gates()[g].qubits) {
            sites.emplace_back(g, q);
        }
    }
    if (d.m > sites.size()) {
        throw InvalidInput("requested " + std::to_string(d.m) +
                           " faults but the circuit has only " +
                           std::to_string(sites.size()) + " insertion sites");
    }
    // Partial Fisher-Yates: the first m slots are a uniform m-subset.
    std::vector<std::size_t> order(sites.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(d.seed);
    for (std::size_t i = 0; i < d.m; ++i) {
        const std::size_t j = i + rng.below(order.size() - i);
        std::swap(order[i], order[j]);
    }
    std::vector<bool> chosen(sites.size(), false);
    for (std::size_t i = 0; i < d.m; ++i) {
        chosen[order[i]] = true;
    }

    const KrausChannel channel = decoherence(d.params);
    std::size_t s = 0;
    for (const auto &g : c.gates()) {
        out.emplace_back(IdealGate{g});
        for (std::size_t q : g.qubits) {
            if (chosen[s++]) {
                out.emplace_back(ChannelFault{channel, {q}});
            }
        }
    }
    return FaultyCircuit(c.n_qubits(), std::move(out));
}

inline FaultPlan parse_fault_plan(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw InvalidInput("fault plan needs a string \"kind\"");
    }
    const auto kind = j["kind"].get<std::string>();
    const auto number = [&j](const char *key) {
        if (!j.contains(key) || !j[key].is_number()) {
            throw InvalidInput(std::string("fault plan needs numeric \"") +
                               key + "\"");
        }
        return j[key].get<double>();
    };
    const auto integer = [&j](const char *key) {
        if (!j.contains(key) || !j[key].is_number_integer() ||
            j[key].get<long long>() < 0) {
            throw InvalidInput(std::string("fault plan needs non-negative "
                                           "integer \"") +
                               key + "\"");
        }
        return j[key].get<std::uint64_t>();
    };
    if (kind == "unitary_cz") {
        return UnitaryAfterEachCZ{number("theta")};
    }
    if (kind == "decoherence") {
        RandomDecoherence d;
        d.m = integer("m");
        d.params = NoiseParams{number("t1"), number("t2"), number("dt")};
        d.seed = integer("seed");
        d.params.validate();
        return d;
    }
    throw InvalidInput("unknown fault plan kind \"" + kind + "\"");
}

inline nlohmann::json fault_plan_to_json(const FaultPlan &plan) {
    if (const auto *u = std::get_if<UnitaryAfterEachCZ>(&plan)) {
        return {{"kind", "unitary_cz"}, {"theta", u->theta}};
    }
    const auto &d = std::get<RandomDecoherence>(plan);
    return {{"kind", "decoherence"}, {"m", d.m},          {"t1", d.params.t1},
            {"t2", d.params.t2},     {"dt", d.params.dt}, {"seed", d.seed}};
}

} // namespace qfault
