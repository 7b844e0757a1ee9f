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

#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qfault/circuit.hpp"

namespace qfault {

using json = nlohmann::json;

namespace detail {

inline InnerGate parse_inner(const json &j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw InvalidInput("inner gate needs a string \"kind\"");
    }
    const auto kind = gate_kind_from_name(j["kind"].get<std::string>());
    if (!kind) {
        throw InvalidInput("unknown gate name \"" +
                           j["kind"].get<std::string>() + "\"");
    }
    InnerGate inner{*kind, 0.0};
    if (j.contains("angle")) {
        if (!j["angle"].is_number()) {
            throw InvalidInput("inner angle must be a number");
        }
        inner.angle = j["angle"].get<double>();
    }
    return inner;
}

inline Gate parse_gate(const json &j) {
    if (!j.is_object()) {
        throw InvalidInput("gate must be an object");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw InvalidInput("missing string field \"kind\"");
    }
    const auto name = j["kind"].get<std::string>();
    const auto kind = gate_kind_from_name(name);
    if (!kind) {
        throw InvalidInput("unknown gate name \"" + name + "\"");
    }
    Gate g;
    g.kind = *kind;
    if (!j.contains("qubits") || !j["qubits"].is_array()) {
        throw InvalidInput("missing array field \"qubits\"");
    }
    for (const auto &q : j["qubits"]) {
        if (!q.is_number_integer() || q.get<long long>() < 0) {
            throw InvalidInput("qubit indices must be non-negative integers");
        }
        g.qubits.push_back(q.get<std::size_t>());
    }
    if (j.contains("angle")) {
        if (!j["angle"].is_number()) {
            throw InvalidInput("\"angle\" must be a number");
        }
        g.angle = j["angle"].get<double>();
    } else if (has_angle(g.kind)) {
        throw InvalidInput(name + " requires \"angle\"");
    }
    if (j.contains("inner")) {
        g.inner = parse_inner(j["inner"]);
    }
    return g;
}

} // namespace detail

/// Builds a Circuit from the JSON circuit document.
inline Circuit parse_circuit(const json &doc) {
    if (!doc.is_object()) {
        throw InvalidInput("circuit document must be a JSON object");
    }
    if (!doc.contains("n_qubits") || !doc["n_qubits"].is_number_integer() ||
        doc["n_qubits"].get<long long>() <= 0) {
        throw InvalidInput("\"n_qubits\" must be a positive integer");
    }
    if (!doc.contains("gates") || !doc["gates"].is_array()) {
        throw InvalidInput("\"gates\" must be an array");
    }
    Circuit c(doc["n_qubits"].get<std::size_t>());
    std::size_t index = 0;
    for (const auto &jg : doc["gates"]) {
        try {
            c.add(detail::parse_gate(jg));
        } catch (const InvalidInput &e) {
            throw InvalidInput("gate " + std::to_string(index) + ": " +
                               e.what());
        }
        ++index;
    }
    return c;
}

inline Circuit parse_circuit(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
    return parse_circuit(doc);
}

inline json gate_to_json(const Gate &g) {
    json j{{"kind", gate_name(g.kind)}, {"qubits", g.qubits}};
    if (has_angle(g.kind) || g.angle != 0.0) {
        j["angle"] = g.angle;
    }
    if (g.inner) {
        json inner{{"kind", gate_name(g.inner->kind)}};
        if (has_angle(g.inner->kind) || g.inner->angle != 0.0) {
            inner["angle"] = g.inner->angle;
        }
        j["inner"] = std::move(inner);
    }
    return j;
}

inline json serialize_circuit(const Circuit &c) {
    json gates = json::array();
    for (const auto &g : c.gates()) {
        gates.push_back(gate_to_json(g));
    }
    return json{{"n_qubits", c.n_qubits()}, {"gates", std::move(gates)}};
}

} // namespace qfault
