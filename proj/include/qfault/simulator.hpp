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
 * @file simulator.hpp
 * @brief Fault effect, fidelity against the ideal output, and measurement
 * outcome probabilities of faulty circuits.
 */

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfault/contraction.hpp"
#include "qfault/faults.hpp"
#include "qfault/parallel.hpp"
#include "qfault/tensornet.hpp"

namespace qfault {

struct SimulationResult {
    /// Fidelity or probability in [0, 1].
    double value = 0;
    /// |Im| of the contracted scalar, discarded from value.
    double residual_imag = 0;
    /// Set when value was clamped from just outside [0, 1].
    bool clamped = false;
    ContractionStats stats;
    nlohmann::json metadata = nlohmann::json::object();
};

struct SimulationOptions {
    ResourceLimits limits;
    FidelityNetworkOptions network;
    /// Circuits without channels are evaluated as |amplitude|^2 on a
    /// single-copy network instead of the doubled one.
    bool amplitude_shortcut = true;
};

/// Real part of a contracted fidelity, clamped into [0, 1] when it lies
/// within tol::kClamp outside; further excursions raise Error.
inline SimulationResult finish_value(Complex z, const ContractionStats &stats) {
    SimulationResult r;
    r.residual_imag = std::abs(z.imag());
    r.stats = stats;
    double v = z.real();
    if (v < -tol::kClamp || v > 1 + tol::kClamp || !std::isfinite(v)) {
        throw Error("contracted value " + std::to_string(v) + " lies outside [0, 1]");
    }
    if (v < 0 || v > 1) {
        r.clamped = true;
        v = std::clamp(v, 0.0, 1.0);
    }
    r.value = v;
    return r;
}

namespace detail {

inline SimulationResult evaluate(const FaultyCircuit &fc, const TensorNetwork &net, bool amplitude,
                                 const ResourceLimits &limits) {
    const ContractionResult c = contract_greedy(net, limits);
    const Complex z = amplitude ? Complex{std::norm(c.scalar())} : c.scalar();
    SimulationResult r = finish_value(z, c.stats);
    r.metadata["n_qubits"] = fc.n_qubits();
    r.metadata["elements"] = fc.elements().size();
    r.metadata["faults"] = fc.fault_count();
    r.metadata["nodes"] = net.size();
    r.metadata["network"] = amplitude ? "amplitude" : "doubled";
    return r;
}

} // namespace detail

/// <psi_e| E_f(psi_t) |psi_e> by contracting the doubled network.
inline SimulationResult fault_effect(const FaultyCircuit &fc, const ProductState &psi_t,
                                     const ProductState &psi_e,
                                     const SimulationOptions &opts = {}) {
    if (opts.amplitude_shortcut && !has_channels(fc)) {
        return detail::evaluate(fc, build_amplitude_network(fc, psi_t, psi_e), true, opts.limits);
    }
    return detail::evaluate(fc, build_doubled_network(fc, psi_t, psi_e), false, opts.limits);
}

/// F(U|psi_t>, E_f(psi_t)) with U the ideal circuit.
inline SimulationResult fidelity_vs_ideal(const FaultyCircuit &fc, const Circuit &ideal,
                                          const ProductState &psi_t,
                                          const SimulationOptions &opts = {}) {
    if (opts.amplitude_shortcut && !has_channels(fc)) {
        return detail::evaluate(
            fc, build_fidelity_amplitude_network(fc, ideal, psi_t, opts.network), true,
            opts.limits);
    }
    return detail::evaluate(fc, build_fidelity_network(fc, ideal, psi_t, opts.network), false,
                            opts.limits);
}

/// Splits a dense 2^n vector into a product of single-qubit states. Throws
/// InvalidInput when it is not a product state within 1e-10.
inline ProductState product_from_dense(const Vector &v, std::size_t n) {
    if (v.size() != (Eigen::Index{1} << n)) {
        throw InvalidInput("vector length does not match " + std::to_string(n) + " qubits");
    }
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (std::abs(v(pivot)) < 1e-12) {
        throw InvalidInput("zero vector is not a state");
    }
    const auto p = static_cast<std::size_t>(pivot);
    std::vector<Qubit> qs(n);
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        Complex a = v(static_cast<Eigen::Index>(p & ~bit));
        Complex b = v(static_cast<Eigen::Index>(p | bit));
        const double norm = std::sqrt(std::norm(a) + std::norm(b));
        qs[q] = {a / norm, b / norm};
    }
    Vector rebuilt = ProductState(qs).dense();
    const Complex overlap = rebuilt.dot(v);
    if (std::abs(std::abs(overlap) - 1.0) > 1e-10 ||
        (rebuilt * overlap - v).cwiseAbs().maxCoeff() > 1e-10) {
        throw InvalidInput("vector is not a product state");
    }
    const Complex phase = overlap / std::abs(overlap);
    qs[0] = {qs[0][0] * phase, qs[0][1] * phase};
    return ProductState(std::move(qs));
}

/// Projective measurement whose outcome subspaces are spanned by
/// orthonormal product states.
class ProjectiveMeasurement {
  public:
    struct Outcome {
        std::string label;
        std::vector<ProductState> basis;
    };

    /// Validates orthonormality within each outcome (1e-10), and
    /// completeness (sum of projectors = I) when `check_complete` is set.
    explicit ProjectiveMeasurement(std::vector<Outcome> outcomes, bool check_complete = false)
        : outcomes_(std::move(outcomes)) {
        if (outcomes_.empty()) {
            throw InvalidInput("measurement needs at least one outcome");
        }
        const std::size_t n = outcomes_.front().basis.empty()
                                  ? 0
                                  : outcomes_.front().basis.front().size();
        for (const auto &o : outcomes_) {
            if (o.basis.empty()) {
                throw InvalidInput("outcome \"" + o.label + "\" has no basis vectors");
            }
            for (std::size_t i = 0; i < o.basis.size(); ++i) {
                if (o.basis[i].size() != n) {
                    throw InvalidInput("basis vectors differ in qubit count");
                }
                for (std::size_t j = 0; j <= i; ++j) {
                    const Complex ip = overlap(o.basis[i], o.basis[j]);
                    const double want = i == j ? 1.0 : 0.0;
                    if (std::abs(ip - want) > 1e-10) {
                        throw InvalidInput("basis of outcome \"" + o.label +
                                           "\" is not orthonormal");
                    }
                }
            }
        }
        if (check_complete) {
            const auto d = Eigen::Index{1} << n;
            Matrix sum = Matrix::Zero(d, d);
            for (const auto &o : outcomes_) {
                for (const auto &s : o.basis) {
                    const Vector v = s.dense();
                    sum += v * v.adjoint();
                }
            }
            if (max_abs(sum - Matrix::Identity(d, d)) > 1e-10) {
                throw InvalidInput("measurement projectors do not sum to the identity");
            }
        }
    }

    /// One outcome per computational basis state, labeled by its bit string.
    static ProjectiveMeasurement computational_basis(std::size_t n) {
        if (n == 0 || n > 20) {
            throw InvalidInput("computational basis needs 1..20 qubits");
        }
        std::vector<Outcome> outcomes;
        for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
            std::string label(n, '0');
            for (std::size_t q = 0; q < n; ++q) {
                if ((bits >> (n - 1 - q)) & 1U) {
                    label[q] = '1';
                }
            }
            outcomes.push_back({std::move(label), {ProductState::basis(n, bits)}});
        }
        return ProjectiveMeasurement(std::move(outcomes));
    }

    const std::vector<Outcome> &outcomes() const { return outcomes_; }

    std::size_t n_qubits() const { return outcomes_.front().basis.front().size(); }

  private:
    static Complex overlap(const ProductState &a, const ProductState &b) {
        Complex ip = 1.0;
        for (std::size_t q = 0; q < a.size(); ++q) {
            ip *= std::conj(a[q][0]) * b[q][0] + std::conj(a[q][1]) * b[q][1];
        }
        return ip;
    }

    std::vector<Outcome> outcomes_;
};

/// tr(P_i E_f(psi_t)) for every outcome i, as sums of fault effects over
/// the outcome's basis vectors. Terms run on up to `jobs` workers (0 picks
/// the default); the result does not depend on the worker count.
inline std::vector<std::pair<std::string, double>>
measurement_probabilities(const FaultyCircuit &fc, const ProductState &psi_t,
                          const ProjectiveMeasurement &meas, const SimulationOptions &opts = {},
                          std::size_t jobs = 0) {
    if (meas.n_qubits() != fc.n_qubits()) {
        throw InvalidInput("measurement and circuit differ in qubit count");
    }
    std::vector<std::pair<std::size_t, std::size_t>> terms;
    for (std::size_t i = 0; i < meas.outcomes().size(); ++i) {
        for (std::size_t k = 0; k < meas.outcomes()[i].basis.size(); ++k) {
            terms.emplace_back(i, k);
        }
    }
    std::vector<double> values(terms.size());
    parallel_for(terms.size(), resolve_jobs(jobs), [&](std::size_t t) {
        const auto [i, k] = terms[t];
        values[t] = fault_effect(fc, psi_t, meas.outcomes()[i].basis[k], opts).value;
    });
    std::vector<std::pair<std::string, double>> out;
    for (const auto &o : meas.outcomes()) {
        out.emplace_back(o.label, 0.0);
    }
    for (std::size_t t = 0; t < terms.size(); ++t) {
        out[terms[t].first].second += values[t];
    }
    return out;
}

inline nlohmann::json stats_to_json(const ContractionStats &s) {
    return {{"max_rank", s.max_rank},
            {"max_elements", s.max_elements},
            {"flops_estimate", s.flops_estimate},
            {"wall_time_s", s.wall_time},
            {"steps", s.steps}};
}

inline nlohmann::json result_to_json(const SimulationResult &r) {
    return {{"value", r.value},
            {"residual_imag", r.residual_imag},
            {"clamped", r.clamped},
            {"stats", stats_to_json(r.stats)},
            {"metadata", r.metadata}};
}

} // namespace qfault
