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
 * @file contraction.hpp
 * @brief Greedy contraction-order planning and plan execution.
 *
 * Node ids: the n input nodes are 0..n-1; step i of a plan creates node n+i.
 */

#pragma once

#include <chrono>
#include <cstdio>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qfault/tensor.hpp"

namespace qfault {

struct ContractionPlan {
    std::vector<std::pair<std::size_t, std::size_t>> steps;
};

struct ContractionStats {
    std::size_t max_rank = 0;
    double max_elements = 0;
    double flops_estimate = 0;
    double wall_time = 0;
    std::size_t steps = 0;
};

struct ResourceLimits {
    /// Largest tensor execute() may materialize.
    double max_elements = 1073741824.0; // 2^30
    /// Wall-clock budget in seconds; checked between steps.
    double timeout_s = 3600.0;
};

namespace detail {

/// Structural view of a node used by the planner.
struct PlanNode {
    std::vector<IndexId> legs;
    std::vector<std::size_t> dims;
    double size = 1;
    bool alive = true;
};

inline PlanNode merged(const PlanNode &a, const PlanNode &b, double *shared_size) {
    PlanNode out;
    double shared = 1;
    for (std::size_t i = 0; i < a.legs.size(); ++i) {
        if (std::find(b.legs.begin(), b.legs.end(), a.legs[i]) == b.legs.end()) {
            out.legs.push_back(a.legs[i]);
            out.dims.push_back(a.dims[i]);
            out.size *= static_cast<double>(a.dims[i]);
        } else {
            shared *= static_cast<double>(a.dims[i]);
        }
    }
    for (std::size_t i = 0; i < b.legs.size(); ++i) {
        if (std::find(a.legs.begin(), a.legs.end(), b.legs[i]) == a.legs.end()) {
            out.legs.push_back(b.legs[i]);
            out.dims.push_back(b.dims[i]);
            out.size *= static_cast<double>(b.dims[i]);
        }
    }
    if (shared_size != nullptr) {
        *shared_size = shared;
    }
    return out;
}

inline double merged_size(const PlanNode &a, const PlanNode &b) {
    double shared = 1;
    for (std::size_t i = 0; i < a.legs.size(); ++i) {
        if (std::find(b.legs.begin(), b.legs.end(), a.legs[i]) != b.legs.end()) {
            shared *= static_cast<double>(a.dims[i]);
        }
    }
    return a.size * b.size / (shared * shared);
}

inline ResourceError cap_error(std::size_t step, std::size_t a, std::size_t b, double size,
                               double cap) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "step %zu (nodes %zu, %zu) would materialize %.0f elements, above the cap "
                  "of %.0f",
                  step, a, b, size, cap);
    return ResourceError(buf);
}

inline PlanNode plan_node(const Tensor &t) {
    return {t.legs(), t.dims(), static_cast<double>(t.size()), true};
}

} // namespace detail

/// Size-greedy order: repeatedly merge the connected pair minimizing
/// size(result) - size(a) - size(b). Equal costs go to the smaller result,
/// then to the smaller (id, partner id).
/// Disconnected components are joined smallest-first by outer products.
inline ContractionPlan plan_greedy(const TensorNetwork &net) {
    if (net.empty()) {
        throw InvalidInput("cannot plan an empty network");
    }
    using detail::PlanNode;
    std::vector<PlanNode> nodes;
    nodes.reserve(2 * net.size());
    std::unordered_map<IndexId, std::vector<std::size_t>> owners;
    for (const auto &t : net.nodes()) {
        for (IndexId leg : t.legs()) {
            owners[leg].push_back(nodes.size());
        }
        nodes.push_back(detail::plan_node(t));
    }

    using Candidate = std::tuple<double, double, std::size_t, std::size_t>;
    std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;
    const auto push = [&](std::size_t a, std::size_t b) {
        const double size = detail::merged_size(nodes[a], nodes[b]);
        queue.emplace(size - nodes[a].size - nodes[b].size, size, std::min(a, b),
                      std::max(a, b));
    };
    const auto neighbours = [&](std::size_t id) {
        std::vector<std::size_t> out;
        for (IndexId leg : nodes[id].legs) {
            for (std::size_t other : owners[leg]) {
                if (other != id && nodes[other].alive &&
                    std::find(out.begin(), out.end(), other) == out.end()) {
                    out.push_back(other);
                }
            }
        }
        return out;
    };

    for (std::size_t id = 0; id < nodes.size(); ++id) {
        for (std::size_t other : neighbours(id)) {
            if (other > id) {
                push(id, other);
            }
        }
    }

    ContractionPlan plan;
    std::size_t live = nodes.size();
    while (live > 1) {
        std::size_t a = 0;
        std::size_t b = 0;
        bool found = false;
        while (!queue.empty()) {
            const auto [cost, size, lo, hi] = queue.top();
            queue.pop();
            if (nodes[lo].alive && nodes[hi].alive) {
                a = lo;
                b = hi;
                found = true;
                break;
            }
        }
        if (!found) {
            // No connected pair left: outer product of the two smallest nodes.
            std::optional<std::size_t> first;
            std::optional<std::size_t> second;
            const auto smaller = [&](std::size_t x, std::size_t y) {
                return nodes[x].size < nodes[y].size ||
                       (nodes[x].size == nodes[y].size && x < y);
            };
            for (std::size_t id = 0; id < nodes.size(); ++id) {
                if (!nodes[id].alive) {
                    continue;
                }
                if (!first || smaller(id, *first)) {
                    second = first;
                    first = id;
                } else if (!second || smaller(id, *second)) {
                    second = id;
                }
            }
            a = std::min(*first, *second);
            b = std::max(*first, *second);
        }

        PlanNode c = detail::merged(nodes[a], nodes[b], nullptr);
        nodes[a].alive = false;
        nodes[b].alive = false;
        const std::size_t cid = nodes.size();
        for (IndexId leg : c.legs) {
            auto &own = owners[leg];
            std::replace(own.begin(), own.end(), a, cid);
            std::replace(own.begin(), own.end(), b, cid);
        }
        nodes.push_back(std::move(c));
        plan.steps.emplace_back(a, b);
        --live;
        for (std::size_t other : neighbours(cid)) {
            push(cid, other);
        }
    }
    return plan;
}

/// Peak rank/size and multiply-add count of a plan, without contracting.
inline ContractionStats estimate_plan(const TensorNetwork &net,
                                      const ContractionPlan &plan) {
    using detail::PlanNode;
    std::vector<PlanNode> nodes;
    ContractionStats stats;
    for (const auto &t : net.nodes()) {
        nodes.push_back(detail::plan_node(t));
        stats.max_rank = std::max(stats.max_rank, t.rank());
        stats.max_elements = std::max(stats.max_elements, static_cast<double>(t.size()));
    }
    for (const auto &[a, b] : plan.steps) {
        if (a >= nodes.size() || b >= nodes.size() || a == b || !nodes[a].alive ||
            !nodes[b].alive) {
            throw InvalidInput("plan does not match the network");
        }
        double shared = 1;
        PlanNode c = detail::merged(nodes[a], nodes[b], &shared);
        stats.flops_estimate += nodes[a].size * nodes[b].size / shared;
        stats.max_rank = std::max(stats.max_rank, c.legs.size());
        stats.max_elements = std::max(stats.max_elements, c.size);
        nodes[a].alive = nodes[b].alive = false;
        nodes.push_back(std::move(c));
        ++stats.steps;
    }
    return stats;
}

struct ContractionResult {
    Tensor tensor;
    ContractionStats stats;

    /// The value of a closed network.
    Complex scalar() const {
        if (tensor.rank() != 0) {
            throw InvalidInput("network has open legs; result is not a scalar");
        }
        return tensor.data()[0];
    }
};

/// Applies the steps of `plan` in order. Every step is checked against the
/// element cap before the first contraction. An empty network evaluates to 1.
inline ContractionResult execute(const TensorNetwork &net, const ContractionPlan &plan,
                                 const ResourceLimits &limits = {}) {
    const auto start = std::chrono::steady_clock::now();
    ContractionResult result;
    auto &stats = result.stats;
    if (net.empty()) {
        if (!plan.steps.empty()) {
            throw InvalidInput("plan does not match the network");
        }
        result.tensor = Tensor::scalar(1.0);
        return result;
    }

    // Structural pass first, so an over-cap step fails before any work.
    {
        std::vector<detail::PlanNode> shapes;
        shapes.reserve(net.size() + plan.steps.size());
        for (const auto &t : net.nodes()) {
            shapes.push_back(detail::plan_node(t));
        }
        for (std::size_t step = 0; step < plan.steps.size(); ++step) {
            const auto [a, b] = plan.steps[step];
            if (a >= shapes.size() || b >= shapes.size() || a == b || !shapes[a].alive ||
                !shapes[b].alive) {
                throw InvalidInput("plan does not match the network at step " +
                                   std::to_string(step));
            }
            detail::PlanNode c = detail::merged(shapes[a], shapes[b], nullptr);
            if (c.size > limits.max_elements) {
                throw detail::cap_error(step, a, b, c.size, limits.max_elements);
            }
            shapes[a].alive = shapes[b].alive = false;
            shapes.push_back(std::move(c));
        }
    }

    std::vector<std::optional<Tensor>> live;
    live.reserve(net.size() + plan.steps.size());
    for (const auto &t : net.nodes()) {
        live.emplace_back(t);
        stats.max_rank = std::max(stats.max_rank, t.rank());
        stats.max_elements = std::max(stats.max_elements, static_cast<double>(t.size()));
    }
    std::size_t remaining = net.size();
    for (std::size_t step = 0; step < plan.steps.size(); ++step) {
        const auto [a, b] = plan.steps[step];
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > limits.timeout_s) {
            throw TimeoutError("contraction exceeded " + std::to_string(limits.timeout_s) +
                               " s before step " + std::to_string(step));
        }
        const detail::PlanNode pa = detail::plan_node(*live[a]);
        const detail::PlanNode pb = detail::plan_node(*live[b]);
        double shared = 1;
        detail::merged(pa, pb, &shared);
        Tensor c = contract_pair(*live[a], *live[b]);
        live[a].reset();
        live[b].reset();
        stats.flops_estimate += pa.size * pb.size / shared;
        stats.max_rank = std::max(stats.max_rank, c.rank());
        stats.max_elements = std::max(stats.max_elements, static_cast<double>(c.size()));
        ++stats.steps;
        live.emplace_back(std::move(c));
        --remaining;
    }
    if (remaining != 1) {
        throw InvalidInput("plan leaves " + std::to_string(remaining) +
                           " nodes uncontracted");
    }
    for (auto &t : live) {
        if (t) {
            result.tensor = std::move(*t);
        }
    }
    stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// plan_greedy followed by execute; empty networks need no plan.
inline ContractionResult contract_greedy(const TensorNetwork &net,
                                         const ResourceLimits &limits = {}) {
    const auto start = std::chrono::steady_clock::now();
    ContractionResult r =
        net.empty() ? execute(net, ContractionPlan{}, limits)
                    : execute(net, plan_greedy(net), limits);
    r.stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace qfault
