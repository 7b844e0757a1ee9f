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
 * @file generators.hpp
 * @brief Benchmark circuit families on rectangular grids.
 *
 * Qubit (r, c) of a rows x cols grid has index r * cols + c. Grid edges are
 * grouped into four colorings whose edges are pairwise disjoint:
 *   horizontal-even  (r, c)-(r, c+1) with c even
 *   horizontal-odd   (r, c)-(r, c+1) with c odd
 *   vertical-even    (r, c)-(r+1, c) with r even
 *   vertical-odd     (r, c)-(r+1, c) with r odd
 */

#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "qfault/circuit.hpp"
#include "qfault/random.hpp"

namespace qfault {

using Edge = std::pair<std::size_t, std::size_t>;

enum class GridColoring { HorizontalEven, HorizontalOdd, VerticalEven, VerticalOdd };

inline std::vector<Edge> grid_edges(std::size_t rows, std::size_t cols,
                                    GridColoring coloring) {
    std::vector<Edge> edges;
    const auto at = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
    switch (coloring) {
    case GridColoring::HorizontalEven:
    case GridColoring::HorizontalOdd: {
        const std::size_t start = coloring == GridColoring::HorizontalEven ? 0 : 1;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = start; c + 1 < cols; c += 2) {
                edges.emplace_back(at(r, c), at(r, c + 1));
            }
        }
        break;
    }
    case GridColoring::VerticalEven:
    case GridColoring::VerticalOdd: {
        const std::size_t start = coloring == GridColoring::VerticalEven ? 0 : 1;
        for (std::size_t r = start; r + 1 < rows; r += 2) {
            for (std::size_t c = 0; c < cols; ++c) {
                edges.emplace_back(at(r, c), at(r + 1, c));
            }
        }
        break;
    }
    }
    return edges;
}

inline constexpr std::array<GridColoring, 4> kQaoaColorings{
    GridColoring::HorizontalEven, GridColoring::HorizontalOdd,
    GridColoring::VerticalEven, GridColoring::VerticalOdd};

/// QAOA circuit for MaxCut-style ZZ costs on a side x side grid.
///
/// Preamble Ry(-pi/2), Rz(pi/2) on every qubit; each layer applies, for every
/// grid edge (u, v), the block CZ(u,v) Rz(2 gamma) on v, CZ(u,v), followed by
/// Rx(2 beta) on every qubit. `seed` is accepted for a uniform generator
/// signature; the construction is deterministic.
inline Circuit generate_qaoa(std::size_t side, std::size_t layers, double gamma,
                             double beta, std::uint64_t seed = 0) {
    (void)seed;
    if (side == 0 || layers == 0) {
        throw InvalidInput("qaoa needs side >= 1 and layers >= 1");
    }
    const std::size_t n = side * side;
    Circuit c(n);
    for (std::size_t q = 0; q < n; ++q) {
        c.add(Gate::ry(q, -std::numbers::pi / 2));
    }
    for (std::size_t q = 0; q < n; ++q) {
        c.add(Gate::rz(q, std::numbers::pi / 2));
    }
    for (std::size_t layer = 0; layer < layers; ++layer) {
        for (GridColoring coloring : kQaoaColorings) {
            const auto edges = grid_edges(side, side, coloring);
            // One moment per step: all CZs, all Rz, all CZs.
            for (const auto &[u, v] : edges) {
                c.add(Gate::cz(u, v));
            }
            for (const auto &[u, v] : edges) {
                c.add(Gate::rz(v, 2 * gamma));
            }
            for (const auto &[u, v] : edges) {
                c.add(Gate::cz(u, v));
            }
        }
        for (std::size_t q = 0; q < n; ++q) {
            c.add(Gate::rx(q, 2 * beta));
        }
    }
    return c;
}

/// Cyclic CZ pattern sequence of the random grid circuits (ABCDCDAB).
inline constexpr std::array<GridColoring, 8> kInstPatterns{
    GridColoring::HorizontalEven, GridColoring::HorizontalOdd,
    GridColoring::VerticalEven,   GridColoring::VerticalOdd,
    GridColoring::VerticalEven,   GridColoring::VerticalOdd,
    GridColoring::HorizontalEven, GridColoring::HorizontalOdd};

/// Supremacy-style random circuit on a rows x cols grid.
///
/// H on every qubit, then depth-1 cycles. Cycle t applies the CZs of
/// kInstPatterns[t % 8]; every qubit without a CZ in that cycle receives a
/// gate drawn uniformly from {T, Rx(pi/2), Ry(pi/2)}, excluding the kind that
/// qubit received last.
inline Circuit generate_inst(std::size_t rows, std::size_t cols,
                             std::size_t depth, std::uint64_t seed) {
    if (rows == 0 || cols == 0 || depth == 0) {
        throw InvalidInput("inst needs rows, cols, depth >= 1");
    }
    const std::size_t n = rows * cols;
    Circuit c(n);
    for (std::size_t q = 0; q < n; ++q) {
        c.add(Gate::h(q));
    }
    constexpr std::array<GateKind, 3> kChoices{GateKind::T, GateKind::Rx,
                                               GateKind::Ry};
    // Index into kChoices of the last 1-qubit gate per qubit; 3 = none yet.
    std::vector<std::size_t> last(n, 3);
    Rng rng(seed);
    for (std::size_t cycle = 0; cycle + 1 < depth; ++cycle) {
        std::vector<bool> busy(n, false);
        for (const auto &[u, v] :
             grid_edges(rows, cols, kInstPatterns[cycle % kInstPatterns.size()])) {
            c.add(Gate::cz(u, v));
            busy[u] = busy[v] = true;
        }
        for (std::size_t q = 0; q < n; ++q) {
            if (busy[q]) {
                continue;
            }
            std::size_t pick;
            if (last[q] == 3) {
                pick = rng.below(3);
            } else {
                pick = rng.below(2);
                if (pick >= last[q]) {
                    ++pick;
                }
            }
            last[q] = pick;
            const GateKind kind = kChoices[pick];
            c.add(Gate{kind, {q}, kind == GateKind::T ? 0.0 : std::numbers::pi / 2,
                         std::nullopt});
        }
    }
    return c;
}

} // namespace qfault
