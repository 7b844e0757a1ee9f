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
 * @file tensor.hpp
 * @brief Labeled dense tensors, networks of them, and pairwise contraction.
 *
 * A Tensor stores its entries row-major over its legs: the last leg varies
 * fastest. Legs are identified by IndexId values; two tensors sharing an
 * IndexId are connected by that leg.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qfault/common.hpp"

namespace qfault {

using IndexId = std::uint64_t;

/// Index identifier for wire segment `segment` of rail `rail`.
inline constexpr IndexId make_index(std::uint32_t rail, std::uint32_t segment) {
    return (static_cast<IndexId>(rail) << 32) | segment;
}
inline constexpr std::uint32_t index_rail(IndexId id) {
    return static_cast<std::uint32_t>(id >> 32);
}
inline constexpr std::uint32_t index_segment(IndexId id) {
    return static_cast<std::uint32_t>(id & 0xffffffffU);
}

class Tensor {
  public:
    Tensor() : data_{Complex{1.0}} {}

    Tensor(std::vector<IndexId> legs, std::vector<std::size_t> dims,
           std::vector<Complex> data)
        : legs_(std::move(legs)), dims_(std::move(dims)), data_(std::move(data)) {
        if (legs_.size() != dims_.size()) {
            throw InvalidInput("tensor needs one dimension per leg");
        }
        std::size_t expected = 1;
        for (std::size_t d : dims_) {
            if (d == 0) {
                throw InvalidInput("tensor dimensions must be positive");
            }
            expected *= d;
        }
        if (data_.size() != expected) {
            throw InvalidInput("tensor data length " + std::to_string(data_.size()) +
                               " does not match dimensions (" +
                               std::to_string(expected) + ")");
        }
        std::vector<IndexId> sorted = legs_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InvalidInput("tensor leg identifiers must be unique");
        }
    }

    /// Rank-0 tensor holding one value.
    static Tensor scalar(Complex value) {
        Tensor t;
        t.data_[0] = value;
        return t;
    }

    /// Tensor with all legs of dimension 2.
    static Tensor qubit_legs(std::vector<IndexId> legs, std::vector<Complex> data) {
        std::vector<std::size_t> dims(legs.size(), 2);
        return Tensor(std::move(legs), std::move(dims), std::move(data));
    }

    const std::vector<IndexId> &legs() const { return legs_; }
    const std::vector<std::size_t> &dims() const { return dims_; }
    const std::vector<Complex> &data() const { return data_; }
    std::size_t rank() const { return legs_.size(); }
    std::size_t size() const { return data_.size(); }

    std::size_t dim_of(IndexId leg) const {
        const auto it = std::find(legs_.begin(), legs_.end(), leg);
        return it == legs_.end() ? 0 : dims_[static_cast<std::size_t>(it - legs_.begin())];
    }

    /// Same entries with legs reordered to `order` (a permutation of legs()).
    Tensor permuted(const std::vector<IndexId> &order) const;

  private:
    std::vector<IndexId> legs_;
    std::vector<std::size_t> dims_;
    std::vector<Complex> data_;
};

namespace detail {

/// Gathers `src` (row-major over src_dims) into the order given by `perm`,
/// where output leg k is source leg perm[k].
inline std::vector<Complex> permute_data(const std::vector<Complex> &src,
                                         const std::vector<std::size_t> &src_dims,
                                         const std::vector<std::size_t> &perm) {
    const std::size_t rank = perm.size();
    std::vector<std::size_t> src_stride(rank, 1);
    for (std::size_t k = rank; k-- > 1;) {
        src_stride[k - 1] = src_stride[k] * src_dims[k];
    }
    // Longest trailing run that is already in place can be copied as a block.
    std::size_t keep = 0;
    while (keep < rank && perm[rank - 1 - keep] == rank - 1 - keep) {
        ++keep;
    }
    std::size_t block = 1;
    for (std::size_t k = rank - keep; k < rank; ++k) {
        block *= src_dims[k];
    }
    const std::size_t outer_rank = rank - keep;
    std::vector<std::size_t> out_dims(outer_rank);
    std::vector<std::size_t> stride(outer_rank);
    for (std::size_t k = 0; k < outer_rank; ++k) {
        out_dims[k] = src_dims[perm[k]];
        stride[k] = src_stride[perm[k]];
    }
    std::vector<Complex> out(src.size());
    std::vector<std::size_t> counter(outer_rank, 0);
    std::size_t offset = 0;
    for (std::size_t dst = 0; dst < out.size(); dst += block) {
        std::memcpy(static_cast<void *>(out.data() + dst),
                    static_cast<const void *>(src.data() + offset),
                    block * sizeof(Complex));
        for (std::size_t k = outer_rank; k-- > 0;) {
            offset += stride[k];
            if (++counter[k] < out_dims[k]) {
                break;
            }
            offset -= stride[k] * out_dims[k];
            counter[k] = 0;
        }
    }
    return out;
}

} // namespace detail

inline Tensor Tensor::permuted(const std::vector<IndexId> &order) const {
    if (order == legs_) {
        return *this;
    }
    if (order.size() != legs_.size()) {
        throw InvalidInput("permutation must list every leg once");
    }
    std::vector<std::size_t> perm(order.size());
    std::vector<std::size_t> dims(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto it = std::find(legs_.begin(), legs_.end(), order[k]);
        if (it == legs_.end()) {
            throw InvalidInput("permutation names an unknown leg");
        }
        perm[k] = static_cast<std::size_t>(it - legs_.begin());
        dims[k] = dims_[perm[k]];
    }
    return Tensor(order, std::move(dims), detail::permute_data(data_, dims_, perm));
}

namespace detail {

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

struct PairLayout {
    std::vector<IndexId> free_a;
    std::vector<IndexId> shared;
    std::vector<IndexId> free_b;
    std::vector<std::size_t> free_a_dims;
    std::vector<std::size_t> free_b_dims;
    std::size_t m = 1;
    std::size_t k = 1;
    std::size_t n = 1;
};

inline PairLayout pair_layout(const Tensor &a, const Tensor &b) {
    PairLayout p;
    for (std::size_t i = 0; i < a.rank(); ++i) {
        const IndexId leg = a.legs()[i];
        const std::size_t db = b.dim_of(leg);
        if (db == 0) {
            p.free_a.push_back(leg);
            p.free_a_dims.push_back(a.dims()[i]);
            p.m *= a.dims()[i];
        } else {
            if (db != a.dims()[i]) {
                throw InvalidInput("dimension mismatch on shared leg " +
                                   std::to_string(leg));
            }
            p.shared.push_back(leg);
            p.k *= db;
        }
    }
    for (std::size_t i = 0; i < b.rank(); ++i) {
        const IndexId leg = b.legs()[i];
        if (a.dim_of(leg) == 0) {
            p.free_b.push_back(leg);
            p.free_b_dims.push_back(b.dims()[i]);
            p.n *= b.dims()[i];
        }
    }
    return p;
}

inline std::vector<IndexId> concat(const std::vector<IndexId> &x,
                                   const std::vector<IndexId> &y) {
    std::vector<IndexId> out = x;
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

} // namespace detail

/// Sums over every leg shared by a and b. The result carries a's remaining
/// legs followed by b's; with nothing shared it is the outer product.
inline Tensor contract_pair(const Tensor &a, const Tensor &b) {
    using detail::ConstRowMap;
    using detail::RowMatrix;
    const detail::PairLayout p = detail::pair_layout(a, b);
    const auto m = static_cast<Eigen::Index>(p.m);
    const auto k = static_cast<Eigen::Index>(p.k);
    const auto n = static_cast<Eigen::Index>(p.n);

    std::vector<IndexId> out_legs = detail::concat(p.free_a, p.free_b);
    std::vector<std::size_t> out_dims = p.free_a_dims;
    out_dims.insert(out_dims.end(), p.free_b_dims.begin(), p.free_b_dims.end());
    std::vector<Complex> out(p.m * p.n);
    Eigen::Map<RowMatrix> c(out.data(), m, n);

    // Use a's storage directly when the shared legs already form a
    // contiguous leading or trailing block in matching order.
    const auto a_ab = detail::concat(p.free_a, p.shared);
    const auto a_ba = detail::concat(p.shared, p.free_a);
    const auto b_ab = detail::concat(p.shared, p.free_b);
    const auto b_ba = detail::concat(p.free_b, p.shared);

    Tensor a_tmp;
    Tensor b_tmp;
    const Complex *a_ptr = a.data().data();
    bool a_trans = false;
    if (a.legs() == a_ab) {
    } else if (a.legs() == a_ba) {
        a_trans = true;
    } else {
        a_tmp = a.permuted(a_ab);
        a_ptr = a_tmp.data().data();
    }
    const Complex *b_ptr = b.data().data();
    bool b_trans = false;
    if (b.legs() == b_ab) {
    } else if (b.legs() == b_ba) {
        b_trans = true;
    } else {
        b_tmp = b.permuted(b_ab);
        b_ptr = b_tmp.data().data();
    }

    if (!a_trans && !b_trans) {
        c.noalias() = ConstRowMap(a_ptr, m, k) * ConstRowMap(b_ptr, k, n);
    } else if (a_trans && !b_trans) {
        c.noalias() = ConstRowMap(a_ptr, k, m).transpose() * ConstRowMap(b_ptr, k, n);
    } else if (!a_trans && b_trans) {
        c.noalias() = ConstRowMap(a_ptr, m, k) * ConstRowMap(b_ptr, n, k).transpose();
    } else {
        c.noalias() =
            ConstRowMap(a_ptr, k, m).transpose() * ConstRowMap(b_ptr, n, k).transpose();
    }
    return Tensor(std::move(out_legs), std::move(out_dims), std::move(out));
}

/// A collection of tensors where every index identifier appears on at most
/// two nodes. Identifiers on one node only are open legs.
class TensorNetwork {
  public:
    std::size_t add(Tensor t) {
        for (std::size_t i = 0; i < t.rank(); ++i) {
            auto &slot = legs_[t.legs()[i]];
            if (slot.count == 2) {
                throw InvalidInput("index " + std::to_string(t.legs()[i]) +
                                   " already joins two nodes");
            }
            if (slot.count == 1 && slot.dim != t.dims()[i]) {
                throw InvalidInput("index " + std::to_string(t.legs()[i]) +
                                   " connects legs of different dimension");
            }
            slot.dim = t.dims()[i];
            ++slot.count;
        }
        nodes_.push_back(std::move(t));
        return nodes_.size() - 1;
    }

    const std::vector<Tensor> &nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    std::vector<IndexId> open_legs() const {
        std::vector<IndexId> open;
        for (const auto &[id, slot] : legs_) {
            if (slot.count == 1) {
                open.push_back(id);
            }
        }
        std::sort(open.begin(), open.end());
        return open;
    }

    bool closed() const {
        return std::all_of(legs_.begin(), legs_.end(),
                           [](const auto &kv) { return kv.second.count == 2; });
    }

  private:
    struct LegSlot {
        std::size_t dim = 0;
        int count = 0;
    };
    std::vector<Tensor> nodes_;
    std::unordered_map<IndexId, LegSlot> legs_;
};

} // namespace qfault
