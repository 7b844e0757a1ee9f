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
 * @file sweep.hpp
 * @brief Parameter sweeps of fidelity against the ideal output.
 *
 * A sweep evaluates one circuit over a grid of values of a single parameter
 * (fault count, fault angle, T1 or T2) and a list of seeds, producing one
 * row per (value, seed) plus a per-value median summary.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <new>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qfault/faults.hpp"
#include "qfault/parallel.hpp"
#include "qfault/simulator.hpp"

namespace qfault {

enum class SweepAxis { FaultCount, Theta, T1, T2 };

inline std::string_view axis_name(SweepAxis a) {
    switch (a) {
    case SweepAxis::FaultCount:
        return "fault_count";
    case SweepAxis::Theta:
        return "theta";
    case SweepAxis::T1:
        return "t1";
    case SweepAxis::T2:
        return "t2";
    }
    return "?";
}

inline SweepAxis axis_from_name(std::string_view name) {
    for (SweepAxis a : {SweepAxis::FaultCount, SweepAxis::Theta, SweepAxis::T1, SweepAxis::T2}) {
        if (axis_name(a) == name) {
            return a;
        }
    }
    throw InvalidInput("unknown sweep axis \"" + std::string(name) + "\"");
}

/// Unit suffix of the axis column header.
inline std::string_view axis_unit(SweepAxis a) {
    switch (a) {
    case SweepAxis::FaultCount:
        return "count";
    case SweepAxis::Theta:
        return "rad";
    default:
        return "s";
    }
}

/// `count` evenly spaced values from lo to hi inclusive.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (count == 0) {
        throw InvalidInput("grid needs at least one point");
    }
    if (count == 1) {
        return {lo};
    }
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return v;
}

struct SweepSpec {
    SweepAxis axis = SweepAxis::FaultCount;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds{0};
    /// Values of the parameters not being swept.
    NoiseParams params;
    double theta = 0.1;
    std::size_t fault_count = 2;
    /// When set, every row uses this placement seed instead of one derived
    /// from (seed, value index).
    std::optional<std::uint64_t> placement_seed;
    ResourceLimits limits;
    std::size_t jobs = 0;

    void validate() const {
        if (values.empty()) {
            throw InvalidInput("sweep needs at least one axis value");
        }
        for (std::size_t i = 1; i < values.size(); ++i) {
            if (!(values[i] > values[i - 1])) {
                throw InvalidInput("sweep values must be strictly increasing");
            }
        }
        if (seeds.empty()) {
            throw InvalidInput("sweep needs at least one seed");
        }
        if (axis == SweepAxis::FaultCount) {
            for (double v : values) {
                if (v < 0 || v != std::floor(v)) {
                    throw InvalidInput("fault counts must be non-negative integers");
                }
            }
        }
    }
};

enum class RowStatus { Ok, Timeout, MemoryOut };

struct SweepRow {
    double axis_value = 0;
    std::uint64_t seed = 0;
    RowStatus status = RowStatus::Ok;
    double fidelity = 0;
    double wall_time_s = 0;
    std::size_t max_rank = 0;
    double max_elements = 0;
};

/// The fault plan evaluated by one sweep row.
inline FaultPlan sweep_plan(const SweepSpec &spec, std::size_t value_index, std::uint64_t seed) {
    const double v = spec.values[value_index];
    if (spec.axis == SweepAxis::Theta) {
        return UnitaryAfterEachCZ{v};
    }
    RandomDecoherence d;
    d.params = spec.params;
    d.m = spec.fault_count;
    switch (spec.axis) {
    case SweepAxis::FaultCount:
        d.m = static_cast<std::size_t>(v);
        break;
    case SweepAxis::T1:
        d.params.t1 = v;
        break;
    case SweepAxis::T2:
        d.params.t2 = v;
        break;
    default:
        break;
    }
    d.seed = spec.placement_seed ? *spec.placement_seed : mix_seed(seed, value_index);
    return d;
}

/// Evaluates every (value, seed) row; rows come back sorted by (value, seed).
/// Rows that hit the time or element limit are marked instead of failing
/// the sweep.
inline std::vector<SweepRow> run_sweep(const Circuit &c, const SweepSpec &spec) {
    spec.validate();
    std::vector<std::uint64_t> seeds = spec.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::vector<SweepRow> rows;
    for (std::size_t v = 0; v < spec.values.size(); ++v) {
        for (std::uint64_t s : seeds) {
            SweepRow r;
            r.axis_value = spec.values[v];
            r.seed = s;
            rows.push_back(r);
        }
    }
    const ProductState psi_t = ProductState::zeros(c.n_qubits());
    SimulationOptions opts;
    opts.limits = spec.limits;
    parallel_for(rows.size(), resolve_jobs(spec.jobs), [&](std::size_t i) {
        SweepRow &r = rows[i];
        const auto start = std::chrono::steady_clock::now();
        const FaultyCircuit fc = inject_faults(c, sweep_plan(spec, i / seeds.size(), r.seed));
        try {
            const SimulationResult res = fidelity_vs_ideal(fc, c, psi_t, opts);
            r.fidelity = res.value;
            r.max_rank = res.stats.max_rank;
            r.max_elements = res.stats.max_elements;
        } catch (const TimeoutError &) {
            r.status = RowStatus::Timeout;
        } catch (const ResourceError &) {
            r.status = RowStatus::MemoryOut;
        } catch (const std::bad_alloc &) {
            r.status = RowStatus::MemoryOut;
        }
        r.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
    return rows;
}

namespace detail {

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_time(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

} // namespace detail

/// Header: axis_value_<unit>,seed,fidelity,wall_time_s,max_rank,max_elements.
/// Failed rows carry "TO" or "MO" in every measured column.
inline void write_sweep_csv(std::ostream &out, SweepAxis axis, const std::vector<SweepRow> &rows) {
    out << "axis_value_" << axis_unit(axis) << ",seed,fidelity,wall_time_s,max_rank,max_elements\n";
    for (const auto &r : rows) {
        out << detail::format_number(r.axis_value) << ',' << r.seed << ',';
        if (r.status == RowStatus::Ok) {
            out << detail::format_number(r.fidelity) << ',' << detail::format_time(r.wall_time_s)
                << ',' << r.max_rank << ',' << detail::format_number(r.max_elements) << '\n';
        } else {
            const char *tag = r.status == RowStatus::Timeout ? "TO" : "MO";
            out << tag << ',' << tag << ',' << tag << ',' << tag << '\n';
        }
    }
}

struct MedianRow {
    double axis_value = 0;
    std::size_t completed = 0;
    std::size_t failed = 0;
    double median_fidelity = 0;
    double median_wall_time_s = 0;
};

/// Median over the completed rows of each axis value.
inline std::vector<MedianRow> median_rows(const std::vector<SweepRow> &rows) {
    std::vector<MedianRow> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        MedianRow m;
        m.axis_value = rows[i].axis_value;
        std::vector<double> fid;
        std::vector<double> time;
        for (; i < rows.size() && rows[i].axis_value == m.axis_value; ++i) {
            if (rows[i].status == RowStatus::Ok) {
                fid.push_back(rows[i].fidelity);
                time.push_back(rows[i].wall_time_s);
            } else {
                ++m.failed;
            }
        }
        m.completed = fid.size();
        if (!fid.empty()) {
            m.median_fidelity = detail::median(fid);
            m.median_wall_time_s = detail::median(time);
        }
        out.push_back(m);
    }
    return out;
}

/// Header: axis_value_<unit>,median_fidelity,median_wall_time_s,completed,failed.
/// A value with no completed rows reports "TO/MO" for its medians.
inline void write_median_csv(std::ostream &out, SweepAxis axis, const std::vector<SweepRow> &rows) {
    out << "axis_value_" << axis_unit(axis)
        << ",median_fidelity,median_wall_time_s,completed,failed\n";
    for (const auto &m : median_rows(rows)) {
        out << detail::format_number(m.axis_value) << ',';
        if (m.completed > 0) {
            out << detail::format_number(m.median_fidelity) << ','
                << detail::format_time(m.median_wall_time_s);
        } else {
            out << "TO/MO,TO/MO";
        }
        out << ',' << m.completed << ',' << m.failed << '\n';
    }
}

} // namespace qfault
