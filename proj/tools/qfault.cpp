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


// Command-line front end: generate benchmark circuits, simulate faulty
// circuits and run parameter sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfault/qfault.hpp"

namespace {

using namespace qfault;

constexpr int kExitError = 1;
constexpr int kExitVerify = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw InvalidInput("cannot write " + path);
    }
}

Circuit load_circuit(const std::string &path) {
    const std::string text = read_file(path);
    return parse_circuit(std::string_view(text));
}

struct GenerateArgs {
    std::size_t side = 8;
    std::size_t layers = 1;
    double gamma = 0.5;
    double beta = 0.4;
    std::size_t rows = 4;
    std::size_t cols = 4;
    std::size_t depth = 11;
    std::uint64_t seed = 0;
    std::string out;
};

void emit_circuit(const Circuit &c, const std::string &out) {
    const std::string text = serialize_circuit(c).dump(1) + "\n";
    if (out.empty()) {
        std::cout << text;
        std::cerr << "gates " << c.size() << " depth " << c.depth() << "\n";
    } else {
        write_file(out, text);
        std::cout << "gates " << c.size() << " depth " << c.depth() << "\n";
    }
}

struct NoiseArgs {
    double theta = 0.1;
    std::size_t m = 2;
    double t1 = 100e-6;
    double t2 = 20e-6;
    double dt = 30e-9;

    NoiseParams params() const { return {t1, t2, dt}; }
};

void add_noise_options(CLI::App *cmd, NoiseArgs &n) {
    cmd->add_option("--theta", n.theta, "CRz fault angle in radians")->capture_default_str();
    cmd->add_option("--t1", n.t1, "relaxation time T1 in seconds")->capture_default_str();
    cmd->add_option("--t2", n.t2, "dephasing time T2 in seconds")->capture_default_str();
    cmd->add_option("--dt", n.dt, "gate duration in seconds")->capture_default_str();
}

struct LimitArgs {
    double timeout = 3600;
    double max_elements = 1073741824.0;

    ResourceLimits limits() const { return {max_elements, timeout}; }
};

void add_limit_options(CLI::App *cmd, LimitArgs &l) {
    cmd->add_option("--timeout", l.timeout, "contraction time limit in seconds")
        ->capture_default_str();
    cmd->add_option("--max-elements", l.max_elements, "largest tensor allowed")
        ->capture_default_str();
}

struct SimulateArgs {
    std::string circuit;
    std::string fault = "none";
    std::string fault_plan;
    std::uint64_t seed = 0;
    std::string psi_t = "0";
    std::string psi_e;
    bool verify = false;
    NoiseArgs noise;
    LimitArgs limits;
};

int run_simulate(const SimulateArgs &a) {
    const Circuit c = load_circuit(a.circuit);
    const std::size_t n = c.n_qubits();
    nlohmann::json plan_echo;
    FaultyCircuit fc = FaultyCircuit::from_ideal(c);
    if (!a.fault_plan.empty()) {
        const FaultPlan plan = parse_fault_plan(nlohmann::json::parse(read_file(a.fault_plan)));
        plan_echo = fault_plan_to_json(plan);
        fc = inject_faults(c, plan);
    } else if (a.fault == "unitary") {
        const FaultPlan plan = UnitaryAfterEachCZ{a.noise.theta};
        plan_echo = fault_plan_to_json(plan);
        fc = inject_faults(c, plan);
    } else if (a.fault == "decoherence") {
        const FaultPlan plan = RandomDecoherence{a.noise.m, a.noise.params(), a.seed};
        plan_echo = fault_plan_to_json(plan);
        fc = inject_faults(c, plan);
    } else {
        plan_echo = {{"kind", "none"}};
    }

    const ProductState psi_t = ProductState::parse(a.psi_t, n);
    std::optional<ProductState> psi_e;
    if (!a.psi_e.empty()) {
        psi_e = ProductState::parse(a.psi_e, n);
    }
    SimulationOptions opts;
    opts.limits = a.limits.limits();
    SimulationResult r = psi_e ? fault_effect(fc, psi_t, *psi_e, opts)
                               : fidelity_vs_ideal(fc, c, psi_t, opts);
    r.metadata["fault_plan"] = plan_echo;
    r.metadata["seed"] = a.seed;
    r.metadata["prng"] = std::string(Rng::kAlgorithm);
    r.metadata["psi_t"] = a.psi_t;
    r.metadata["psi_e"] = psi_e ? nlohmann::json(a.psi_e) : nlohmann::json("ideal output");
    r.metadata["circuit"] = a.circuit;

    nlohmann::json out = result_to_json(r);
    int code = 0;
    if (a.verify) {
        if (n <= kDefaultOracleCap) {
            const double oracle = psi_e ? dense_fault_effect(fc, psi_t, *psi_e)
                                        : dense_fidelity_vs_ideal(fc, c, psi_t);
            const double diff = std::abs(oracle - r.value);
            out["verify"] = {{"oracle_value", oracle}, {"difference", diff}};
            if (diff > 1e-6) {
                std::cerr << "error: tensor-network value differs from the dense oracle by "
                          << diff << "\n";
                code = kExitVerify;
            }
        } else {
            out["verify"] = {{"skipped", "more than " + std::to_string(kDefaultOracleCap) +
                                             " qubits"}};
        }
    }
    std::cout << out.dump(2) << "\n";
    return code;
}

std::vector<std::uint64_t> parse_seeds(const std::string &text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        try {
            if (dash != std::string::npos && dash > 0) {
                const auto lo = std::stoull(item.substr(0, dash));
                const auto hi = std::stoull(item.substr(dash + 1));
                for (auto s = lo; s <= hi; ++s) {
                    seeds.push_back(s);
                }
            } else {
                seeds.push_back(std::stoull(item));
            }
        } catch (const std::exception &) {
            throw InvalidInput("bad seed list entry \"" + item + "\"");
        }
    }
    return seeds;
}

struct SweepArgs {
    std::string circuit;
    std::string axis = "fault_count";
    std::vector<double> values;
    std::optional<double> min;
    std::optional<double> max;
    std::size_t count = 0;
    std::string seeds = "0";
    std::optional<std::uint64_t> placement_seed;
    std::size_t jobs = 0;
    std::string out;
    std::string median_out;
    NoiseArgs noise;
    LimitArgs limits;
};

int run_sweep_cmd(const SweepArgs &a) {
    const Circuit c = load_circuit(a.circuit);
    SweepSpec spec;
    spec.axis = axis_from_name(a.axis);
    if (!a.values.empty()) {
        spec.values = a.values;
    } else if (a.min && a.max && a.count > 0) {
        spec.values = linear_grid(*a.min, *a.max, a.count);
    } else {
        throw InvalidInput("give --values or all of --min, --max and --count");
    }
    spec.seeds = parse_seeds(a.seeds);
    spec.params = a.noise.params();
    spec.theta = a.noise.theta;
    spec.fault_count = a.noise.m;
    spec.placement_seed = a.placement_seed;
    spec.limits = a.limits.limits();
    spec.jobs = a.jobs;

    const auto rows = run_sweep(c, spec);
    std::ostringstream csv;
    write_sweep_csv(csv, spec.axis, rows);
    std::ostringstream med;
    write_median_csv(med, spec.axis, rows);
    std::string median_path = a.median_out;
    if (median_path.empty()) {
        const std::filesystem::path p(a.out);
        median_path = (p.parent_path() / (p.stem().string() + "_median.csv")).string();
    }
    write_file(a.out, csv.str());
    write_file(median_path, med.str());
    std::cout << "wrote " << rows.size() << " rows to " << a.out << " and medians to "
              << median_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fault simulation of quantum circuits by tensor-network contraction"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto *generate = app.add_subcommand("generate", "write a benchmark circuit as JSON");
    generate->require_subcommand(1);
    auto *qaoa = generate->add_subcommand("qaoa", "QAOA circuit on a side x side grid");
    qaoa->add_option("--side", gen.side, "grid side length")->capture_default_str();
    qaoa->add_option("--layers", gen.layers, "number of cost/mixer layers")->capture_default_str();
    qaoa->add_option("--gamma", gen.gamma, "cost angle")->capture_default_str();
    qaoa->add_option("--beta", gen.beta, "mixer angle")->capture_default_str();
    qaoa->add_option("--seed", gen.seed, "accepted and ignored")->capture_default_str();
    qaoa->add_option("--out", gen.out, "output path (stdout when omitted)");
    auto *inst = generate->add_subcommand("inst", "random grid circuit");
    inst->add_option("--rows", gen.rows, "grid rows")->capture_default_str();
    inst->add_option("--cols", gen.cols, "grid columns")->capture_default_str();
    inst->add_option("--depth", gen.depth, "circuit depth in cycles")->capture_default_str();
    inst->add_option("--seed", gen.seed, "gate-choice seed")->capture_default_str();
    inst->add_option("--out", gen.out, "output path (stdout when omitted)");

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "fidelity of one faulty circuit");
    simulate->add_option("--circuit", sim.circuit, "circuit JSON file")->required();
    simulate->add_option("--fault", sim.fault, "fault plan kind")
        ->check(CLI::IsMember({"none", "unitary", "decoherence"}))
        ->capture_default_str();
    simulate->add_option("--fault-plan", sim.fault_plan, "fault plan JSON file");
    simulate->add_option("--m", sim.noise.m, "number of decoherence faults")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "placement seed")->capture_default_str();
    simulate->add_option("--psi-t", sim.psi_t, "input product state over {0,1,+,-,r,l}")
        ->capture_default_str();
    simulate->add_option("--psi-e", sim.psi_e,
                         "expected product state (default: ideal output, fidelity mode)");
    simulate->add_flag("--verify", sim.verify, "compare with the dense oracle");
    add_noise_options(simulate, sim.noise);
    add_limit_options(simulate, sim.limits);

    SweepArgs sw;
    auto *sweep = app.add_subcommand("sweep", "fidelity over a parameter grid and seeds");
    sweep->add_option("--circuit", sw.circuit, "circuit JSON file")->required();
    sweep->add_option("--axis", sw.axis, "swept quantity")
        ->check(CLI::IsMember({"fault_count", "theta", "t1", "t2"}))
        ->capture_default_str();
    sweep->add_option("--values", sw.values, "explicit axis values")->delimiter(',');
    sweep->add_option("--min", sw.min, "first grid value");
    sweep->add_option("--max", sw.max, "last grid value");
    sweep->add_option("--count", sw.count, "number of grid values");
    sweep->add_option("--seeds", sw.seeds, "seed list, e.g. 0-19 or 1,5,9")->capture_default_str();
    sweep->add_option("--m", sw.noise.m, "fault count when the axis is t1 or t2")
        ->capture_default_str();
    sweep->add_option("--placement-seed", sw.placement_seed, "use one placement for all rows");
    sweep->add_option("--jobs", sw.jobs, "worker threads (QFAULT_JOBS overrides)");
    sweep->add_option("--out", sw.out, "CSV output path")->required();
    sweep->add_option("--median-out", sw.median_out, "median CSV path (default <out>_median.csv)");
    add_noise_options(sweep, sw.noise);
    add_limit_options(sweep, sw.limits);

    CLI11_PARSE(app, argc, argv);

    try {
        if (qaoa->parsed()) {
            emit_circuit(generate_qaoa(gen.side, gen.layers, gen.gamma, gen.beta, gen.seed), gen.out);
        } else if (inst->parsed()) {
            emit_circuit(generate_inst(gen.rows, gen.cols, gen.depth, gen.seed), gen.out);
        } else if (simulate->parsed()) {
            return run_simulate(sim);
        } else if (sweep->parsed()) {
            return run_sweep_cmd(sw);
        }
    } catch (const ResourceError &e) {
        std::cerr << "MO: " << e.what() << "\n";
        return kExitResource;
    } catch (const TimeoutError &e) {
        std::cerr << "TO: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return 0;
}
