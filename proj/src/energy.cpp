#include "spikegate/energy.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <memory>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spikegate/circuit.hpp"
#include "spikegate/fp_ops.hpp"
#include "spikegate/gates.hpp"
#include "spikegate/int_arith.hpp"
#include "spikegate/layers.hpp"
#include "spikegate/model.hpp"
#include "spikegate/nonlinear.hpp"
#include "spikegate/seed.hpp"

namespace spikegate {

double spikes_to_nj(double spikes) { return spikes * kPicojoulesPerSpike * 1e-3; }

BaselineCostTable parse_baseline_costs(const std::string& text) {
    BaselineCostTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("baseline line " + std::to_string(lineno) + ": no '='");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        double v = 0;
        try {
            std::size_t used = 0;
            v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("baseline line " + std::to_string(lineno) + ": bad number '" + val + "'");
        }
        if (!(v > 0)) throw std::invalid_argument("baseline line " + std::to_string(lineno) + ": must be > 0");
        if (key == "unit_scale")
            t.unit_scale = v;
        else if (key.size() > 8 && key.ends_with(".neurons"))
            t.reference_neurons[key.substr(0, key.size() - 8)] = v;
        else if (!key.empty())
            t.gpu_nj[key] = v;
        else
            throw std::invalid_argument("baseline line " + std::to_string(lineno) + ": empty key");
    }
    return t;
}

BaselineCostTable load_baseline_costs(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_baseline_costs(ss.str());
}

std::string default_baseline_path() { return std::string(SPIKEGATE_DATA_DIR) + "/baseline_costs.cfg"; }

std::string energy_mode_name(EnergyMode m) { return m == EnergyMode::Measured ? "measured" : "expected"; }

EnergyMode parse_energy_mode(const std::string& s) {
    if (s == "measured") return EnergyMode::Measured;
    if (s == "expected") return EnergyMode::Expected;
    throw std::invalid_argument("unknown energy mode: " + s);
}

EnergyReport measure_energy(const std::string& component, std::uint64_t evaluations,
                            const std::function<void()>& workload) {
    if (evaluations == 0) throw std::invalid_argument("empty workload");
    ActivityTally tally;
    {
        ActivityScope scope(tally);
        workload();
    }
    EnergyReport r;
    r.component = component;
    r.evaluations = evaluations;
    r.mode = EnergyMode::Measured;
    r.neuron_count = static_cast<double>(tally.neuron_evals) / static_cast<double>(evaluations);
    r.fired_spikes = static_cast<double>(tally.spikes) / static_cast<double>(evaluations);
    r.expected_spikes = 0.5 * r.neuron_count;
    r.energy_nj = spikes_to_nj(r.fired_spikes);
    return r;
}

EnergyReport measure_energy(const std::string& component, const Unit& unit, const std::vector<Lanes>& workload) {
    if (workload.empty() || workload[0].empty()) throw std::invalid_argument("empty workload");
    return measure_energy(component, workload[0].size(), [&] { unit.run(workload); });
}

EnergyReport expected_energy(const std::string& component, double neuron_count) {
    EnergyReport r;
    r.component = component;
    r.mode = EnergyMode::Expected;
    r.neuron_count = neuron_count;
    r.expected_spikes = 0.5 * neuron_count;
    r.energy_nj = spikes_to_nj(r.expected_spikes);
    return r;
}

void join_baseline(EnergyReport& r, const BaselineCostTable& costs) {
    if (auto it = costs.reference_neurons.find(r.component); it != costs.reference_neurons.end())
        r.reference_neurons = it->second;
    auto it = costs.gpu_nj.find(r.component);
    if (it == costs.gpu_nj.end()) return;
    r.baseline_gpu_nj = it->second;
    r.savings_ratio = r.energy_nj > 0 ? it->second * costs.unit_scale / r.energy_nj : 0.0;
}

namespace {

const Unit& full_adder_unit() {
    static const Unit u = [] {
        Netlist nl;
        Circuit c(nl);
        Wire a = c.input(), b = c.input(), cin = c.input();
        FullAdderOut fa = full_adder(c, a, b, cin);
        nl.add_output(fa.sum);
        nl.add_output(fa.carry);
        return Unit(std::move(nl), {1, 1, 1}, {1, 1});
    }();
    return u;
}

// One relay neuron per stored bit.
const Unit& embedding_unit() {
    static const Unit u = [] {
        Netlist nl;
        Word in = nl.add_inputs(32);
        for (Wire w : in) {
            Neuron n;
            n.in = {w, kLow};
            n.weight = {1.0, 0.0};
            n.threshold = 0.5;
            nl.add_output(nl.add_neuron(n));
        }
        return Unit(std::move(nl), {32}, {32});
    }();
    return u;
}

const Unit& gate_unit(GateKind k) {
    static std::map<GateKind, std::unique_ptr<Unit>> cache;
    auto& slot = cache[k];
    if (!slot) {
        const unsigned n = gate_arity(k);
        slot = std::make_unique<Unit>(gate_netlist(k), std::vector<unsigned>(n, 1), std::vector<unsigned>{1});
    }
    return *slot;
}

Lanes normal_fp32(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<float> d(0.0f, 1.0f);
    Lanes v(n);
    for (auto& x : v) x = std::bit_cast<std::uint32_t>(d(rng));
    return v;
}

std::vector<float> normal_floats(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<float> d(0.0f, 1.0f);
    std::vector<float> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

}  // namespace

std::vector<EnergyReport> component_table(EnergyMode mode, const BaselineCostTable& costs, std::uint64_t seed,
                                          std::size_t evaluations) {
    if (evaluations == 0 || evaluations % 8 != 0)
        throw std::invalid_argument("evaluations must be a positive multiple of 8");
    std::vector<EnergyReport> rows;
    std::uint64_t label = 0;
    auto add = [&](EnergyReport r) {
        if (mode == EnergyMode::Expected) r = expected_energy(r.component, r.neuron_count);
        join_baseline(r, costs);
        rows.push_back(std::move(r));
    };
    auto rng_for = [&] { return std::mt19937_64(mix_seed(seed, {0xE9, label++})); };
    const std::size_t n = evaluations;

    // AND and OR on their firing case; the rest cycle through their truth
    // tables, so every input bit is balanced.
    auto cycle = [&](unsigned arity, unsigned bit) {
        Lanes v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = (i % (1u << arity)) >> bit & 1;
        return v;
    };
    for (GateKind k : {GateKind::AND, GateKind::OR, GateKind::NOT, GateKind::XOR, GateKind::MUX}) {
        const unsigned arity = gate_arity(k);
        std::vector<Lanes> ports;
        for (unsigned i = 0; i < arity; ++i)
            ports.push_back(k == GateKind::AND || k == GateKind::OR ? Lanes(n, 1) : cycle(arity, i));
        std::string name = gate_name(k);
        for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        add(measure_energy(name, gate_unit(k), ports));
    }
    add(measure_energy("full_adder", full_adder_unit(), {cycle(3, 0), cycle(3, 1), cycle(3, 2)}));
    const std::pair<const char*, FpOp> fp_rows[] = {{"fp32_adder", FpOp::Add},      {"fp32_multiplier", FpOp::Mul},
                                                    {"fp32_divider", FpOp::Div},     {"fp32_reciprocal", FpOp::Recip},
                                                    {"fp32_sqrt", FpOp::Sqrt}};
    for (const auto& [name, op] : fp_rows) {
        auto rng = rng_for();
        Lanes a = normal_fp32(n, rng), b = normal_fp32(n, rng);
        if (op == FpOp::Sqrt)
            for (auto& x : a) x &= 0x7FFFFFFF;
        std::vector<Lanes> ports{a};
        if (fp_arity(op) == 2) ports.push_back(b);
        add(measure_energy(name, fp_unit(op, Precision::FP32), ports));
    }
    const std::pair<const char*, Lanes (*)(const Lanes&)> fn_rows[] = {
        {"exp", exp_lanes}, {"sigmoid", sigmoid_lanes}, {"tanh", tanh_lanes}, {"silu", silu_lanes}, {"gelu", gelu_lanes}};
    for (const auto& [name, fn] : fn_rows) {
        auto rng = rng_for();
        Lanes x = normal_fp32(n, rng);
        add(measure_energy(name, n, [&] { fn(x); }));
    }
    {
        auto rng = rng_for();
        Lanes x = normal_fp32(n, rng);
        add(measure_energy("sincos", n, [&] { sincos_lanes(x); }));
    }
    {
        auto rng = rng_for();
        std::vector<float> x = normal_floats(256, rng), g(256, 1.0f);
        add(measure_energy("rmsnorm", 256, [&] { rmsnorm_forward(x, g, 1e-6f); }));
    }
    {
        auto rng = rng_for();
        Lanes x = normal_fp32(256, rng);
        add(measure_energy("softmax_row256", 1, [&] { softmax_lanes(x, 256); }));
    }
    {
        auto rng = rng_for();
        LinearWeights w = random_linear(64, 64, rng(), -0.125f, 0.125f);
        std::vector<float> x = normal_floats(64, rng);
        add(measure_energy("linear_64x64", 64, [&] { linear_forward(x, w); }));
    }
    {
        auto rng = rng_for();
        add(measure_energy("embedding_lookup", embedding_unit(), {normal_fp32(n, rng)}));
    }
    return rows;
}

std::string energy_csv(const std::vector<EnergyReport>& rows) {
    std::ostringstream os;
    os << "component,neurons,spikes,energy_nj,baseline_nj,savings,reference_neurons\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.component.c_str(), r.neuron_count,
                      r.spikes(), r.energy_nj, r.baseline_gpu_nj, r.savings_ratio, r.reference_neurons);
        os << buf;
    }
    return os.str();
}

}  // namespace spikegate
