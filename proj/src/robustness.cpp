#include "spikegate/robustness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spikegate/gates.hpp"
#include "spikegate/host_fp.hpp"
#include "spikegate/int_arith.hpp"
#include "spikegate/seed.hpp"
#include "spikegate/unit.hpp"

namespace spikegate {

namespace {

// Circuit plus the operand lanes of one trial.
struct Workload {
    const Unit* unit;
    std::vector<Lanes> inputs;
};

std::unique_ptr<Unit> make_unit(const std::function<void(Circuit&)>& build, std::vector<unsigned> in,
                                std::vector<unsigned> out) {
    Netlist nl;
    Circuit c(nl);
    build(c);
    nl.prune();
    return std::make_unique<Unit>(std::move(nl), std::move(in), std::move(out));
}

const Unit& gate_unit(GateKind kind) {
    static const auto units = [] {
        std::vector<std::unique_ptr<Unit>> u;
        for (GateKind k : {GateKind::AND, GateKind::OR, GateKind::XOR})
            u.push_back(std::make_unique<Unit>(gate_netlist(k), std::vector<unsigned>{1, 1},
                                               std::vector<unsigned>{1}));
        return u;
    }();
    return *units[kind == GateKind::AND ? 0 : kind == GateKind::OR ? 1 : 2];
}

const Unit& adder4_unit() {
    static const auto u = make_unit(
        [](Circuit& c) {
            Word a = c.input_word(4), b = c.input_word(4), cin = c.input_word(1);
            AddResult r = ripple_add(c, a, b, cin[0]);
            c.output(r.sum);
            c.output(r.carry);
        },
        {4, 4, 1}, {4, 1});
    return *u;
}

const Unit& mult4_unit() {
    static const auto u = make_unit(
        [](Circuit& c) {
            Word a = c.input_word(4), b = c.input_word(4);
            c.output(array_multiply(c, a, b));
        },
        {4, 4}, {8});
    return *u;
}

const Unit& shifter_unit() {
    static const auto u = make_unit(
        [](Circuit& c) {
            Word x = c.input_word(28), amt = c.input_word(5);
            ShiftResult r = shift_right_sticky(c, x, amt);
            c.output(r.value);
            c.output(r.sticky);
        },
        {28, 5}, {28, 1});
    return *u;
}

Workload workload(const ScanTarget& t, std::size_t cases, std::mt19937_64& rng) {
    Workload w{nullptr, {}};
    auto exhaustive = [&](unsigned bits_a, unsigned bits_b) {
        const std::size_t domain = std::size_t{1} << (bits_a + bits_b);
        const std::size_t reps = std::max<std::size_t>(1, cases / domain);
        Lanes a, b;
        for (std::size_t r = 0; r < reps; ++r)
            for (std::size_t v = 0; v < domain; ++v) {
                a.push_back(v & ((1u << bits_a) - 1));
                b.push_back(v >> bits_a);
            }
        w.inputs = {a, b};
    };
    switch (t.kind) {
        case ScanTarget::And:
        case ScanTarget::Or:
        case ScanTarget::Xor:
            w.unit = &gate_unit(t.kind == ScanTarget::And ? GateKind::AND
                                : t.kind == ScanTarget::Or ? GateKind::OR
                                                           : GateKind::XOR);
            exhaustive(1, 1);
            break;
        case ScanTarget::Adder4:
            w.unit = &adder4_unit();
            exhaustive(4, 4);
            w.inputs.push_back(Lanes(w.inputs[0].size(), 0));
            break;
        case ScanTarget::Mult4x4:
            w.unit = &mult4_unit();
            exhaustive(4, 4);
            break;
        case ScanTarget::Shifter: {
            w.unit = &shifter_unit();
            Lanes x(cases), amt(cases);
            for (std::size_t i = 0; i < cases; ++i) {
                x[i] = rng() & ((1u << 28) - 1);
                amt[i] = rng() & 31;
            }
            w.inputs = {x, amt};
            break;
        }
        case ScanTarget::Fp: {
            w.unit = &fp_unit(t.op, t.format);
            Lanes a(cases), b(cases);
            for (std::size_t i = 0; i < cases; ++i) {
                a[i] = random_finite(t.format, rng);
                b[i] = random_finite(t.format, rng);
            }
            w.inputs = {a};
            if (fp_arity(t.op) == 2) w.inputs.push_back(b);
            break;
        }
    }
    return w;
}

std::uint64_t target_label(const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : name) h = (h ^ ch) * 1099511628211ULL;
    return h;
}

}  // namespace

std::string parameter_name(ScanParameter p) {
    switch (p) {
        case ScanParameter::Beta: return "beta";
        case ScanParameter::NoiseSigma: return "noise_sigma";
        case ScanParameter::ThresholdDelta: return "threshold_delta";
    }
    return "";
}

ScanTarget parse_scan_target(const std::string& name) {
    if (name == "and") return {ScanTarget::And};
    if (name == "or") return {ScanTarget::Or};
    if (name == "xor") return {ScanTarget::Xor};
    if (name == "adder4") return {ScanTarget::Adder4};
    if (name == "mult4x4") return {ScanTarget::Mult4x4};
    if (name == "shifter") return {ScanTarget::Shifter};
    auto cut = name.find('_');
    if (cut != std::string::npos) {
        std::string fmt = name.substr(0, cut);
        Precision p = parse_precision(fmt == "fp8" ? "fp8_e4m3" : fmt);
        return {ScanTarget::Fp, p, parse_fp_op(name.substr(cut + 1))};
    }
    throw std::invalid_argument("unknown scan target: " + name);
}

std::string scan_target_name(const ScanTarget& t) {
    switch (t.kind) {
        case ScanTarget::And: return "and";
        case ScanTarget::Or: return "or";
        case ScanTarget::Xor: return "xor";
        case ScanTarget::Adder4: return "adder4";
        case ScanTarget::Mult4x4: return "mult4x4";
        case ScanTarget::Shifter: return "shifter";
        case ScanTarget::Fp: {
            std::string f = t.format == Precision::FP8_E4M3 ? "fp8" : precision_name(t.format);
            return f + "_" + fp_op_name(t.op);
        }
    }
    return "";
}

void ScanConfig::validate() const {
    if (trials == 0) throw std::invalid_argument("scan needs at least one trial");
    if (values.empty()) throw std::invalid_argument("scan needs at least one parameter value");
    if (cases == 0) throw std::invalid_argument("scan needs at least one case per trial");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("scan values must be finite");
        if (parameter == ScanParameter::Beta && (v <= 0.0 || v > 1.0))
            throw std::invalid_argument("beta must lie in (0, 1]");
        if (parameter == ScanParameter::NoiseSigma && v < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
        if (parameter == ScanParameter::ThresholdDelta && (v < 0.0 || v >= 1.0))
            throw std::invalid_argument("threshold deviation must lie in [0, 1)");
    }
    if (target.kind == ScanTarget::Fp && target.format == Precision::FP64)
        throw std::invalid_argument("no FP64 circuits");
}

std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
    cfg.validate();
    const std::string name = scan_target_name(cfg.target);
    std::vector<ScanRow> rows;
    for (double value : cfg.values) {
        std::vector<double> word_acc, bit_acc;
        for (unsigned trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t s =
                mix_seed(cfg.seed, {target_label(name), std::bit_cast<std::uint64_t>(value), trial});
            std::mt19937_64 rng(mix_seed(s, {1}));
            Workload w = workload(cfg.target, cfg.cases, rng);
            const Unit& u = *w.unit;
            Physics phys;
            switch (cfg.parameter) {
                case ScanParameter::Beta: phys.decay = value; break;
                case ScanParameter::NoiseSigma: phys.noise_sigma = value; break;
                case ScanParameter::ThresholdDelta:
                    phys.deviation = draw_deviations(u.netlist().neuron_count(), value, mix_seed(s, {2}));
                    break;
            }
            auto ideal = u.run(w.inputs);
            auto got = u.run_spiking(w.inputs, phys, mix_seed(s, {3}));
            const std::size_t lanes = w.inputs[0].size();
            std::size_t words = 0, bits = 0, total_bits = 0;
            for (std::size_t l = 0; l < lanes; ++l) {
                bool ok = true;
                for (std::size_t p = 0; p < ideal.size(); ++p) {
                    std::uint64_t diff = ideal[p][l] ^ got[p][l];
                    ok = ok && diff == 0;
                    bits += u.out_widths()[p] - std::popcount(diff);
                    total_bits += u.out_widths()[p];
                }
                words += ok;
            }
            word_acc.push_back(100.0 * static_cast<double>(words) / static_cast<double>(lanes));
            bit_acc.push_back(100.0 * static_cast<double>(bits) / static_cast<double>(total_bits));
        }
        auto mean = [](const std::vector<double>& v) {
            double s = 0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        double m = mean(word_acc), var = 0;
        for (double x : word_acc) var += (x - m) * (x - m);
        double sd = word_acc.size() > 1 ? std::sqrt(var / static_cast<double>(word_acc.size() - 1)) : 0.0;
        rows.push_back({name, cfg.parameter, value, m, sd, cfg.trials, cfg.seed, mean(bit_acc)});
    }
    return rows;
}

namespace {

std::vector<ScanRow> checked(const ScanConfig& cfg, ScanParameter want, bool fp_only) {
    if (cfg.parameter != want) throw std::invalid_argument("scan parameter does not match the scan kind");
    if (fp_only && cfg.target.kind != ScanTarget::Fp) throw std::invalid_argument("FP noise scan needs an fp target");
    return run_scan(cfg);
}

}  // namespace

std::vector<ScanRow> run_beta_scan(const ScanConfig& cfg) { return checked(cfg, ScanParameter::Beta, false); }
std::vector<ScanRow> run_noise_scan(const ScanConfig& cfg) { return checked(cfg, ScanParameter::NoiseSigma, false); }
std::vector<ScanRow> run_threshold_scan(const ScanConfig& cfg) {
    return checked(cfg, ScanParameter::ThresholdDelta, false);
}
std::vector<ScanRow> run_fp_noise_scan(const ScanConfig& cfg) { return checked(cfg, ScanParameter::NoiseSigma, true); }

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os << "target,parameter,value,trial_mean,trial_std,trials,seed,bit_accuracy\n";
    char buf[200];
    for (const ScanRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.4g,%.3f,%.3f,%u,%llu,%.3f\n", r.target.c_str(),
                      parameter_name(r.parameter).c_str(), r.value, r.trial_mean, r.trial_std, r.trials,
                      static_cast<unsigned long long>(r.seed), r.bit_mean);
        os << buf;
    }
    return os.str();
}

}  // namespace spikegate
