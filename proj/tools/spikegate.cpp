// Command-line driver: encode, verify, scan, energy.
// Exit codes: 0 success within budget, 1 budget violation, 2 usage or config error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "spikegate/bitplane.hpp"
#include "spikegate/energy.hpp"
#include "spikegate/fidelity.hpp"
#include "spikegate/robustness.hpp"
#include "spikegate/tensor_io.hpp"
#include "spikegate/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace spikegate;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr const char* kOutEnv = "SPIKEGATE_OUT_DIR";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    std::uint64_t seed = 1;
    bool json_out = false;
    std::string out_dir;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path.string());
    f << text;
}

std::string hex32(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

// SOURCE_DATE_EPOCH pins the timestamp for reproducible artifacts.
std::string timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json manifest(const std::string& command, const Global& g, const json& config) {
    const std::string canon = config.dump();
    const auto digest = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(canon.data()), static_cast<uInt>(canon.size())));
    return {{"command", command},   {"seed", g.seed},           {"config_digest", "crc32:" + hex32(digest)},
            {"tool_version", kVersion}, {"timestamp", timestamp()}, {"config", config}};
}

json csv_to_json(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> header;
    json rows = json::array();
    auto split = [](const std::string& s) {
        std::vector<std::string> f;
        std::string cur;
        std::istringstream ss(s);
        while (std::getline(ss, cur, ',')) f.push_back(cur);
        if (!s.empty() && s.back() == ',') f.emplace_back();
        return f;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split(line);
        if (header.empty()) {
            header = fields;
            continue;
        }
        json row = json::object();
        for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
            const std::string& v = fields[i];
            char* end = nullptr;
            const double d = std::strtod(v.c_str(), &end);
            if (!v.empty() && end == v.c_str() + v.size())
                row[header[i]] = d;
            else
                row[header[i]] = v;
        }
        rows.push_back(row);
    }
    return rows;
}

// Table to stdout (CSV or JSON) and, when an output directory is set, to
// <dir>/<name>.csv or .json with the manifest embedded.
void emit(const Global& g, const std::string& name, const std::string& csv, const json& man) {
    std::string text;
    if (g.json_out) {
        text = json{{"manifest", man}, {"rows", csv_to_json(csv)}}.dump(2) + "\n";
    } else {
        text = "# manifest " + man.dump() + "\n" + csv;
    }
    std::cout << (g.json_out ? text : csv);
    if (!g.out_dir.empty()) write_file(fs::path(g.out_dir) / (name + (g.json_out ? ".json" : ".csv")), text);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ','))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

template <class T>
std::vector<T> parse_numbers(const std::string& s) {
    std::vector<T> out;
    for (const auto& f : split_list(s)) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(f, &used);
        } catch (const std::exception&) {
            throw UsageError("bad number '" + f + "'");
        }
        if (used != f.size()) throw UsageError("bad number '" + f + "'");
        out.push_back(static_cast<T>(v));
    }
    if (out.empty()) throw UsageError("empty number list");
    return out;
}

// Scan settings: defaults per kind, then a JSON config file, then flags.
struct ScanOptions {
    std::string kind;
    std::string config_path;
    std::string targets, values, blocks, schemes, steps;
    unsigned trials = 0;
    std::size_t cases = 0, n = 0;
};

json scan_defaults(const std::string& kind) {
    if (kind == "beta")
        return {{"targets", "and,or,xor,adder4,mult4x4"}, {"values", "1.0,0.9,0.7,0.5,0.3,0.1"}, {"trials", 10},
                {"cases", 1024}};
    if (kind == "noise")
        return {{"targets", "and,or,xor,adder4,mult4x4,shifter"}, {"values", "0,0.1,0.2,0.3,0.35"}, {"trials", 10},
                {"cases", 1024}};
    if (kind == "threshold")
        return {{"targets", "and,or,xor"}, {"values", "0,0.05,0.1,0.2,0.3"}, {"trials", 10}, {"cases", 1024}};
    if (kind == "fpnoise")
        return {{"targets", "fp8_add,fp8_mul,fp16_add,fp32_add"}, {"values", "0,0.01,0.05,0.1,0.15"}, {"trials", 10},
                {"cases", 1000}};
    if (kind == "depth") return {{"blocks", "1,2,4,8"}, {"sequences", 4}};
    if (kind == "encoding") return {{"schemes", "rate,ttfs,spatial,truncated"}, {"steps", "16,32"}, {"n", 10000}, {"trials", 5}};
    throw UsageError("unknown scan kind: " + kind);
}

json resolve_scan_config(const ScanOptions& o) {
    json cfg = scan_defaults(o.kind);
    if (!o.config_path.empty()) {
        json file;
        try {
            file = json::parse(read_file(o.config_path));
        } catch (const json::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
        if (!file.is_object()) throw UsageError("config must be a JSON object");
        for (auto& [k, v] : file.items()) {
            if (!cfg.contains(k)) throw UsageError("config: unknown key '" + k + "' for scan " + o.kind);
            cfg[k] = v;
        }
    }
    auto set = [&](const char* key, const std::string& v) {
        if (!v.empty()) {
            if (!cfg.contains(key)) throw UsageError(std::string("--") + key + " does not apply to scan " + o.kind);
            cfg[key] = v;
        }
    };
    set("targets", o.targets);
    set("values", o.values);
    set("blocks", o.blocks);
    set("schemes", o.schemes);
    set("steps", o.steps);
    auto setn = [&](const char* key, std::size_t v) {
        if (v) {
            if (!cfg.contains(key)) throw UsageError(std::string("--") + key + " does not apply to scan " + o.kind);
            cfg[key] = v;
        }
    };
    setn("trials", o.trials);
    setn("cases", o.cases);
    setn("n", o.n);
    return cfg;
}

template <class T>
T get_number(const json& cfg, const char* key) {
    const json& v = cfg.at(key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) throw UsageError(std::string(key) + " must be a positive integer");
    return v.get<T>();
}

std::string get_string(const json& cfg, const char* key) {
    const json& v = cfg.at(key);
    if (!v.is_string()) throw UsageError(std::string(key) + " must be a comma-separated string");
    return v.get<std::string>();
}

std::string run_robustness(const std::string& kind, const json& cfg, std::uint64_t seed) {
    const ScanParameter p = kind == "beta"        ? ScanParameter::Beta
                            : kind == "threshold" ? ScanParameter::ThresholdDelta
                                                  : ScanParameter::NoiseSigma;
    std::vector<ScanRow> rows;
    std::string t = get_string(cfg, "targets");
    if (t == "all") t = kind == "fpnoise" ? "fp8_add,fp8_mul,fp16_add,fp32_add" : "and,or,xor,adder4,mult4x4,shifter";
    for (const auto& name : split_list(t)) {
        ScanConfig c;
        c.parameter = p;
        c.values = parse_numbers<double>(get_string(cfg, "values"));
        c.trials = get_number<unsigned>(cfg, "trials");
        c.cases = get_number<std::size_t>(cfg, "cases");
        c.seed = seed;
        c.target = parse_scan_target(name);
        auto part = kind == "beta"        ? run_beta_scan(c)
                    : kind == "threshold" ? run_threshold_scan(c)
                    : kind == "fpnoise"   ? run_fp_noise_scan(c)
                                          : run_noise_scan(c);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return scan_csv(rows);
}

std::string run_depth(const json& cfg, std::uint64_t seed) {
    auto blocks = parse_numbers<std::size_t>(get_string(cfg, "blocks"));
    std::size_t deepest = 0;
    for (auto b : blocks) {
        if (b == 0) throw UsageError("block counts must be positive");
        deepest = std::max(deepest, b);
    }
    DepthScanConfig dc;
    dc.sequences = get_number<std::size_t>(cfg, "sequences");
    auto all = depth_scan(deepest, seed, dc);
    std::ostringstream os;
    const std::string csv = depth_scan_csv(all);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    os << line << "\n";
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    for (auto b : blocks) os << lines[b - 1] << "\n";
    return os.str();
}

std::string run_encoding(const json& cfg, std::uint64_t seed) {
    const auto steps = parse_numbers<unsigned>(get_string(cfg, "steps"));
    const auto n = get_number<std::size_t>(cfg, "n");
    const auto trials = get_number<unsigned>(cfg, "trials");
    std::vector<EncodingRow> rows;
    for (const auto& s : split_list(get_string(cfg, "schemes"))) {
        if (s == "spatial") {
            rows.push_back(encoding_benchmark(EncodingScheme::Spatial, 32, n, seed, trials));
        } else if (s == "rate" || s == "ttfs" || s == "truncated") {
            const EncodingScheme e = s == "rate"   ? EncodingScheme::Rate
                                     : s == "ttfs" ? EncodingScheme::Ttfs
                                                   : EncodingScheme::SpatialTruncated;
            for (unsigned st : steps) {
                if (e == EncodingScheme::SpatialTruncated && st > 32) throw UsageError("truncated keeps at most 32 bits");
                rows.push_back(encoding_benchmark(e, st, n, seed, trials));
            }
        } else {
            throw UsageError("unknown scheme: " + s);
        }
    }
    return encoding_csv(rows);
}

int cmd_encode(const Global& g, const std::string& format, bool decimal, const std::string& in, const std::string& out) {
    Precision p;
    try {
        p = parse_precision(format);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    std::vector<std::uint64_t> bits;
    try {
        bits = parse_patterns(read_file(in), p, decimal);
    } catch (const std::invalid_argument& e) {
        throw UsageError(in + ": " + e.what());
    }
    const BitPlaneTensor t = encode(bits, p);
    json doc = json::parse(bitplane_to_json(t));
    doc["manifest"] = manifest("encode", g, {{"format", precision_name(p)}, {"decimal", decimal}, {"input", in}});
    write_file(out, doc.dump(2) + "\n");
    std::cerr << "encoded " << t.size() << " " << precision_name(p) << " values into " << out << "\n";
    return 0;
}

int cmd_verify(const Global& g, const std::string& op, std::size_t samples, const std::string& format,
               bool no_correction) {
    VerifyOptions o;
    try {
        o.format = parse_precision(format);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    o.exact_rounding = !no_correction;
    VerifyResult r;
    try {
        r = verify_op(op, samples, g.seed, o);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json config = {{"op", op}, {"samples", samples}, {"format", precision_name(o.format)}, {"correction", !no_correction}};
    emit(g, "verify_" + op, verify_csv({r}), manifest("verify", g, config));
    std::cerr << op << " vs " << r.reference << ": " << format_report(r.report) << " budget " << r.budget
              << (r.pass ? " PASS" : " FAIL") << "\n";
    return r.pass ? 0 : 1;
}

int cmd_scan(const Global& g, const ScanOptions& o) {
    const json cfg = resolve_scan_config(o);
    std::string csv;
    try {
        if (o.kind == "depth")
            csv = run_depth(cfg, g.seed);
        else if (o.kind == "encoding")
            csv = run_encoding(cfg, g.seed);
        else
            csv = run_robustness(o.kind, cfg, g.seed);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const json::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    emit(g, "scan_" + o.kind, csv, manifest("scan " + o.kind, g, cfg));
    return 0;
}

int cmd_energy(const Global& g, const std::string& mode, const std::string& baseline, std::size_t evaluations) {
    EnergyMode m;
    BaselineCostTable costs;
    try {
        m = parse_energy_mode(mode);
        costs = load_baseline_costs(baseline.empty() ? default_baseline_path() : baseline);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    std::vector<EnergyReport> rows;
    try {
        rows = component_table(m, costs, g.seed, evaluations);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json config = {{"mode", mode}, {"baseline", baseline.empty() ? "default" : baseline}, {"evaluations", evaluations}};
    emit(g, "energy_" + mode, energy_csv(rows), manifest("energy", g, config));
    std::cerr << "savings use baseline x " << costs.unit_scale
              << " (baseline nJ are scaled by that factor relative to spikes x 23.6 pJ)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bit-exact spiking gate circuits: encode, verify, scan, energy"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    Global g;
    app.add_option("--seed", g.seed, "Root seed for every random stream")->capture_default_str();
    app.add_flag("--json", g.json_out, "Emit JSON instead of CSV");
    app.add_option("--out", g.out_dir, std::string("Output directory (default $") + kOutEnv + ")");

    std::string enc_format = "fp32", enc_in, enc_out;
    bool enc_decimal = false;
    auto* enc = app.add_subcommand("encode", "Hex bit patterns to a bit-plane file");
    enc->add_option("--format", enc_format, "fp8_e4m3, fp16, fp32 or fp64")->capture_default_str();
    enc->add_flag("--decimal", enc_decimal, "Also accept decimal values that round-trip");
    enc->add_option("input", enc_in, "Pattern file")->required();
    enc->add_option("output", enc_out, "Bit-plane file")->required();

    std::string ver_op, ver_format = "fp32";
    std::size_t ver_samples = 1024;
    bool ver_no_corr = false;
    auto* ver = app.add_subcommand("verify", "Circuit vs host reference, exit 1 when over budget");
    ver->add_option("--op", ver_op, "Operation")->required();
    ver->add_option("--samples", ver_samples, "Number of inputs")->capture_default_str();
    ver->add_option("--format", ver_format, "Format for fp_* ops")->capture_default_str();
    ver->add_flag("--no-correction", ver_no_corr, "Skip the div/recip/sqrt remainder correction");

    ScanOptions so;
    auto* scan = app.add_subcommand("scan", "Robustness, depth and encoding scans");
    scan->add_option("kind", so.kind, "beta, noise, threshold, fpnoise, depth or encoding")->required();
    scan->add_option("--config", so.config_path, "JSON object overriding the defaults");
    scan->add_option("--targets", so.targets, "Comma list or 'all'");
    scan->add_option("--values", so.values, "Parameter values");
    scan->add_option("--trials", so.trials, "Trials per value");
    scan->add_option("--cases", so.cases, "Evaluations per trial");
    scan->add_option("--blocks", so.blocks, "Depths for the depth scan");
    scan->add_option("--schemes", so.schemes, "rate, ttfs, spatial, truncated");
    scan->add_option("--steps", so.steps, "Time steps (or kept bits for truncated)");
    scan->add_option("--n", so.n, "Values per encoding trial");

    std::string en_mode = "measured", en_baseline;
    std::size_t en_evals = 256;
    auto* energy = app.add_subcommand("energy", "Component energy table");
    energy->add_option("--mode", en_mode, "measured or expected")->capture_default_str();
    energy->add_option("--baseline", en_baseline, "Baseline cost file");
    energy->add_option("--evaluations", en_evals, "Evaluations per component")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (g.out_dir.empty())
        if (const char* e = std::getenv(kOutEnv)) g.out_dir = e;

    try {
        if (*enc) return cmd_encode(g, enc_format, enc_decimal, enc_in, enc_out);
        if (*ver) return cmd_verify(g, ver_op, ver_samples, ver_format, ver_no_corr);
        if (*scan) return cmd_scan(g, so);
        if (*energy) return cmd_energy(g, en_mode, en_baseline, en_evals);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
