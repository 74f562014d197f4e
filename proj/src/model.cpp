#include "spikegate/model.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <zlib.h>

namespace spikegate {

namespace {

using nlohmann::json;

std::string hex(float v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08X", std::bit_cast<std::uint32_t>(v));
    return buf;
}

float unhex(const std::string& s) {
    if (s.size() != 10 || s.rfind("0x", 0) != 0) throw std::invalid_argument("bad FP32 pattern: " + s);
    return std::bit_cast<float>(static_cast<std::uint32_t>(std::stoul(s, nullptr, 16)));
}

json hex_list(const std::vector<float>& v) {
    json a = json::array();
    for (float x : v) a.push_back(hex(x));
    return a;
}

std::vector<float> from_hex_list(const json& a) {
    std::vector<float> v;
    for (const auto& s : a) v.push_back(unhex(s.get<std::string>()));
    return v;
}

json linear_json(const LinearWeights& l) {
    return {{"in", l.in}, {"out", l.out}, {"w", hex_list(l.w)}, {"b", hex_list(l.b)}};
}

LinearWeights linear_from(const json& j) {
    LinearWeights l;
    l.in = j.at("in").get<std::size_t>();
    l.out = j.at("out").get<std::size_t>();
    l.w = from_hex_list(j.at("w"));
    l.b = from_hex_list(j.at("b"));
    l.validate();
    return l;
}

std::uint32_t checksum(const json& tensors) {
    std::string s = tensors.dump();
    return static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

const char* kLinearNames[] = {"wq", "wk", "wv", "wo", "up", "down"};

LinearWeights* linear_slots(BlockWeights& w, int i) {
    LinearWeights* slots[] = {&w.wq, &w.wk, &w.wv, &w.wo, &w.up, &w.down};
    return slots[i];
}

}  // namespace

void LinearWeights::validate() const {
    if (in == 0 || out == 0) throw std::invalid_argument("linear layer with empty dimension");
    if (w.size() != in * out || b.size() != out) throw std::invalid_argument("linear weight shape mismatch");
}

void BlockConfig::validate() const {
    if (d_model == 0 || n_heads == 0 || d_ff == 0 || seq_len == 0) throw std::invalid_argument("empty block dimension");
    if (d_model % n_heads != 0) throw std::invalid_argument("d_model must be divisible by n_heads");
    if (head_dim() % 2 != 0) throw std::invalid_argument("head dimension must be even for RoPE");
}

void BlockWeights::validate(const BlockConfig& cfg) const {
    cfg.validate();
    const std::size_t d = cfg.d_model;
    if (norm1.size() != d || norm2.size() != d) throw std::invalid_argument("norm gain size mismatch");
    auto check = [](const LinearWeights& l, std::size_t in, std::size_t out) {
        l.validate();
        if (l.in != in || l.out != out) throw std::invalid_argument("block weight shape mismatch");
    };
    check(wq, d, d);
    check(wk, d, d);
    check(wv, d, d);
    check(wo, d, d);
    check(up, d, cfg.d_ff);
    check(down, cfg.d_ff, d);
}

LinearWeights random_linear(std::size_t in, std::size_t out, std::uint64_t seed, float lo, float hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    LinearWeights l{in, out, std::vector<float>(in * out), std::vector<float>(out)};
    for (auto& v : l.w) v = u(rng);
    for (auto& v : l.b) v = u(rng);
    return l;
}

BlockWeights random_block(const BlockConfig& cfg, std::uint64_t seed, double scale) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> g(0.0, 0.1);
    auto lin = [&](std::size_t in, std::size_t out) {
        LinearWeights l{in, out, std::vector<float>(in * out), std::vector<float>(out)};
        double s = scale / std::sqrt(static_cast<double>(in));
        for (auto& v : l.w) v = static_cast<float>(u(rng) * s);
        for (auto& v : l.b) v = static_cast<float>(u(rng) * 0.1 * scale);
        return l;
    };
    auto gain = [&] {
        std::vector<float> v(cfg.d_model);
        for (auto& x : v) x = static_cast<float>(1.0 + g(rng));
        return v;
    };
    BlockWeights w;
    w.norm1 = gain();
    w.norm2 = gain();
    const std::size_t d = cfg.d_model;
    w.wq = lin(d, d);
    w.wk = lin(d, d);
    w.wv = lin(d, d);
    w.wo = lin(d, d);
    w.up = lin(d, cfg.d_ff);
    w.down = lin(cfg.d_ff, d);
    return w;
}

BlockWeights zero_block(const BlockConfig& cfg) {
    cfg.validate();
    auto lin = [](std::size_t in, std::size_t out) {
        return LinearWeights{in, out, std::vector<float>(in * out, 0.0f), std::vector<float>(out, 0.0f)};
    };
    const std::size_t d = cfg.d_model;
    return {std::vector<float>(d, 1.0f), std::vector<float>(d, 1.0f), lin(d, d), lin(d, d), lin(d, d), lin(d, d),
            lin(d, cfg.d_ff), lin(cfg.d_ff, d)};
}

std::vector<float> rope_inv_freq(std::size_t head_dim, double base) {
    std::vector<float> f(head_dim / 2);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = static_cast<float>(std::pow(base, -2.0 * static_cast<double>(i) / static_cast<double>(head_dim)));
    return f;
}

std::string block_to_json(const BlockConfig& cfg, const BlockWeights& w) {
    w.validate(cfg);
    json tensors = {{"norm1", hex_list(w.norm1)}, {"norm2", hex_list(w.norm2)}};
    for (int i = 0; i < 6; ++i) tensors[kLinearNames[i]] = linear_json(*linear_slots(const_cast<BlockWeights&>(w), i));
    char eps[16];
    std::snprintf(eps, sizeof eps, "0x%08X", cfg.eps);
    json j = {{"config",
               {{"d_model", cfg.d_model},
                {"n_heads", cfg.n_heads},
                {"d_ff", cfg.d_ff},
                {"seq_len", cfg.seq_len},
                {"rope_base", cfg.rope_base},
                {"eps", eps}}},
              {"tensors", tensors},
              {"crc32", checksum(tensors)}};
    return j.dump(1);
}

void block_from_json(const std::string& text, BlockConfig& cfg, BlockWeights& w) {
    json j = json::parse(text);
    const json& c = j.at("config");
    BlockConfig nc;
    nc.d_model = c.at("d_model").get<std::size_t>();
    nc.n_heads = c.at("n_heads").get<std::size_t>();
    nc.d_ff = c.at("d_ff").get<std::size_t>();
    nc.seq_len = c.at("seq_len").get<std::size_t>();
    nc.rope_base = c.at("rope_base").get<double>();
    nc.eps = std::bit_cast<std::uint32_t>(unhex(c.at("eps").get<std::string>()));
    const json& t = j.at("tensors");
    if (checksum(t) != j.at("crc32").get<std::uint32_t>()) throw std::invalid_argument("weight file checksum mismatch");
    BlockWeights nw;
    nw.norm1 = from_hex_list(t.at("norm1"));
    nw.norm2 = from_hex_list(t.at("norm2"));
    for (int i = 0; i < 6; ++i) *linear_slots(nw, i) = linear_from(t.at(kLinearNames[i]));
    nw.validate(nc);
    cfg = nc;
    w = std::move(nw);
}

}  // namespace spikegate
