#include "spikegate/tensor_io.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace spikegate {

namespace {

std::uint64_t parse_decimal(const std::string& tok, Precision format) {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("malformed value: " + tok);
    if (format == Precision::FP64) return std::bit_cast<std::uint64_t>(v);
    if (format == Precision::FP32) {
        float f = static_cast<float>(v);
        return std::bit_cast<std::uint32_t>(f);
    }
    throw std::invalid_argument("decimal input is only supported for fp32/fp64");
}

}  // namespace

std::vector<std::uint64_t> parse_patterns(const std::string& text, Precision format, bool allow_decimal) {
    const unsigned width = bit_width(format);
    const std::uint64_t limit = width == 64 ? ~0ULL : (1ULL << width) - 1;
    std::vector<std::uint64_t> out;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
            if (tok.size() > 2 + width / 4) throw std::invalid_argument("hex pattern too wide: " + tok);
            std::uint64_t v = 0;
            for (std::size_t i = 2; i < tok.size(); ++i) {
                int c = std::tolower(static_cast<unsigned char>(tok[i]));
                int d = std::isdigit(c) ? c - '0' : (c >= 'a' && c <= 'f') ? c - 'a' + 10 : -1;
                if (d < 0) throw std::invalid_argument("malformed hex pattern: " + tok);
                v = (v << 4) | static_cast<std::uint64_t>(d);
            }
            if (v & ~limit) throw std::invalid_argument("hex pattern too wide: " + tok);
            out.push_back(v);
        } else if (allow_decimal) {
            out.push_back(parse_decimal(tok, format));
        } else {
            throw std::invalid_argument("expected hex bit pattern, got: " + tok);
        }
        tok.clear();
    };
    for (char ch : text) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) flush();
        else tok.push_back(ch);
    }
    flush();
    return out;
}

std::string format_pattern(std::uint64_t bits, Precision format) {
    char buf[32];
    int digits = static_cast<int>(bit_width(format) / 4);
    std::snprintf(buf, sizeof buf, "0x%0*llX", digits, static_cast<unsigned long long>(bits));
    return buf;
}

void write_patterns_csv(std::ostream& os, const std::vector<std::uint64_t>& bits, Precision format) {
    for (auto b : bits) os << format_pattern(b, format) << '\n';
}

std::string bitplane_to_json(const BitPlaneTensor& t) {
    nlohmann::json j;
    j["format"] = precision_name(t.format());
    j["elements"] = t.size();
    nlohmann::json planes = nlohmann::json::array();
    for (unsigned p = 0; p < t.width(); ++p) {
        nlohmann::json words = nlohmann::json::array();
        for (std::size_t w = 0; w < t.words_per_plane(); ++w)
            words.push_back(format_pattern(t.plane(p)[w], Precision::FP64));
        planes.push_back(words);
    }
    j["planes"] = planes;
    return j.dump(1);
}

BitPlaneTensor bitplane_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Precision f = parse_precision(j.at("format").get<std::string>());
    BitPlaneTensor t(f, j.at("elements").get<std::size_t>());
    const auto& planes = j.at("planes");
    if (planes.size() != t.width()) throw std::invalid_argument("plane count does not match format");
    for (unsigned p = 0; p < t.width(); ++p) {
        if (planes[p].size() != t.words_per_plane()) throw std::invalid_argument("plane length mismatch");
        for (std::size_t w = 0; w < t.words_per_plane(); ++w)
            t.plane(p)[w] = parse_patterns(planes[p][w].get<std::string>(), Precision::FP64).at(0);
    }
    return t;
}

}  // namespace spikegate
