#include "spikegate/poly_coeffs.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <zlib.h>

namespace spikegate {

std::map<std::string, std::vector<std::uint32_t>> load_poly_coeffs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string body, line;
    std::map<std::string, std::vector<std::uint32_t>> out;
    bool checked = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string name, tok;
        ls >> name;
        if (name == "crc32") {
            ls >> tok;
            unsigned long want = std::stoul(tok, nullptr, 16);
            unsigned long got = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
            if (want != got) throw std::runtime_error("coefficient checksum mismatch in " + path);
            checked = true;
            break;
        }
        std::size_t index;
        if (!(ls >> index >> tok) || tok.rfind("0x", 0) != 0) throw std::runtime_error("malformed line: " + line);
        auto& v = out[name];
        if (index != v.size()) throw std::runtime_error("coefficients out of order: " + line);
        v.push_back(static_cast<std::uint32_t>(std::stoul(tok, nullptr, 16)));
        body += line + "\n";
    }
    if (!checked) throw std::runtime_error("missing checksum in " + path);
    return out;
}

}  // namespace spikegate
