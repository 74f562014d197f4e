#include "spikegate/bitvec.hpp"

#include <bit>

namespace spikegate {

BitVec BitVec::from_bools(const std::vector<int>& bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) v.set(i, bits[i] != 0);
    return v;
}

std::size_t BitVec::popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

}  // namespace spikegate
