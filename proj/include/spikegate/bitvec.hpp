#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spikegate {

// Packed lane bits; lane i is bit i%64 of word i/64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t lanes) : lanes_(lanes), words_((lanes + 63) / 64, 0) {}
    static BitVec from_bools(const std::vector<int>& bits);

    std::size_t size() const { return lanes_; }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    void set(std::size_t i, bool v) {
        if (v) words_[i / 64] |= 1ULL << (i % 64);
        else words_[i / 64] &= ~(1ULL << (i % 64));
    }
    std::uint64_t* data() { return words_.data(); }
    const std::uint64_t* data() const { return words_.data(); }
    std::size_t popcount() const;

    bool operator==(const BitVec& o) const { return lanes_ == o.lanes_ && words_ == o.words_; }

private:
    std::size_t lanes_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace spikegate
