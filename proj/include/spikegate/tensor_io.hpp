#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spikegate/bitplane.hpp"

namespace spikegate {

// Tensor exchange: values are hex bit patterns ("0x3F800000"), separated by
// commas, whitespace or newlines. Decimal text is accepted only when
// allow_decimal is set (and then must round-trip through the format).
std::vector<std::uint64_t> parse_patterns(const std::string& text, Precision format,
                                          bool allow_decimal = false);
std::string format_pattern(std::uint64_t bits, Precision format);
void write_patterns_csv(std::ostream& os, const std::vector<std::uint64_t>& bits, Precision format);

// Bit-plane file: JSON with format, element count and one hex word list per
// plane (plane 0 = sign).
std::string bitplane_to_json(const BitPlaneTensor& t);
BitPlaneTensor bitplane_from_json(const std::string& text);

}  // namespace spikegate
