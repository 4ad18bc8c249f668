#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cudseq/error.hpp"

namespace cudseq {

/// Unsigned 128-bit magnitude used for sequence lengths and stream indices.
using u128 = unsigned __int128;

inline constexpr u128 kU128Max = ~u128{0};

/// Checked arithmetic; throws CapacityError naming `what` on overflow.
u128 checked_add(u128 a, u128 b, std::string_view what = "sum");
u128 checked_mul(u128 a, u128 b, std::string_view what = "product");
u128 checked_pow(u128 base, unsigned exponent, std::string_view what = "power");

std::string to_string(u128 value);

/// Parses a non-negative decimal integer. Rejects signs, blanks and overflow.
u128 parse_u128(std::string_view text);

/// Narrowing with a capacity check.
std::uint64_t to_u64(u128 value, std::string_view what = "value");

}  // namespace cudseq
