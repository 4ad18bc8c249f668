#include "cudseq/u128.hpp"

#include <algorithm>

namespace cudseq {

namespace {

[[noreturn]] void overflow(std::string_view what) {
  throw CapacityError(std::string(what) + " exceeds 128-bit capacity");
}

}  // namespace

u128 checked_add(u128 a, u128 b, std::string_view what) {
  if (a > kU128Max - b) overflow(what);
  return a + b;
}

u128 checked_mul(u128 a, u128 b, std::string_view what) {
  if (a != 0 && b > kU128Max / a) overflow(what);
  return a * b;
}

u128 checked_pow(u128 base, unsigned exponent, std::string_view what) {
  u128 result = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    result = checked_mul(result, base, what);
    // 0^e and 1^e settle immediately
    if (result <= 1) break;
  }
  return result;
}

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

u128 parse_u128(std::string_view text) {
  if (text.empty()) throw InputError("expected a non-negative integer, got an empty string");
  u128 value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw InputError("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    if (value > (kU128Max - static_cast<unsigned>(c - '0')) / 10) {
      throw CapacityError("integer '" + std::string(text) + "' exceeds 128-bit capacity");
    }
    value = value * 10 + static_cast<unsigned>(c - '0');
  }
  return value;
}

std::uint64_t to_u64(u128 value, std::string_view what) {
  if (value > UINT64_MAX) throw CapacityError(std::string(what) + " exceeds 64-bit capacity");
  return static_cast<std::uint64_t>(value);
}

}  // namespace cudseq
