#include "cudseq/rational.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "cudseq/error.hpp"
#include "cudseq/u128.hpp"

namespace cudseq {

RationalTerm RationalTerm::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || num >= den) {
    throw InputError("term " + std::to_string(num) + "/" + std::to_string(den) +
                     " is not in [0,1)");
  }
  return RationalTerm{num, den};
}

int compare_values(RationalTerm a, RationalTerm b) noexcept {
  const u128 lhs = static_cast<u128>(a.num) * b.den;
  const u128 rhs = static_cast<u128>(b.num) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::uint64_t ceil_scaled(double bound, std::uint64_t den) {
  if (bound <= 0.0) return 0;
  if (bound >= 1.0) return den;
  int exponent = 0;
  const double fraction = std::frexp(bound, &exponent);  // bound = fraction * 2^exponent
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(fraction, 53));
  const int shift = 53 - exponent;  // bound = mantissa / 2^shift, shift >= 53
  const u128 scaled = static_cast<u128>(mantissa) * den;
  if (scaled == 0) return 0;
  if (shift >= 128) return 1;  // 0 < scaled / 2^shift < 1
  const u128 quotient = scaled >> shift;
  const bool exact = (quotient << shift) == scaled;
  return static_cast<std::uint64_t>(exact ? quotient : quotient + 1);
}

std::string format_rational(RationalTerm term) {
  return std::to_string(term.num) + "/" + std::to_string(term.den);
}

RationalTerm parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  auto number = [&](std::string_view part) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw InputError("bad term '" + std::string(text) + "'");
    }
    return v;
  };
  if (slash == std::string_view::npos) throw InputError("bad term '" + std::string(text) + "'");
  return RationalTerm::make(number(text.substr(0, slash)), number(text.substr(slash + 1)));
}

std::vector<RationalTerm> read_rational_text(std::istream& in) {
  std::vector<RationalTerm> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    terms.push_back(parse_rational(line));
  }
  return terms;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

}  // namespace cudseq
