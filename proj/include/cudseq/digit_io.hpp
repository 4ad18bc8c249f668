#pragma once

#include <istream>
#include <ostream>

#include "cudseq/debruijn.hpp"

namespace cudseq {

/// Text layout: a header `# base=<b> order=<k> len=<n>` followed by one
/// decimal digit per line.
void write_digits_text(std::ostream& out, FordStream& stream);
void write_digits_text(std::ostream& out, const DigitSeq& seq, Order order);

struct TextDigits {
  DigitSeq seq;
  unsigned order = 0;
};
TextDigits read_digits_text(std::istream& in);

/// Binary layout, all integers little-endian:
///   "CUDS" | 0x01 | base:u64 | count:u64 | count x digit:u32
inline constexpr char kBinaryMagic[4] = {'C', 'U', 'D', 'S'};
inline constexpr std::uint8_t kBinaryVersion = 0x01;

void write_digits_binary(std::ostream& out, FordStream& stream);
void write_digits_binary(std::ostream& out, const DigitSeq& seq);
DigitSeq read_digits_binary(std::istream& in);

}  // namespace cudseq
