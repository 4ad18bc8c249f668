#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cudseq/u128.hpp"

namespace cudseq {

using Digit = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

/// Number of symbols b; digits range over 0..b-1. b = 1 is allowed.
class Alphabet {
 public:
  explicit Alphabet(std::uint64_t base);
  std::uint32_t base() const noexcept { return base_; }

 private:
  std::uint32_t base_;
};

/// Word length k >= 1.
class Order {
 public:
  explicit Order(std::uint64_t k);
  unsigned value() const noexcept { return k_; }

 private:
  unsigned k_;
};

/// A finite digit string over an alphabet. Compares lexicographically on digits.
struct DigitSeq {
  std::uint32_t base = 1;
  std::vector<Digit> digits;

  std::size_t size() const noexcept { return digits.size(); }

  bool operator==(const DigitSeq&) const = default;
  std::strong_ordering operator<=>(const DigitSeq& other) const {
    return digits <=> other.digits;
  }
};

/// Streams the Ford sequence F^(b,k), the lexicographically least de Bruijn
/// sequence, one digit at a time.
///
/// This is the Fredricksen-Kessler-Maiorana loop: a working word a[1..k] is
/// stepped through the prenecklaces in lexicographic order; whenever the
/// length p of the current Lyndon prefix divides k, a[1..p] is emitted.
/// Work per emitted digit is amortized constant and memory is O(k).
class FordStream {
 public:
  FordStream(Alphabet base, Order order);

  std::optional<Digit> next();

  /// Rewinds to the first digit.
  void restart();

  std::uint32_t base() const noexcept { return base_; }
  unsigned order() const noexcept { return order_; }
  /// b^k.
  u128 size() const noexcept { return size_; }
  u128 emitted() const noexcept { return emitted_; }

 private:
  bool advance();

  std::uint32_t base_;
  unsigned order_;
  u128 size_;
  u128 emitted_ = 0;
  std::vector<Digit> word_;  // 1-based; word_[0] unused
  unsigned prefix_len_ = 1;
  unsigned cursor_ = 1;
  bool done_ = false;
};

/// Materializes F^(b,k). Throws CapacityError if b^k does not fit in memory.
DigitSeq ford_sequence(Alphabet base, Order order);

/// True iff |seq| = base^k and every word of length k occurs exactly once
/// among the cyclic windows of seq.
bool is_debruijn(const DigitSeq& seq, Order order);

/// Number of cyclic windows of seq equal to word. Throws InputError when the
/// bases differ or the word is longer than the sequence.
u128 word_occurrences(const DigitSeq& seq, const DigitSeq& word);

/// (b!)^(b^(k-1)) / b^k, the BEST-theorem count of b-ary de Bruijn sequences
/// of order k. Requires b >= 2.
BigInt best_count(Alphabet base, Order order);

/// Every b-ary de Bruijn sequence of order k, each given by its least
/// rotation, sorted. Guarded to at most 2^24 raw candidates b^(b^k).
std::vector<DigitSeq> enumerate_debruijn(Alphabet base, Order order);

}  // namespace cudseq
