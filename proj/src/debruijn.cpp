#include "cudseq/debruijn.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace cudseq {

Alphabet::Alphabet(std::uint64_t base) {
  if (base < 1 || base > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("alphabet size must be in [1, 2^32), got " + std::to_string(base));
  }
  base_ = static_cast<std::uint32_t>(base);
}

Order::Order(std::uint64_t k) {
  if (k < 1 || k > std::numeric_limits<unsigned>::max()) {
    throw InputError("order must be a positive integer, got " + std::to_string(k));
  }
  k_ = static_cast<unsigned>(k);
}

FordStream::FordStream(Alphabet base, Order order)
    : base_(base.base()),
      order_(order.value()),
      size_(checked_pow(base.base(), order.value(), "b^k")),
      word_(order.value() + 1, 0) {}

void FordStream::restart() {
  std::fill(word_.begin(), word_.end(), 0);
  prefix_len_ = 1;
  cursor_ = 1;
  done_ = false;
  emitted_ = 0;
}

bool FordStream::advance() {
  const Digit top = base_ - 1;
  for (;;) {
    unsigned i = order_;
    while (i > 0 && word_[i] == top) --i;
    if (i == 0) return false;
    ++word_[i];
    for (unsigned j = i + 1; j <= order_; ++j) word_[j] = word_[j - i];
    prefix_len_ = i;
    if (order_ % prefix_len_ == 0) {
      cursor_ = 1;
      return true;
    }
  }
}

std::optional<Digit> FordStream::next() {
  if (done_) return std::nullopt;
  if (cursor_ > prefix_len_ && !advance()) {
    done_ = true;
    return std::nullopt;
  }
  ++emitted_;
  return word_[cursor_++];
}

DigitSeq ford_sequence(Alphabet base, Order order) {
  FordStream stream(base, order);
  if (stream.size() > (u128{1} << 34)) {
    throw CapacityError("F^(" + std::to_string(base.base()) + "," + std::to_string(order.value()) +
                        ") is too long to materialize; stream it instead");
  }
  DigitSeq seq{base.base(), {}};
  seq.digits.reserve(static_cast<std::size_t>(stream.size()));
  while (auto d = stream.next()) seq.digits.push_back(*d);
  return seq;
}

bool is_debruijn(const DigitSeq& seq, Order order) {
  const unsigned k = order.value();
  u128 expected = 0;
  try {
    expected = checked_pow(seq.base, k);
  } catch (const CapacityError&) {
    return false;
  }
  if (seq.base == 0 || seq.digits.size() != expected) return false;
  for (Digit d : seq.digits) {
    if (d >= seq.base) return false;
  }
  const std::size_t len = seq.digits.size();
  // Rolling base-b value of the current window; always < b^k = len.
  const std::uint64_t lead = len / seq.base;  // b^(k-1)
  std::uint64_t index = 0;
  for (unsigned j = 0; j < k; ++j) index = index * seq.base + seq.digits[j % len];
  std::vector<bool> seen(len, false);
  for (std::size_t start = 0; start < len; ++start) {
    if (seen[index]) return false;
    seen[index] = true;
    const std::uint64_t out = seq.digits[start];
    const Digit in = seq.digits[(start + k) % len];
    index = (index - out * lead) * seq.base + in;
  }
  return true;
}

u128 word_occurrences(const DigitSeq& seq, const DigitSeq& word) {
  if (seq.base != word.base) {
    throw InputError("word base " + std::to_string(word.base) + " differs from sequence base " +
                     std::to_string(seq.base));
  }
  if (word.size() > seq.size()) throw InputError("word is longer than the sequence");
  const std::size_t len = seq.size();
  u128 count = 0;
  for (std::size_t start = 0; start < len; ++start) {
    bool match = true;
    for (std::size_t j = 0; j < word.size() && match; ++j) {
      match = seq.digits[(start + j) % len] == word.digits[j];
    }
    if (match) ++count;
  }
  return count;
}

BigInt best_count(Alphabet base, Order order) {
  const std::uint32_t b = base.base();
  if (b < 2) throw InputError("BEST count needs an alphabet of at least 2 symbols");
  const u128 exponent = checked_pow(b, order.value() - 1, "b^(k-1)");
  if (exponent > (1u << 20)) throw CapacityError("BEST count exponent b^(k-1) is too large");
  BigInt factorial = 1;
  for (std::uint32_t i = 2; i <= b; ++i) factorial *= i;
  BigInt numerator = boost::multiprecision::pow(factorial, static_cast<unsigned>(exponent));
  BigInt denominator = boost::multiprecision::pow(BigInt(b), order.value());
  return numerator / denominator;
}

namespace {

// Backtracking over sequences that open with the unique 0^k window; every
// de Bruijn sequence has exactly one such rotation and it is the least one.
class DeBruijnSearch {
 public:
  DeBruijnSearch(std::uint32_t base, unsigned order, std::size_t length)
      : base_(base), order_(order), length_(length), seq_(length, 0), used_(length, false) {}

  std::vector<DigitSeq> run() {
    if (length_ == 1) return {DigitSeq{base_, {0}}};
    used_[0] = true;  // window 0^k
    extend(order_);
    return std::move(found_);
  }

 private:
  std::size_t window_index(std::size_t start) const {
    std::size_t index = 0;
    for (unsigned j = 0; j < order_; ++j) index = index * base_ + seq_[(start + j) % length_];
    return index;
  }

  void extend(std::size_t pos) {
    if (pos == length_) {
      check_wraparound();
      return;
    }
    for (Digit d = 0; d < base_; ++d) {
      seq_[pos] = d;
      const std::size_t w = window_index(pos + 1 - order_);
      if (used_[w]) continue;
      used_[w] = true;
      extend(pos + 1);
      used_[w] = false;
    }
  }

  void check_wraparound() {
    std::vector<std::size_t> marked;
    bool ok = true;
    for (std::size_t start = length_ - order_ + 1; start < length_ && ok; ++start) {
      const std::size_t w = window_index(start);
      if (used_[w]) {
        ok = false;
      } else {
        used_[w] = true;
        marked.push_back(w);
      }
    }
    for (std::size_t w : marked) used_[w] = false;
    if (ok) found_.push_back(DigitSeq{base_, seq_});
  }

  std::uint32_t base_;
  unsigned order_;
  std::size_t length_;
  std::vector<Digit> seq_;
  std::vector<bool> used_;
  std::vector<DigitSeq> found_;
};

}  // namespace

std::vector<DigitSeq> enumerate_debruijn(Alphabet base, Order order) {
  const u128 length = checked_pow(base.base(), order.value(), "b^k");
  if (length > 24) throw CapacityError("enumeration guard: b^(b^k) candidates exceed 2^24");
  // b^(b^k) raw candidates
  const u128 candidates = checked_pow(base.base(), static_cast<unsigned>(length), "b^(b^k)");
  if (candidates > (u128{1} << 24)) {
    throw CapacityError("enumeration guard: b^(b^k) candidates exceed 2^24");
  }
  auto found = DeBruijnSearch(base.base(), order.value(), static_cast<std::size_t>(length)).run();
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace cudseq
