#pragma once

#include <functional>
#include <optional>

#include "cudseq/debruijn.hpp"
#include "cudseq/rational.hpp"
#include "cudseq/u128.hpp"

namespace cudseq {

/// One block of a concatenation: `copies` back-to-back copies of
/// F^(base, order) with every digit divided by `den`.
struct SegmentSpec {
  std::uint32_t base = 1;
  unsigned order = 1;
  std::uint64_t den = 1;
  u128 copies = 1;

  u128 copy_length() const { return checked_pow(base, order, "segment copy length"); }
  u128 length() const { return checked_mul(copies, copy_length(), "segment length"); }
};

/// Where the most recently emitted term sits: segment order, number of
/// complete copies of that segment's block before it, and its 1-based offset
/// inside the current copy.
struct StreamPosition {
  unsigned segment = 0;
  u128 copy = 0;
  u128 offset = 0;

  bool operator==(const StreamPosition&) const = default;
};

/// Lazy concatenation of Ford-derived segments n = first, first+1, ...
/// (optionally stopping after `last`). Each copy is regenerated rather than
/// cached, so memory stays O(order) however far the stream runs.
class SegmentStream {
 public:
  using Schedule = std::function<SegmentSpec(unsigned n)>;

  SegmentStream(Schedule schedule, unsigned first, std::optional<unsigned> last);

  std::optional<RationalTerm> next();

  /// Number of terms emitted so far.
  u128 emitted() const noexcept { return emitted_; }
  /// Position of the last emitted term; nullopt before the first.
  std::optional<StreamPosition> position() const;

 private:
  bool open_segment(unsigned n);

  Schedule schedule_;
  std::optional<unsigned> last_;
  unsigned segment_ = 0;
  SegmentSpec spec_;
  std::optional<FordStream> ford_;
  u128 copy_ = 0;
  u128 offset_ = 0;
  u128 emitted_ = 0;
  bool done_ = false;
};

}  // namespace cudseq
