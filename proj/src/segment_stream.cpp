#include "cudseq/segment_stream.hpp"

#include <limits>

namespace cudseq {

SegmentStream::SegmentStream(Schedule schedule, unsigned first, std::optional<unsigned> last)
    : schedule_(std::move(schedule)), last_(last) {
  if (first < 1) throw InputError("segment orders start at 1");
  if (!open_segment(first)) done_ = true;
}

bool SegmentStream::open_segment(unsigned n) {
  for (;; ++n) {
    if (last_ && n > *last_) return false;
    if (n == std::numeric_limits<unsigned>::max()) throw CapacityError("segment order overflow");
    spec_ = schedule_(n);
    if (spec_.den == 0 || spec_.base > spec_.den) {
      throw InputError("segment denominator must be at least the alphabet size");
    }
    spec_.length();  // size check up front
    segment_ = n;
    copy_ = 0;
    offset_ = 0;
    if (spec_.copies == 0) continue;
    ford_.emplace(Alphabet(spec_.base), Order(spec_.order));
    return true;
  }
}

std::optional<RationalTerm> SegmentStream::next() {
  if (done_) return std::nullopt;
  auto digit = ford_->next();
  if (!digit) {
    if (copy_ + 1 < spec_.copies) {
      ++copy_;
      ford_->restart();
    } else if (!open_segment(segment_ + 1)) {
      done_ = true;
      return std::nullopt;
    }
    offset_ = 0;
    digit = ford_->next();
  }
  ++offset_;
  emitted_ = checked_add(emitted_, 1, "stream index");
  return RationalTerm{*digit, spec_.den};
}

std::optional<StreamPosition> SegmentStream::position() const {
  if (emitted_ == 0) return std::nullopt;
  return StreamPosition{segment_, copy_, offset_};
}

}  // namespace cudseq
