#include "cudseq/knuth.hpp"

#include <string>

namespace cudseq::knuth {

namespace {

SegmentSpec spec_for(unsigned n, bool repeated) {
  if (n < 1) throw InputError("Knuth segment order must be at least 1");
  if (n >= 32) throw CapacityError("Knuth alphabet 2^" + std::to_string(n) + " exceeds digit width");
  const SegmentSizes sizes = segment_sizes(n);
  SegmentSpec spec;
  spec.base = std::uint32_t{1} << n;
  spec.order = n;
  spec.den = std::uint64_t{1} << n;
  spec.copies = repeated ? sizes.b_reps : 1;
  return spec;
}

}  // namespace

SegmentSizes segment_sizes(unsigned n) {
  if (n < 1) throw InputError("Knuth segment order must be at least 1");
  SegmentSizes s;
  s.n = n;
  s.a_len = checked_pow(2, n * n, "|A^(n)|");
  s.b_reps = checked_mul(n, checked_pow(2, 2 * n, "2^(2n)"), "B repetitions");
  s.b_len = checked_mul(s.b_reps, s.a_len, "|B^(n)|");
  return s;
}

SegmentStream a_sequence(unsigned n) {
  const SegmentSpec spec = spec_for(n, false);
  return SegmentStream([spec](unsigned) { return spec; }, n, n);
}

SegmentStream b_sequence(unsigned n) {
  const SegmentSpec spec = spec_for(n, true);
  return SegmentStream([spec](unsigned) { return spec; }, n, n);
}

SegmentStream k_stream() {
  return SegmentStream([](unsigned n) { return spec_for(n, true); }, 1, std::nullopt);
}

u128 prefix_length(unsigned n) {
  u128 total = 0;
  for (unsigned s = 1; s <= n; ++s) total = checked_add(total, segment_sizes(s).b_len, "K prefix");
  return total;
}

}  // namespace cudseq::knuth
