#pragma once

#include "cudseq/segment_stream.hpp"

namespace cudseq::knuth {

/// Block sizes at order n: |A| = 2^(n^2), B repeats A n*2^(2n) times.
struct SegmentSizes {
  unsigned n = 0;
  u128 a_len = 0;
  u128 b_reps = 0;
  u128 b_len = 0;
};

/// Throws CapacityError once any size leaves 128 bits (n >= 11).
SegmentSizes segment_sizes(unsigned n);

/// Ford sequence F^(2^n, n) scaled by 2^-n; one copy.
SegmentStream a_sequence(unsigned n);

/// n * 2^(2n) back-to-back copies of A^(n).
SegmentStream b_sequence(unsigned n);

/// B^(1) B^(2) B^(3) ... without end.
SegmentStream k_stream();

/// Number of terms in B^(1) .. B^(n).
u128 prefix_length(unsigned n);

}  // namespace cudseq::knuth
