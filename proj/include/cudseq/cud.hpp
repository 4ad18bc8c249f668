#pragma once

#include <utility>
#include <vector>

#include "cudseq/growth.hpp"
#include "cudseq/segment_stream.hpp"

namespace cudseq {

/// Decomposition of a prefix length N of L^(t):
///   N = sum_{s<r} t(s) s^s + q r^r + p,   0 <= q < t(r),  1 <= p <= r^r.
struct Locator {
  unsigned r = 1;
  u128 q = 0;
  u128 p = 1;

  bool operator==(const Locator&) const = default;
};

/// F^(n,n) / n, length n^n.
SegmentStream c_sequence(unsigned n);

/// t(n) back-to-back copies of C^(n).
SegmentStream d_sequence(unsigned n, const GrowthFn& t);

/// D^(1,t) D^(2,t) ... without end. Its position() after N terms reads
/// (r, q, p) directly: see locator_of.
SegmentStream l_stream(const GrowthFn& t);

Locator locator_of(const StreamPosition& position);

/// Unique (r, q, p) for 1-based index N. CapacityError on overflow.
Locator locate(u128 n, const GrowthFn& t);

/// Rebuilds N from a locator; the inverse of locate.
u128 locator_index(const Locator& loc, const GrowthFn& t);

/// The N-th (1-based) term of L^(t): locate, then stream p terms into C^(r).
RationalTerm term_at(u128 n, const GrowthFn& t);

/// |D^(n,t)| = t(n) n^n.
u128 d_length(unsigned n, const GrowthFn& t);

/// Cumulative lengths |D^(1)| + ... + |D^(s)| for s = 1..n_max.
std::vector<u128> d_boundaries(const GrowthFn& t, unsigned n_max);

/// Exact pair (sum_{i=1}^n i^(i-1), 2 n^(n-1)).
std::pair<BigInt, BigInt> power_sum_bound(unsigned n);

}  // namespace cudseq
