#include "cudseq/cud.hpp"

#include <string>

namespace cudseq {

namespace {

SegmentSpec c_spec(unsigned n) {
  if (n < 1) throw InputError("C-sequence order must be at least 1");
  SegmentSpec spec;
  spec.base = n;
  spec.order = n;
  spec.den = n;
  spec.copies = 1;
  return spec;
}

u128 power_of_self(unsigned n) { return checked_pow(n, n, "n^n"); }

}  // namespace

SegmentStream c_sequence(unsigned n) {
  const SegmentSpec spec = c_spec(n);
  spec.length();
  return SegmentStream([spec](unsigned) { return spec; }, n, n);
}

SegmentStream d_sequence(unsigned n, const GrowthFn& t) {
  SegmentSpec spec = c_spec(n);
  spec.copies = t(n);
  spec.length();
  return SegmentStream([spec](unsigned) { return spec; }, n, n);
}

SegmentStream l_stream(const GrowthFn& t) {
  return SegmentStream(
      [t](unsigned n) {
        SegmentSpec spec = c_spec(n);
        spec.copies = t(n);
        return spec;
      },
      1, std::nullopt);
}

Locator locator_of(const StreamPosition& position) {
  return Locator{position.segment, position.copy, position.offset};
}

u128 d_length(unsigned n, const GrowthFn& t) {
  return checked_mul(t(n), power_of_self(n), "|D^(n,t)|");
}

Locator locate(u128 n, const GrowthFn& t) {
  if (n < 1) throw InputError("L indices are 1-based; N must be positive");
  u128 before = 0;  // terms in D^(1) .. D^(r-1)
  for (unsigned r = 1;; ++r) {
    if (r == 0) throw CapacityError("locate: order overflow");
    const u128 block = power_of_self(r);
    const u128 segment = checked_mul(t(r), block, "|D^(r,t)|");
    if (n - before <= segment) {
      const u128 rest = n - before;  // 1..segment
      const u128 q = (rest - 1) / block;
      return Locator{r, q, rest - q * block};
    }
    before = checked_add(before, segment, "L prefix length");
  }
}

u128 locator_index(const Locator& loc, const GrowthFn& t) {
  u128 total = 0;
  for (unsigned s = 1; s < loc.r; ++s) total = checked_add(total, d_length(s, t), "L prefix length");
  total = checked_add(total, checked_mul(loc.q, power_of_self(loc.r)), "L prefix length");
  return checked_add(total, loc.p, "L prefix length");
}

RationalTerm term_at(u128 n, const GrowthFn& t) {
  const Locator loc = locate(n, t);
  FordStream ford(Alphabet(loc.r), Order(loc.r));
  Digit digit = 0;
  for (u128 i = 0; i < loc.p; ++i) digit = *ford.next();
  return RationalTerm{digit, loc.r};
}

std::vector<u128> d_boundaries(const GrowthFn& t, unsigned n_max) {
  std::vector<u128> out;
  u128 total = 0;
  for (unsigned s = 1; s <= n_max; ++s) {
    total = checked_add(total, d_length(s, t), "L prefix length");
    out.push_back(total);
  }
  return out;
}

std::pair<BigInt, BigInt> power_sum_bound(unsigned n) {
  if (n < 1) throw InputError("power_sum_bound needs n >= 1");
  BigInt sum = 0;
  for (unsigned i = 1; i <= n; ++i) sum += boost::multiprecision::pow(BigInt(i), i - 1);
  return {sum, 2 * boost::multiprecision::pow(BigInt(n), n - 1)};
}

}  // namespace cudseq
