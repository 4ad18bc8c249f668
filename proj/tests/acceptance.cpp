// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cudseq/cud.hpp"
#include "cudseq/debruijn.hpp"
#include "cudseq/knuth.hpp"
#include "cudseq/stats.hpp"

using namespace cudseq;

namespace {

// Tolerances and budgets.
constexpr double kBoxTol = 0.02;
constexpr double kWeylTol = 0.02;
constexpr double kOrderTol = 0.05;
constexpr double kCyclicWeylZero = 1e-9;
constexpr double kCyclicWeylAgree = 1e-6;
constexpr std::uint64_t kThroughputTerms = 10'000'000;
constexpr double kThroughputSeconds = 10.0;
constexpr std::uint64_t kLocateSamples = 10'000;
constexpr std::uint64_t kLocateMax = 1'000'000'000'000;
constexpr std::uint64_t kStreamCheckMax = 10'000'000;
constexpr unsigned kBoxesPerCase = 200;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) o.require(false, fmt("took %.2f s, budget %.0f s", secs, budget_s));
  if (!o.pass) ++failures;
  std::printf("%s %2d %-30s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::vector<RationalTerm> drain(SegmentStream s) {
  std::vector<RationalTerm> out;
  while (auto t = s.next()) out.push_back(*t);
  return out;
}

std::vector<std::uint64_t> nums(const std::vector<RationalTerm>& terms) {
  std::vector<std::uint64_t> out;
  for (const auto& t : terms) out.push_back(t.num);
  return out;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Cyclic k-window histogram, windows indexed base-b.
std::vector<std::uint64_t> window_histogram(const DigitSeq& seq, unsigned k) {
  const std::size_t len = seq.size();
  std::vector<std::uint64_t> hist(ipow(seq.base, k), 0);
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t idx = 0;
    for (unsigned j = 0; j < k; ++j) idx = idx * seq.base + seq.digits[(i + j) % len];
    ++hist[idx];
  }
  return hist;
}

Outcome listings() {
  Outcome o;
  auto digits = [](unsigned b, unsigned k) {
    const DigitSeq f = ford_sequence(Alphabet(b), Order(k));
    return std::vector<std::uint64_t>(f.digits.begin(), f.digits.end());
  };
  const std::vector<std::uint64_t> f23 = {0, 0, 0, 1, 0, 1, 1, 1};
  const std::vector<std::uint64_t> f42 = {0, 0, 1, 0, 2, 0, 3, 1, 1, 2, 1, 3, 2, 2, 3, 3};
  const std::vector<std::uint64_t> f33 = {0, 0, 0, 1, 0, 0, 2, 0, 1, 1, 0, 1, 2, 0,
                                          2, 1, 0, 2, 2, 1, 1, 1, 2, 1, 2, 2, 2};
  o.require(digits(2, 3) == f23, "F(2,3) listing");
  o.require(digits(4, 2) == f42, "F(4,2) listing");
  o.require(digits(3, 3) == f33, "F(3,3) listing");

  const auto a2 = drain(knuth::a_sequence(2));
  o.require(nums(a2) == f42, "A(2) numerators");
  o.require(std::all_of(a2.begin(), a2.end(), [](auto t) { return t.den == 4; }), "A(2) denominators");
  const auto c3 = drain(c_sequence(3));
  o.require(nums(c3) == f33, "C(3) numerators");
  o.require(std::all_of(c3.begin(), c3.end(), [](auto t) { return t.den == 3; }), "C(3) denominators");

  o.require(a2.size() == 16, "|A(2)| = 16");
  o.require(drain(knuth::b_sequence(2)).size() == 512 && knuth::segment_sizes(2).b_len == 512, "|B(2)| = 512");
  o.require(c3.size() == 27, "|C(3)| = 27");
  o.require(drain(d_sequence(3, GrowthFn::identity())).size() == 81 && d_length(3, GrowthFn::identity()) == 81,
            "|D(3,id)| = 81");
  if (o.pass) o.detail = "F(2,3) F(4,2) F(3,3) A(2) C(3); sizes 16 512 27 81";
  return o;
}

Outcome debruijn_property() {
  Outcome o;
  std::vector<std::pair<unsigned, unsigned>> cases;
  for (unsigned b = 2; b <= 4; ++b) {
    for (unsigned k = 1; k <= 5; ++k) cases.emplace_back(b, k);
  }
  for (unsigned k = 1; k <= 12; ++k) cases.emplace_back(2, k);
  cases.emplace_back(16, 4);
  for (auto [b, k] : cases) {
    FordStream s{Alphabet(b), Order(k)};
    DigitSeq seq{b, {}};
    while (auto d = s.next()) seq.digits.push_back(*d);
    o.require(is_debruijn(seq, Order(k)), fmt("F(%u,%u) is not de Bruijn", b, k));
  }
  if (o.pass) o.detail = fmt("%zu (b,k) pairs", cases.size());
  return o;
}

Outcome best_minimality() {
  Outcome o;
  const std::pair<unsigned, unsigned> cases[] = {{2, 2}, {2, 3}, {3, 2}};
  const unsigned expected[] = {1, 2, 24};
  std::string seen;
  for (int i = 0; i < 3; ++i) {
    const auto [b, k] = cases[i];
    const auto all = enumerate_debruijn(Alphabet(b), Order(k));
    const BigInt formula = best_count(Alphabet(b), Order(k));
    o.require(formula == expected[i], fmt("best_count(%u,%u)", b, k));
    o.require(formula == all.size(), fmt("enumeration size (%u,%u) = %zu", b, k, all.size()));
    const DigitSeq ford = ford_sequence(Alphabet(b), Order(k));
    o.require(!all.empty() && *std::min_element(all.begin(), all.end()) == ford,
              fmt("Ford is not the least of (%u,%u)", b, k));
    seen += fmt("(%u,%u)->%zu ", b, k, all.size());
  }
  if (o.pass) o.detail = seen + "Ford least in each";
  return o;
}

Outcome occurrences() {
  Outcome o;
  std::uint64_t words = 0;
  for (unsigned n = 1; n <= 5; ++n) {
    const DigitSeq f = ford_sequence(Alphabet(n), Order(n));
    for (unsigned k = 1; k <= n; ++k) {
      const auto hist = window_histogram(f, k);
      const std::uint64_t want = ipow(n, n - k);
      for (auto c : hist) o.require(c == want, fmt("F(%u,%u) k=%u count %llu", n, n, k, (unsigned long long)c));
      words += hist.size();
      // Spot-check the library's own counter on the first and last word.
      DigitSeq first{n, std::vector<Digit>(k, 0)};
      DigitSeq last{n, std::vector<Digit>(k, n - 1)};
      o.require(word_occurrences(f, first) == want && word_occurrences(f, last) == want,
                fmt("word_occurrences n=%u k=%u", n, k));
    }
  }
  if (o.pass) o.detail = fmt("%llu words, each n^(n-k) times", (unsigned long long)words);
  return o;
}

Outcome lemma1() {
  Outcome o;
  const std::uint64_t seed = sampling_seed();
  std::mt19937_64 rng(seed);
  std::uint64_t boxes = 0;
  double worst = 0.0;
  for (unsigned n = 2; n <= 6; ++n) {
    for (unsigned k = 1; k <= std::min(n, 3u); ++k) {
      for (unsigned i = 0; i < kBoxesPerCase; ++i) {
        const Box box = sample_box(rng, k, n, i % 2 == 1);
        const CyclicBoxCount c = lemma1_cyclic_count(n, box);
        o.require(c.within_bound, fmt("n=%u box %s", n, box.to_string().c_str()));
        worst = std::max(worst, std::abs(c.epsilon));
        ++boxes;
      }
    }
  }
  if (o.pass) {
    o.detail = fmt("%llu boxes, 0 violations, max |eps| ~%.4f (bound decided exactly), seed %llu",
                   (unsigned long long)boxes, worst, (unsigned long long)seed);
  }
  return o;
}

std::uint64_t positive_mod(std::int64_t v, std::uint64_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(((v % m) + m) % m);
}

Outcome lemma2() {
  Outcome o;
  std::uint64_t checked = 0;
  double worst = 0.0;
  for (unsigned n = 2; n <= 6; ++n) {
    const double nn = std::pow(static_cast<double>(n), n);
    for (unsigned k = 1; k <= std::min(n, 3u); ++k) {
      std::vector<std::int64_t> e(k, -3);
      for (;;) {
        std::int64_t min_abs = 3;
        for (auto l : e) min_abs = std::min<std::int64_t>(min_abs, std::abs(l));
        if (n > std::max<std::int64_t>(k, min_abs)) {
          const WeylVector ell(e);
          const CyclicWeyl t = lemma2_cyclic_weyl(n, ell);
          // Balance checked here from the raw table, independently of t.balanced.
          const u128 ref = t.multiplicity[0];
          bool balanced = t.hypothesis && t.g < n;
          for (std::uint64_t r = 0; r < n; ++r) {
            balanced = balanced && t.multiplicity[r] == (r % t.g == 0 ? ref : 0);
          }
          o.require(balanced && t.balanced, fmt("n=%u ell=%s not balanced", n, ell.to_string().c_str()));
          o.require(std::abs(t.value) < kCyclicWeylZero * nn, fmt("n=%u ell=%s sum", n, ell.to_string().c_str()));
          const auto direct = cyclic_weyl_direct(n, ell);
          o.require(std::abs(direct - t.value) < kCyclicWeylAgree * nn,
                    fmt("n=%u ell=%s direct sum disagrees", n, ell.to_string().c_str()));
          worst = std::max(worst, std::abs(direct) / nn);
          ++checked;
        }
        std::size_t i = k;
        while (i > 0 && e[i - 1] == 3) e[--i] = -3;
        if (i == 0) break;
        e[i - 1] = e[i - 1] == -1 ? 1 : e[i - 1] + 1;
      }
    }
  }

  std::uint64_t congruences = 0;
  for (std::uint64_t n = 1; n <= 8; ++n) {
    for (unsigned k = 1; k <= 3; ++k) {
      std::vector<std::int64_t> e(k, -8);
      for (;;) {
        std::vector<u128> brute(n, 0);
        std::vector<std::uint64_t> g(k, 0);
        for (;;) {
          std::int64_t dot = 0;
          for (unsigned d = 0; d < k; ++d) dot += e[d] * static_cast<std::int64_t>(g[d]);
          ++brute[positive_mod(dot, n)];
          unsigned i = k;
          while (i > 0 && g[i - 1] == n - 1) g[--i] = 0;
          if (i == 0) break;
          ++g[i - 1];
        }
        for (std::uint64_t r = 0; r < n; ++r) {
          o.require(congruence_solution_count(e, r, n) == brute[r], fmt("congruence n=%llu", (unsigned long long)n));
          ++congruences;
        }
        std::size_t i = k;
        while (i > 0 && e[i - 1] == 8) e[--i] = -8;
        if (i == 0) break;
        ++e[i - 1];
      }
    }
  }
  if (o.pass) {
    o.detail = fmt("%llu vectors balanced, max |direct|/n^n %.1e; %llu congruence counts exact",
                   (unsigned long long)checked, worst, (unsigned long long)congruences);
  }
  return o;
}

Outcome locate_roundtrip() {
  Outcome o;
  std::mt19937_64 rng(sampling_seed());
  std::uint64_t stream_checked = 0;
  for (const GrowthFn& t : {GrowthFn::identity(), GrowthFn::square()}) {
    // Log-uniform draws, so small N (checked against the stream) are common.
    std::vector<std::uint64_t> ns;
    for (std::uint64_t i = 0; i < kLocateSamples / 2; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      ns.push_back(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::exp(u * std::log(1e12))), 1,
                                             kLocateMax));
    }
    std::sort(ns.begin(), ns.end());
    auto stream = l_stream(t);
    std::uint64_t at = 0;
    for (std::uint64_t n : ns) {
      const Locator loc = locate(n, t);
      const u128 block = checked_pow(loc.r, loc.r);
      o.require(loc.q < t(loc.r) && loc.p >= 1 && loc.p <= block, fmt("bounds at N=%llu", (unsigned long long)n));
      u128 before = 0;
      for (unsigned s = 1; s < loc.r; ++s) before += t(s) * checked_pow(s, s);
      o.require(before + loc.q * block + loc.p == n, fmt("identity at N=%llu", (unsigned long long)n));
      if (n <= kStreamCheckMax) {
        while (at < n) {
          stream.next();
          ++at;
        }
        o.require(locator_of(*stream.position()) == loc, fmt("stream position at N=%llu", (unsigned long long)n));
        ++stream_checked;
      }
    }
  }
  if (o.pass) {
    o.detail = fmt("%llu N in [1,1e12], %llu matched against the stream", (unsigned long long)kLocateSamples,
                   (unsigned long long)stream_checked);
  }
  return o;
}

struct Prefix {
  std::vector<RationalTerm> terms;
  std::vector<std::uint64_t> ends;  // D(1)..D(6) boundaries
};

const Prefix& sq_prefix() {
  static const Prefix p = [] {
    Prefix out;
    for (u128 b : d_boundaries(GrowthFn::square(), 6)) out.ends.push_back(to_u64(b));
    auto s = l_stream(GrowthFn::square());
    out.terms = take(s, out.ends.back());
    return out;
  }();
  return p;
}

Outcome convergence() {
  Outcome o;
  const Prefix& p = sq_prefix();
  o.require(p.terms.size() == 1762097, "prefix length");
  std::string detail = fmt("N=%zu:", p.terms.size());
  for (std::size_t k = 1; k <= 3; ++k) {
    const Box box = Box::cube(0.0, 0.5, k);
    SpanSource src(p.terms);
    const WindowCount c = box_count(src, p.terms.size() - k + 1, box);
    const double dev = std::abs(c.ratio() - box.volume());
    o.require(dev <= kBoxTol, fmt("k=%zu deviation %.5f", k, dev));
    detail += fmt(" k=%zu dev %.5f", k, dev);
  }
  if (o.pass) o.detail = detail;
  return o;
}

Outcome weyl() {
  Outcome o;
  const Prefix& p = sq_prefix();
  std::string detail;
  for (const auto& e : {std::vector<std::int64_t>{1}, {1, 1}, {2, -1}}) {
    const WeylVector ell(e);
    SpanSource src(p.terms);
    const std::uint64_t n = p.terms.size() - e.size() + 1;
    const double norm = std::abs(weyl_sum(src, n, ell)) / static_cast<double>(n);
    o.require(norm <= kWeylTol, fmt("ell=(%s) |S/N| %.5f", ell.to_string().c_str(), norm));
    detail += fmt("(%s) %.2e  ", ell.to_string().c_str(), norm);
  }
  if (o.pass) o.detail = "|S/N|: " + detail;
  return o;
}

Outcome order_stats() {
  Outcome o;
  const Prefix& p = sq_prefix();
  std::vector<double> ties;
  std::string detail;
  for (std::size_t seg = 3; seg < 6; ++seg) {  // ends of D(4), D(5), D(6)
    SpanSource src(p.terms);
    const OrderStats st = perm_order_stats(src, p.ends[seg] - 2, 3);
    ties.push_back(st.tie_fraction());
    detail += fmt("tie@D(%zu) %.4f ", seg + 1, st.tie_fraction());
    if (seg == 5) {
      const auto freq = st.frequencies();
      double worst = 0.0;
      for (double f : freq) worst = std::max(worst, std::abs(f - 1.0 / 6));
      o.require(worst <= kOrderTol, fmt("max |freq - 1/6| %.5f", worst));
      detail += fmt("max |freq-1/6| %.2e", worst);
    }
  }
  o.require(ties[0] > ties[1] && ties[1] > ties[2], "tie fraction not decreasing from D(4) to D(6)");
  if (o.pass) o.detail = detail;
  return o;
}

Outcome prop3() {
  Outcome o;
  for (unsigned n = 1; n <= 12; ++n) {
    const auto [lhs, rhs] = power_sum_bound(n);
    o.require(lhs <= rhs, fmt("n=%u", n));
  }
  if (o.pass) o.detail = "n = 1..12 exact";
  return o;
}

Outcome throughput() {
  Outcome o;
  using clock = std::chrono::steady_clock;

  auto t0 = clock::now();
  FordStream ford(Alphabet(2), Order(24));
  std::uint64_t digits = 0, checksum = 0;
  while (digits < kThroughputTerms) {
    checksum += *ford.next();
    ++digits;
  }
  const double ford_s = std::chrono::duration<double>(clock::now() - t0).count();

  t0 = clock::now();
  auto l = l_stream(GrowthFn::square());
  std::uint64_t terms = 0;
  while (terms < kThroughputTerms) {
    checksum += l.next()->num;
    ++terms;
  }
  const double l_s = std::chrono::duration<double>(clock::now() - t0).count();
  o.require(ford_s <= kThroughputSeconds, fmt("Ford digits took %.2f s", ford_s));
  o.require(l_s <= kThroughputSeconds, fmt("L terms took %.2f s", l_s));

  const Prefix& p = sq_prefix();
  const std::span<const RationalTerm> all(p.terms);
  for (unsigned threads : {2u, 4u, 7u}) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const std::uint64_t n = all.size() - k + 1;
      const Box box = Box::cube(0.0, 0.5, k);
      SpanSource a(all);
      o.require(box_count_parallel(all, n, box, threads) == box_count(a, n, box), "parallel box count");
      const WeylVector ell(std::vector<std::int64_t>(k, 1));
      SpanSource b(all);
      const auto seq = weyl_sum(b, n, ell);
      const auto par = weyl_sum_parallel(all, n, ell, threads);
      o.require(seq.real() == par.real() && seq.imag() == par.imag(), "parallel Weyl sum");
    }
    SpanSource c(all);
    o.require(perm_order_stats_parallel(all, all.size() - 2, 3, threads) == perm_order_stats(c, all.size() - 2, 3),
              "parallel order stats");
  }
  if (o.pass) {
    o.detail = fmt("1e7 Ford digits %.2f s, 1e7 L terms %.2f s (%.1f M/s); parallel == sequential",
                   ford_s, l_s, 10.0 / l_s);
  }
  if (checksum == 0) o.require(false, "empty checksum");
  return o;
}

}  // namespace

int main() {
  criterion(1, "listings and segment sizes", 1, listings);
  criterion(2, "de Bruijn property", 30, debruijn_property);
  criterion(3, "BEST count and minimality", 60, best_minimality);
  criterion(4, "occurrence counts", 60, occurrences);
  criterion(5, "cyclic box count bound", 120, lemma1);
  criterion(6, "cyclic Weyl sums vanish", 120, lemma2);
  criterion(7, "locate round trip", 60, locate_roundtrip);
  criterion(8, "box convergence, L(sq)", 60, convergence);
  criterion(9, "Weyl sums, L(sq)", 60, weyl);
  criterion(10, "order statistics, L(sq)", 60, order_stats);
  criterion(11, "power-sum inequality", 1, prop3);
  criterion(12, "throughput and parallel stats", 60, throughput);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
