#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "cudseq/error.hpp"
#include "cudseq/rational.hpp"
#include "cudseq/u128.hpp"

namespace cudseq {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Half-open box [u_1,v_1) x ... x [u_k,v_k) inside [0,1)^k.
class Box {
 public:
  using Bounds = std::pair<double, double>;

  /// Requires 0 <= u_d < v_d <= 1 in every dimension and k >= 1.
  explicit Box(std::vector<Bounds> bounds);
  /// [lo,hi)^k
  static Box cube(double lo, double hi, std::size_t k);
  /// Grammar `u1:v1,u2:v2,...`; the dimension is the number of pairs.
  static Box parse(std::string_view text);

  std::size_t dim() const noexcept { return bounds_.size(); }
  const std::vector<Bounds>& bounds() const noexcept { return bounds_; }
  double volume() const noexcept;
  std::string to_string() const;

 private:
  std::vector<Bounds> bounds_;
};

/// Seed for box sampling: CUDSEQ_SEED when set, else a fixed default.
std::uint64_t sampling_seed();

/// Random k-box with uniform sides, or with sides on multiples of 1/grid
/// (where the digits of C^(grid) sit) when `snapped`.
Box sample_box(std::mt19937_64& rng, std::size_t k, unsigned grid, bool snapped);

/// Exact window-in-box test. Each binary64 bound is an exact dyadic rational,
/// so comparing num/den against it reduces to an integer threshold per
/// denominator; thresholds are cached per dimension for the last denominator.
class BoxMatcher {
 public:
  explicit BoxMatcher(const Box& box);
  bool contains(std::span<const RationalTerm> window);
  std::size_t dim() const noexcept { return bounds_.size(); }

 private:
  struct Cache {
    std::uint64_t den = 0;
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
  };
  std::vector<Box::Bounds> bounds_;
  std::vector<Cache> cache_;
};

/// Non-zero integer vector for Weyl sums.
class WeylVector {
 public:
  explicit WeylVector(std::vector<std::int64_t> entries);
  /// Comma-separated integers, e.g. `2,-1`.
  static WeylVector parse(std::string_view text);

  std::size_t dim() const noexcept { return entries_.size(); }
  std::span<const std::int64_t> entries() const noexcept { return entries_; }
  std::string to_string() const;

 private:
  std::vector<std::int64_t> entries_;
};

struct WindowCount {
  std::uint64_t nu = 0;
  std::uint64_t n_windows = 0;

  double ratio() const noexcept {
    return n_windows == 0 ? 0.0 : static_cast<double>(nu) / static_cast<double>(n_windows);
  }
  bool operator==(const WindowCount&) const = default;
};

/// Relative-order census of k-windows. counts[i] is the number of windows
/// whose rank pattern has Lehmer index i (index 0 = strictly ascending);
/// windows with any two equal entries only bump tie_count.
struct OrderStats {
  unsigned k = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t tie_count = 0;
  std::uint64_t n_windows = 0;

  std::uint64_t strict_windows() const noexcept { return n_windows - tie_count; }
  /// counts[i] / strict_windows(); uniform target 1/k! each.
  std::vector<double> frequencies() const;
  double tie_fraction() const noexcept {
    return n_windows == 0 ? 0.0 : static_cast<double>(tie_count) / static_cast<double>(n_windows);
  }
  bool operator==(const OrderStats&) const = default;
};

/// Rank pattern for a Lehmer index: pattern[j] is the rank of window entry j.
std::vector<unsigned> permutation_pattern(unsigned k, std::size_t index);

// ---------------------------------------------------------------------------
// Window accumulators. Each supports add(window) and an associative merge.
// ---------------------------------------------------------------------------

class BoxCounter {
 public:
  explicit BoxCounter(const Box& box) : matcher_(box) {}
  std::size_t window_size() const noexcept { return matcher_.dim(); }
  void add(std::span<const RationalTerm> window) {
    ++result_.n_windows;
    if (matcher_.contains(window)) ++result_.nu;
  }
  void merge(const BoxCounter& other) {
    result_.nu += other.result_.nu;
    result_.n_windows += other.result_.n_windows;
  }
  const WindowCount& result() const noexcept { return result_; }

 private:
  BoxMatcher matcher_;
  WindowCount result_;
};

/// Counts of exp(2 pi i r / m) terms keyed by (m, r). Summation is deferred
/// to evaluate(), so partial histograms merge exactly and the final value is
/// independent of how the windows were partitioned.
class PhaseHistogram {
 public:
  void add(std::uint64_t modulus, std::uint64_t residue);
  void merge(const PhaseHistogram& other);
  std::complex<double> evaluate() const;
  std::uint64_t total() const noexcept { return total_; }

 private:
  static constexpr std::uint64_t kDenseLimit = 1u << 16;
  std::map<std::uint64_t, std::vector<std::uint64_t>> dense_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> sparse_;
  std::uint64_t total_ = 0;
};

class WeylAccumulator {
 public:
  explicit WeylAccumulator(WeylVector ell) : ell_(std::move(ell)) {}
  std::size_t window_size() const noexcept { return ell_.dim(); }
  void add(std::span<const RationalTerm> window);
  void merge(const WeylAccumulator& other) { phases_.merge(other.phases_); }
  std::complex<double> sum() const { return phases_.evaluate(); }
  std::uint64_t n_windows() const noexcept { return phases_.total(); }
  const PhaseHistogram& phases() const noexcept { return phases_; }

 private:
  WeylVector ell_;
  PhaseHistogram phases_;
};

class OrderCounter {
 public:
  /// 2 <= k <= 8.
  explicit OrderCounter(unsigned k);
  std::size_t window_size() const noexcept { return stats_.k; }
  void add(std::span<const RationalTerm> window);
  void merge(const OrderCounter& other);
  const OrderStats& result() const noexcept { return stats_; }

 private:
  OrderStats stats_;
};

/// m^k histogram of windows by grid cell, for the anchored-box discrepancy.
class GridCounter {
 public:
  GridCounter(unsigned k, unsigned m);
  std::size_t window_size() const noexcept { return k_; }
  void add(std::span<const RationalTerm> window);
  void merge(const GridCounter& other);
  /// max over anchored grid boxes of |count/N - volume|.
  double estimate() const;

 private:
  unsigned k_;
  unsigned m_;
  std::vector<std::uint64_t> cells_;
  std::uint64_t total_ = 0;
};

// ---------------------------------------------------------------------------
// Window drivers
// ---------------------------------------------------------------------------

/// Hands out overlapping k-windows of a source as contiguous spans.
template <TermSource S>
class WindowReader {
 public:
  WindowReader(S& source, std::size_t k, std::size_t chunk = 1u << 14)
      : source_(source), k_(k), chunk_(std::max(chunk, k)) {
    if (k_ == 0) throw InputError("window size must be positive");
  }

  /// Next window, or an empty span when the source ran out.
  std::span<const RationalTerm> next() {
    if (start_ + k_ > buf_.size()) {
      refill();
      if (start_ + k_ > buf_.size()) return {};
    }
    return {buf_.data() + start_++, k_};
  }

 private:
  void refill() {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(start_));
    start_ = 0;
    while (buf_.size() < chunk_ + k_) {
      auto t = source_.next();
      if (!t) break;
      buf_.push_back(*t);
    }
  }

  S& source_;
  std::size_t k_;
  std::size_t chunk_;
  std::vector<RationalTerm> buf_;
  std::size_t start_ = 0;
};

[[noreturn]] void throw_short_stream(std::uint64_t seen, std::uint64_t wanted, std::size_t k);

/// Feeds the first n_windows windows of the source to acc.
template <TermSource S, class Acc>
void scan_windows(S& source, std::uint64_t n_windows, Acc& acc) {
  const std::size_t k = acc.window_size();
  WindowReader<S> reader(source, k);
  for (std::uint64_t i = 0; i < n_windows; ++i) {
    auto w = reader.next();
    if (w.empty()) throw_short_stream(i, n_windows, k);
    acc.add(w);
  }
}

/// Splits windows [0, n_windows) into contiguous chunks, each reading its
/// own slice with k-1 terms of overlap, and merges the partial accumulators
/// in chunk order.
template <class Acc>
Acc reduce_windows(std::span<const RationalTerm> terms, std::uint64_t n_windows, const Acc& prototype,
                   unsigned threads) {
  const std::size_t k = prototype.window_size();
  const std::uint64_t available = terms.size() + 1 >= k ? terms.size() + 1 - k : 0;
  if (available < n_windows) throw_short_stream(available, n_windows, k);
  const std::uint64_t parts = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_windows));
  std::vector<Acc> partial(parts, prototype);
  auto work = [&](std::uint64_t part) {
    const std::uint64_t lo = n_windows * part / parts;
    const std::uint64_t hi = n_windows * (part + 1) / parts;
    for (std::uint64_t i = lo; i < hi; ++i) partial[part].add(terms.subspan(i, k));
  };
  if (parts == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(parts);
    for (std::uint64_t part = 0; part < parts; ++part) pool.emplace_back(work, part);
  }
  Acc result = std::move(partial[0]);
  for (std::uint64_t part = 1; part < parts; ++part) result.merge(partial[part]);
  return result;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// nu = #{ i in [1,N] : (x_i, ..., x_{i+k-1}) in box }, k = box.dim().
template <TermSource S>
WindowCount box_count(S& source, std::uint64_t n, const Box& box) {
  BoxCounter counter(box);
  scan_windows(source, n, counter);
  return counter.result();
}

WindowCount box_count_parallel(std::span<const RationalTerm> terms, std::uint64_t n, const Box& box,
                               unsigned threads);

struct IntervalCount {
  std::int64_t count = 0;
  double epsilon = 0.0;
};

/// Integers of {0..n-1} inside [x, y), with epsilon = count - (y - x) in (-1, 1).
IntervalCount count_integers_in_interval(double x, double y, std::int64_t n);

struct CyclicBoxCount {
  std::uint64_t count = 0;
  double expected = 0.0;  // n^n |I|
  double scale = 0.0;     // n^(n-1) (2^k - 1)
  double epsilon = 0.0;   // (count - expected) / scale
  /// |count - n^n |I|| < scale, decided on the exact rational value of the
  /// box volume (epsilon alone can round onto the boundary).
  bool within_bound = false;
};

/// Exact number of the n^n cyclic k-windows of C^(n) inside the box.
/// Requires k <= n and n <= 7.
CyclicBoxCount lemma1_cyclic_count(unsigned n, const Box& box);

/// Sum over the first N windows of exp(2 pi i ell . w), not normalized.
template <TermSource S>
std::complex<double> weyl_sum(S& source, std::uint64_t n, const WeylVector& ell) {
  WeylAccumulator acc(ell);
  scan_windows(source, n, acc);
  return acc.sum();
}

std::complex<double> weyl_sum_parallel(std::span<const RationalTerm> terms, std::uint64_t n,
                                       const WeylVector& ell, unsigned threads);

/// #{ gamma in {0..n-1}^k : ell . gamma = r (mod n) }, computed as
/// g n^(k-1) when g = gcd(ell, n) divides r and 0 otherwise.
u128 congruence_solution_count(std::span<const std::int64_t> ell, std::uint64_t r, std::uint64_t n);

struct CyclicWeyl {
  unsigned n = 0;
  std::uint64_t g = 0;
  /// multiplicity[r]: cyclic windows of C^(n) whose phase ell.c is r/n mod 1.
  std::vector<u128> multiplicity;
  /// n > max(k, min |l_i|)
  bool hypothesis = false;
  /// Multiplicities are equal on the multiples of g, zero elsewhere, and
  /// n/g > 1, so the weighted roots of unity cancel exactly.
  bool balanced = false;
  std::complex<double> value;
};

/// Cyclic Weyl sum of C^(n) through the residue-multiplicity table.
CyclicWeyl lemma2_cyclic_weyl(unsigned n, const WeylVector& ell);

/// The same sum by direct summation over the n^n cyclic windows (n <= 7).
std::complex<double> cyclic_weyl_direct(unsigned n, const WeylVector& ell);

struct ConvergenceRow {
  std::uint64_t n = 0;
  double ratio = 0.0;
  double deviation = 0.0;
};

/// One pass; at each checkpoint N records nu_N / N and |nu_N / N - |I||.
template <TermSource S>
std::vector<ConvergenceRow> convergence_series(S& source, std::span<const std::uint64_t> checkpoints,
                                               const Box& box) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw InputError("checkpoints must be positive and strictly ascending");
    }
  }
  std::vector<ConvergenceRow> rows;
  if (checkpoints.empty()) return rows;
  BoxCounter counter(box);
  WindowReader<S> reader(source, box.dim());
  const double volume = box.volume();
  std::size_t next = 0;
  for (std::uint64_t i = 1; i <= checkpoints.back(); ++i) {
    auto w = reader.next();
    if (w.empty()) throw_short_stream(i - 1, checkpoints.back(), box.dim());
    counter.add(w);
    if (i == checkpoints[next]) {
      const double ratio = counter.result().ratio();
      rows.push_back({i, ratio, std::abs(ratio - volume)});
      ++next;
    }
  }
  return rows;
}

template <TermSource S>
OrderStats perm_order_stats(S& source, std::uint64_t n, unsigned k) {
  OrderCounter counter(k);
  scan_windows(source, n, counter);
  return counter.result();
}

OrderStats perm_order_stats_parallel(std::span<const RationalTerm> terms, std::uint64_t n, unsigned k,
                                     unsigned threads);

/// Lower bound on the star discrepancy of the first N k-windows: the largest
/// |nu/N - volume| over boxes [0, j_1/m) x ... x [0, j_k/m), 1 <= j_d <= m.
/// Requires m >= 2 and m^k <= 2^22.
template <TermSource S>
double star_discrepancy_estimate(S& source, std::uint64_t n, unsigned k, unsigned m) {
  GridCounter grid(k, m);
  scan_windows(source, n, grid);
  return grid.estimate();
}

}  // namespace cudseq
