#include "cudseq/stats.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "cudseq/debruijn.hpp"

namespace cudseq {

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("bad decimal '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto at = text.find(sep);
    parts.push_back(text.substr(0, at));
    if (at == std::string_view::npos) return parts;
    text = text.substr(at + 1);
  }
}

boost::multiprecision::cpp_rational exact_value(double x) {
  using boost::multiprecision::cpp_int;
  int exponent = 0;
  const double fraction = std::frexp(x, &exponent);
  boost::multiprecision::cpp_rational r(static_cast<std::int64_t>(std::ldexp(fraction, 53)));
  exponent -= 53;
  if (exponent >= 0) return r * (cpp_int(1) << exponent);
  return r / (cpp_int(1) << -exponent);
}

std::complex<double> unit_root(std::uint64_t residue, std::uint64_t modulus) {
  const double turns = static_cast<double>(residue) / static_cast<double>(modulus);
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

std::uint64_t positive_mod(std::int64_t value, std::uint64_t modulus) {
  const auto m = static_cast<__int128>(modulus);
  __int128 r = static_cast<__int128>(value) % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

void throw_short_stream(std::uint64_t seen, std::uint64_t wanted, std::size_t k) {
  throw ShortStreamError("source ended after " + std::to_string(seen) + " windows of size " +
                         std::to_string(k) + "; " + std::to_string(wanted) + " were requested");
}

// --- Box --------------------------------------------------------------------

Box::Box(std::vector<Bounds> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw InputError("a box needs at least one dimension");
  for (const auto& [u, v] : bounds_) {
    if (!(0.0 <= u && u < v && v <= 1.0)) {
      throw InputError("box side [" + format_double(u) + "," + format_double(v) +
                       ") must satisfy 0 <= u < v <= 1");
    }
  }
}

Box Box::cube(double lo, double hi, std::size_t k) { return Box(std::vector<Bounds>(k, {lo, hi})); }

Box Box::parse(std::string_view text) {
  std::vector<Bounds> bounds;
  for (auto side : split(text, ',')) {
    const auto colon = side.find(':');
    if (colon == std::string_view::npos) throw InputError("box side '" + std::string(side) + "' lacks ':'");
    bounds.emplace_back(parse_double(side.substr(0, colon)), parse_double(side.substr(colon + 1)));
  }
  return Box(std::move(bounds));
}

std::uint64_t sampling_seed() {
  const char* env = std::getenv("CUDSEQ_SEED");
  if (env == nullptr || *env == '\0') return 0x5eed'0000'cafe'd00dULL;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("CUDSEQ_SEED must be an unsigned 64-bit integer");
  }
  return seed;
}

Box sample_box(std::mt19937_64& rng, std::size_t k, unsigned grid, bool snapped) {
  std::vector<Box::Bounds> sides;
  for (std::size_t d = 0; d < k; ++d) {
    if (snapped) {
      std::uint64_t a = rng() % (grid + 1);
      std::uint64_t b = rng() % (grid + 1);
      if (a > b) std::swap(a, b);
      if (a == b) {
        if (b < grid) ++b; else --a;
      }
      sides.emplace_back(static_cast<double>(a) / grid, static_cast<double>(b) / grid);
    } else {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u > v) std::swap(u, v);
      if (u == v) v = 1.0;
      sides.emplace_back(u, v);
    }
  }
  return Box(std::move(sides));
}

double Box::volume() const noexcept {
  double v = 1.0;
  for (const auto& [lo, hi] : bounds_) v *= hi - lo;
  return v;
}

std::string Box::to_string() const {
  std::string out;
  for (const auto& [lo, hi] : bounds_) {
    if (!out.empty()) out += ',';
    out += format_double(lo) + ":" + format_double(hi);
  }
  return out;
}

BoxMatcher::BoxMatcher(const Box& box) : bounds_(box.bounds()), cache_(box.dim()) {}

bool BoxMatcher::contains(std::span<const RationalTerm> window) {
  for (std::size_t d = 0; d < bounds_.size(); ++d) {
    const RationalTerm t = window[d];
    Cache& c = cache_[d];
    if (c.den != t.den) {
      c.den = t.den;
      c.lo = ceil_scaled(bounds_[d].first, t.den);
      c.hi = ceil_scaled(bounds_[d].second, t.den);
    }
    if (t.num < c.lo || t.num >= c.hi) return false;
  }
  return true;
}

// --- WeylVector -------------------------------------------------------------

WeylVector::WeylVector(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {
  if (std::all_of(entries_.begin(), entries_.end(), [](std::int64_t l) { return l == 0; })) {
    throw InputError("Weyl vector must have a non-zero entry");
  }
}

WeylVector WeylVector::parse(std::string_view text) {
  std::vector<std::int64_t> entries;
  for (auto item : split(text, ',')) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw InputError("bad Weyl vector entry '" + std::string(item) + "'");
    }
    entries.push_back(value);
  }
  return WeylVector(std::move(entries));
}

std::string WeylVector::to_string() const {
  std::string out;
  for (auto l : entries_) {
    if (!out.empty()) out += ',';
    out += std::to_string(l);
  }
  return out;
}

// --- OrderStats -------------------------------------------------------------

std::vector<double> OrderStats::frequencies() const {
  std::vector<double> out(counts.size(), 0.0);
  const auto strict = strict_windows();
  if (strict == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(strict);
  }
  return out;
}

std::vector<unsigned> permutation_pattern(unsigned k, std::size_t index) {
  std::vector<std::size_t> factorial(k, 1);
  for (unsigned i = 1; i < k; ++i) factorial[i] = factorial[i - 1] * i;
  std::vector<unsigned> pool(k);
  std::iota(pool.begin(), pool.end(), 0u);
  std::vector<unsigned> pattern;
  for (unsigned i = 0; i < k; ++i) {
    const std::size_t f = factorial[k - 1 - i];
    const std::size_t digit = index / f;
    index %= f;
    pattern.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return pattern;
}

// --- accumulators -----------------------------------------------------------

void PhaseHistogram::add(std::uint64_t modulus, std::uint64_t residue) {
  ++total_;
  if (modulus <= kDenseLimit) {
    auto& bins = dense_[modulus];
    if (bins.empty()) bins.assign(modulus, 0);
    ++bins[residue];
  } else {
    ++sparse_[{modulus, residue}];
  }
}

void PhaseHistogram::merge(const PhaseHistogram& other) {
  for (const auto& [modulus, bins] : other.dense_) {
    auto& mine = dense_[modulus];
    if (mine.empty()) mine.assign(modulus, 0);
    for (std::size_t r = 0; r < bins.size(); ++r) mine[r] += bins[r];
  }
  for (const auto& [key, count] : other.sparse_) sparse_[key] += count;
  total_ += other.total_;
}

std::complex<double> PhaseHistogram::evaluate() const {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [modulus, bins] : dense_) {
    for (std::size_t r = 0; r < bins.size(); ++r) {
      if (bins[r] != 0) sum += static_cast<double>(bins[r]) * unit_root(r, modulus);
    }
  }
  for (const auto& [key, count] : sparse_) {
    sum += static_cast<double>(count) * unit_root(key.second, key.first);
  }
  return sum;
}

void WeylAccumulator::add(std::span<const RationalTerm> window) {
  // Phase ell . w = m / D with D = lcm of the window's denominators.
  std::uint64_t modulus = window[0].den;
  for (std::size_t d = 1; d < window.size(); ++d) {
    const std::uint64_t den = window[d].den;
    if (den == modulus) continue;
    const u128 l = static_cast<u128>(modulus / std::gcd(modulus, den)) * den;
    modulus = to_u64(l, "Weyl phase denominator");
  }
  const auto entries = ell_.entries();
  u128 residue = 0;
  for (std::size_t d = 0; d < window.size(); ++d) {
    const std::uint64_t scaled = window[d].num * (modulus / window[d].den);  // < modulus
    residue = (residue + static_cast<u128>(positive_mod(entries[d], modulus)) * scaled) % modulus;
  }
  phases_.add(modulus, static_cast<std::uint64_t>(residue));
}

OrderCounter::OrderCounter(unsigned k) {
  if (k < 2) throw InputError("order statistics need a window of at least 2");
  if (k > 8) throw CapacityError("order statistics support windows up to 8");
  std::size_t factorial = 1;
  for (unsigned i = 2; i <= k; ++i) factorial *= i;
  stats_.k = k;
  stats_.counts.assign(factorial, 0);
}

void OrderCounter::add(std::span<const RationalTerm> window) {
  const unsigned k = stats_.k;
  ++stats_.n_windows;
  std::size_t index = 0;
  for (unsigned i = 0; i < k; ++i) {
    unsigned smaller_after = 0;
    for (unsigned j = i + 1; j < k; ++j) {
      const int c = compare_values(window[j], window[i]);
      if (c == 0) {
        ++stats_.tie_count;
        return;
      }
      if (c < 0) ++smaller_after;
    }
    index = index * (k - i) + smaller_after;
  }
  ++stats_.counts[index];
}

void OrderCounter::merge(const OrderCounter& other) {
  for (std::size_t i = 0; i < stats_.counts.size(); ++i) stats_.counts[i] += other.stats_.counts[i];
  stats_.tie_count += other.stats_.tie_count;
  stats_.n_windows += other.stats_.n_windows;
}

GridCounter::GridCounter(unsigned k, unsigned m) : k_(k), m_(m) {
  if (k < 1) throw InputError("discrepancy dimension must be at least 1");
  if (m < 2) throw InputError("discrepancy grid resolution must be at least 2");
  const u128 cells = checked_pow(m, k, "m^k");
  if (cells > (u128{1} << 22)) throw CapacityError("discrepancy grid m^k exceeds 2^22 cells");
  cells_.assign(static_cast<std::size_t>(cells), 0);
}

void GridCounter::add(std::span<const RationalTerm> window) {
  std::size_t flat = 0;
  for (std::size_t d = k_; d-- > 0;) {
    const auto cell = static_cast<std::size_t>(static_cast<u128>(window[d].num) * m_ / window[d].den);
    flat = flat * m_ + cell;
  }
  ++cells_[flat];
  ++total_;
}

void GridCounter::merge(const GridCounter& other) {
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  total_ += other.total_;
}

double GridCounter::estimate() const {
  if (total_ == 0) return 0.0;
  // Inclusive prefix sums along every axis turn cell counts into anchored-box counts.
  std::vector<std::uint64_t> prefix = cells_;
  std::size_t stride = 1;
  for (unsigned d = 0; d < k_; ++d) {
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if ((i / stride) % m_ != 0) prefix[i] += prefix[i - stride];
    }
    stride *= m_;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    double volume = 1.0;
    std::size_t rest = i;
    for (unsigned d = 0; d < k_; ++d) {
      volume *= static_cast<double>(rest % m_ + 1) / m_;
      rest /= m_;
    }
    const double fraction = static_cast<double>(prefix[i]) / static_cast<double>(total_);
    worst = std::max(worst, std::abs(fraction - volume));
  }
  return worst;
}

// --- operations -------------------------------------------------------------

WindowCount box_count_parallel(std::span<const RationalTerm> terms, std::uint64_t n, const Box& box,
                               unsigned threads) {
  return reduce_windows(terms, n, BoxCounter(box), threads).result();
}

std::complex<double> weyl_sum_parallel(std::span<const RationalTerm> terms, std::uint64_t n,
                                       const WeylVector& ell, unsigned threads) {
  return reduce_windows(terms, n, WeylAccumulator(ell), threads).sum();
}

OrderStats perm_order_stats_parallel(std::span<const RationalTerm> terms, std::uint64_t n, unsigned k,
                                     unsigned threads) {
  return reduce_windows(terms, n, OrderCounter(k), threads).result();
}

IntervalCount count_integers_in_interval(double x, double y, std::int64_t n) {
  if (n < 1 || !(0.0 <= x && x <= y && y <= static_cast<double>(n))) {
    throw InputError("need 0 <= x <= y <= n with n >= 1");
  }
  IntervalCount out;
  out.count = static_cast<std::int64_t>(std::ceil(y) - std::ceil(x));
  out.epsilon = static_cast<double>(out.count) - (y - x);
  return out;
}

CyclicBoxCount lemma1_cyclic_count(unsigned n, const Box& box) {
  const std::size_t k = box.dim();
  if (n < 1 || k > n) throw InputError("cyclic window count needs 1 <= k <= n");
  if (n > 7) throw CapacityError("cyclic window count is guarded to n <= 7");
  const DigitSeq ford = ford_sequence(Alphabet(n), Order(n));
  const std::size_t len = ford.size();
  std::vector<RationalTerm> ring;
  ring.reserve(len + k - 1);
  for (std::size_t i = 0; i < len + k - 1; ++i) ring.push_back({ford.digits[i % len], n});
  BoxMatcher matcher(box);
  CyclicBoxCount out;
  for (std::size_t i = 0; i < len; ++i) {
    if (matcher.contains(std::span(ring).subspan(i, k))) ++out.count;
  }
  const double nn = static_cast<double>(len);
  out.expected = nn * box.volume();
  out.scale = nn / n * static_cast<double>((std::uint64_t{1} << k) - 1);
  out.epsilon = (static_cast<double>(out.count) - out.expected) / out.scale;
  boost::multiprecision::cpp_rational volume(1);
  for (const auto& [u, v] : box.bounds()) volume *= exact_value(v) - exact_value(u);
  const auto gap = abs(boost::multiprecision::cpp_rational(out.count) - volume * static_cast<std::uint64_t>(len));
  const std::uint64_t scale = len / n * ((std::uint64_t{1} << k) - 1);
  out.within_bound = gap < scale;
  return out;
}

u128 congruence_solution_count(std::span<const std::int64_t> ell, std::uint64_t r, std::uint64_t n) {
  if (n < 1 || r >= n) throw InputError("need n >= 1 and 0 <= r < n");
  if (ell.empty()) throw InputError("congruence needs at least one coefficient");
  std::uint64_t g = n;
  for (auto l : ell) g = std::gcd(g, positive_mod(l, n));
  if (r % g != 0) return 0;
  return checked_mul(g, checked_pow(n, static_cast<unsigned>(ell.size() - 1), "n^(k-1)"),
                     "congruence solution count");
}

CyclicWeyl lemma2_cyclic_weyl(unsigned n, const WeylVector& ell) {
  const std::size_t k = ell.dim();
  if (n < 1 || k > n) throw InputError("cyclic Weyl sum needs 1 <= k <= n");
  CyclicWeyl out;
  out.n = n;
  const u128 windows_per_word = checked_pow(n, static_cast<unsigned>(n - k), "n^(n-k)");
  out.g = n;
  std::uint64_t min_abs = UINT64_MAX;
  for (auto l : ell.entries()) {
    out.g = std::gcd(out.g, positive_mod(l, n));
    min_abs = std::min<std::uint64_t>(min_abs, l < 0 ? 0 - static_cast<std::uint64_t>(l) : l);
  }
  out.hypothesis = n > std::max<std::uint64_t>(k, min_abs);
  out.multiplicity.resize(n);
  for (unsigned r = 0; r < n; ++r) {
    out.multiplicity[r] = checked_mul(windows_per_word, congruence_solution_count(ell.entries(), r, n),
                                      "residue multiplicity");
    out.value += static_cast<double>(out.multiplicity[r]) * unit_root(r, n);
  }
  bool equal_on_multiples = true;
  for (unsigned r = 0; r < n; ++r) {
    const u128 expected = r % out.g == 0 ? out.multiplicity[0] : 0;
    if (out.multiplicity[r] != expected) equal_on_multiples = false;
  }
  out.balanced = equal_on_multiples && n / out.g > 1;
  return out;
}

std::complex<double> cyclic_weyl_direct(unsigned n, const WeylVector& ell) {
  if (n < 1) throw InputError("cyclic Weyl sum needs n >= 1");
  if (n > 7) throw CapacityError("direct cyclic Weyl sum is guarded to n <= 7");
  const DigitSeq ford = ford_sequence(Alphabet(n), Order(n));
  const std::size_t len = ford.size();
  const auto entries = ell.entries();
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t j = 0; j < len; ++j) {
    std::int64_t dot = 0;
    for (std::size_t d = 0; d < entries.size(); ++d) {
      dot += entries[d] * static_cast<std::int64_t>(ford.digits[(j + d) % len]);
    }
    sum += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(dot) / n);
  }
  return sum;
}

}  // namespace cudseq
