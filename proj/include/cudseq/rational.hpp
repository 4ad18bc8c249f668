#pragma once

#include <concepts>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cudseq {

/// One sequence term num/den in [0,1), kept unreduced so that 0/4 and 0/2
/// remain distinguishable by their segment.
struct RationalTerm {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  /// Builds a term, throwing InputError unless 0 <= num < den.
  static RationalTerm make(std::uint64_t num, std::uint64_t den);

  /// Nearest binary64 value.
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  bool operator==(const RationalTerm&) const = default;
};

/// Exact value comparison (cross-multiplied), -1/0/+1.
int compare_values(RationalTerm a, RationalTerm b) noexcept;

/// ceil(bound * den) computed exactly from the binary64 bound, for bound in [0,1].
/// A term num/den satisfies u <= num/den  iff  num >= ceil_scaled(u, den)
/// and num/den < v  iff  num < ceil_scaled(v, den).
std::uint64_t ceil_scaled(double bound, std::uint64_t den);

std::string format_rational(RationalTerm term);
/// Inverse of format_rational; InputError unless the text is `num/den` with num < den.
RationalTerm parse_rational(std::string_view text);
/// One `num/den` per line; blank lines and `#` lines are skipped.
std::vector<RationalTerm> read_rational_text(std::istream& in);
std::string format_double(double value);

/// Anything that yields terms one at a time until exhausted.
template <class S>
concept TermSource = requires(S& s) {
  { s.next() } -> std::same_as<std::optional<RationalTerm>>;
};

/// Non-owning source over a materialized prefix.
class SpanSource {
 public:
  explicit SpanSource(std::span<const RationalTerm> terms) : terms_(terms) {}
  std::optional<RationalTerm> next() {
    if (pos_ == terms_.size()) return std::nullopt;
    return terms_[pos_++];
  }

 private:
  std::span<const RationalTerm> terms_;
  std::size_t pos_ = 0;
};

/// Owning source, e.g. terms read back from a file.
class VectorSource {
 public:
  explicit VectorSource(std::vector<RationalTerm> terms) : terms_(std::move(terms)) {}
  std::optional<RationalTerm> next() {
    if (pos_ == terms_.size()) return std::nullopt;
    return terms_[pos_++];
  }
  const std::vector<RationalTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<RationalTerm> terms_;
  std::size_t pos_ = 0;
};

/// Pulls up to `count` terms; fewer if the source ends first.
template <TermSource S>
std::vector<RationalTerm> take(S& source, std::size_t count) {
  std::vector<RationalTerm> out;
  out.reserve(count);
  while (out.size() < count) {
    auto t = source.next();
    if (!t) break;
    out.push_back(*t);
  }
  return out;
}

}  // namespace cudseq
