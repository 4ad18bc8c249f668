#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cudseq/u128.hpp"

namespace cudseq {

/// Repetition count t(n) for the D-blocks: identity, square, or a finite table.
class GrowthFn {
 public:
  enum class Kind { identity, square, table };

  static GrowthFn identity() { return GrowthFn(Kind::identity, {}); }
  static GrowthFn square() { return GrowthFn(Kind::square, {}); }
  /// Table entries must be n >= 1 and t(n) >= 1 (ValidationError otherwise).
  static GrowthFn table(std::map<unsigned, u128> entries);

  /// Grammar: `id` | `sq` | `table:1=1,2=4,3=9,...`.
  static GrowthFn parse(std::string_view spec);

  /// t(n); InputError when a table does not define n.
  u128 operator()(unsigned n) const;

  Kind kind() const noexcept { return kind_; }
  /// Largest n a table defines; nullopt for the builtins.
  std::optional<unsigned> table_limit() const;
  std::string to_string() const;

 private:
  GrowthFn(Kind kind, std::map<unsigned, u128> entries) : kind_(kind), table_(std::move(entries)) {}

  Kind kind_;
  std::map<unsigned, u128> table_;
};

struct GrowthReport {
  bool valid = true;
  /// First n where t(n) < t(n-1), or where t is undefined.
  std::optional<unsigned> first_violation;
  std::string reason;
  /// n / t(n) for n = 1..n_max (as far as t is defined).
  std::vector<double> ratios;
  /// Set when the sampled ratios are not strictly decreasing, i.e. the range
  /// gives no evidence for n / t(n) -> 0.
  bool ratio_warning = false;
};

/// Checks monotonicity on 1..n_max and samples n / t(n). The limit condition
/// itself cannot be decided from finitely many samples and is only warned about.
GrowthReport validate_growth(const GrowthFn& t, unsigned n_max);

}  // namespace cudseq
