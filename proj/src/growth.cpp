#include "cudseq/growth.hpp"

#include <charconv>

namespace cudseq {

GrowthFn GrowthFn::table(std::map<unsigned, u128> entries) {
  if (entries.empty()) throw ValidationError("growth table is empty");
  for (const auto& [n, value] : entries) {
    if (n < 1) throw ValidationError("growth table keys start at n = 1");
    if (value < 1) {
      throw ValidationError("growth table has t(" + std::to_string(n) + ") = 0; t must be positive");
    }
  }
  return GrowthFn(Kind::table, std::move(entries));
}

GrowthFn GrowthFn::parse(std::string_view spec) {
  if (spec == "id") return identity();
  if (spec == "sq") return square();
  constexpr std::string_view prefix = "table:";
  if (spec.substr(0, prefix.size()) != prefix) {
    throw InputError("growth spec must be 'id', 'sq' or 'table:n=t,...', got '" + std::string(spec) + "'");
  }
  std::map<unsigned, u128> entries;
  std::string_view rest = spec.substr(prefix.size());
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InputError("growth table entry '" + std::string(item) + "' lacks '='");
    const std::string_view key = item.substr(0, eq);
    unsigned n = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), n);
    if (ec != std::errc{} || ptr != key.data() + key.size()) {
      throw InputError("bad growth table index '" + std::string(key) + "'");
    }
    if (!entries.emplace(n, parse_u128(item.substr(eq + 1))).second) {
      throw InputError("growth table defines n = " + std::to_string(n) + " twice");
    }
  }
  return table(std::move(entries));
}

u128 GrowthFn::operator()(unsigned n) const {
  switch (kind_) {
    case Kind::identity:
      return n;
    case Kind::square:
      return static_cast<u128>(n) * n;
    case Kind::table:
      break;
  }
  const auto it = table_.find(n);
  if (it == table_.end()) throw InputError("growth table does not define t(" + std::to_string(n) + ")");
  return it->second;
}

std::optional<unsigned> GrowthFn::table_limit() const {
  if (kind_ != Kind::table) return std::nullopt;
  return table_.rbegin()->first;
}

std::string GrowthFn::to_string() const {
  switch (kind_) {
    case Kind::identity:
      return "id";
    case Kind::square:
      return "sq";
    case Kind::table:
      break;
  }
  std::string out = "table:";
  bool first = true;
  for (const auto& [n, value] : table_) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(n) + "=" + cudseq::to_string(value);
  }
  return out;
}

GrowthReport validate_growth(const GrowthFn& t, unsigned n_max) {
  if (n_max < 1) throw InputError("validation range must include n = 1");
  GrowthReport report;
  u128 previous = 0;
  for (unsigned n = 1; n <= n_max; ++n) {
    u128 value = 0;
    try {
      value = t(n);
    } catch (const InputError&) {
      report.valid = false;
      report.first_violation = n;
      report.reason = "t(" + std::to_string(n) + ") is undefined";
      return report;
    }
    if (value < 1) {
      report.valid = false;
      report.first_violation = n;
      report.reason = "t(" + std::to_string(n) + ") = 0";
      return report;
    }
    if (value < previous) {
      report.valid = false;
      report.first_violation = n;
      report.reason = "t decreases at n = " + std::to_string(n);
      return report;
    }
    previous = value;
    report.ratios.push_back(static_cast<double>(n) / static_cast<double>(value));
  }
  for (std::size_t i = 1; i < report.ratios.size(); ++i) {
    if (report.ratios[i] >= report.ratios[i - 1]) report.ratio_warning = true;
  }
  return report;
}

}  // namespace cudseq
