#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cudseq/cud.hpp"
#include "cudseq/debruijn.hpp"
#include "cudseq/digit_io.hpp"
#include "cudseq/knuth.hpp"
#include "cudseq/stats.hpp"
#include "json.hpp"

namespace cudseq::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::uint64_t base = 0;
  std::uint64_t order = 0;
  std::string ford_format;
  std::string gen_format;
  std::string variant;
  std::string t;
  std::optional<std::uint64_t> count;
  std::string out_path;
  std::string index;
  std::string check;
  std::string op;
  std::optional<unsigned> n;
  std::optional<unsigned> k;
  std::string ell;
  std::string box;
  unsigned samples = 200;
  std::optional<unsigned> max_n;
  std::string source;
  unsigned grid = 8;
  std::string checkpoints = "auto";
  unsigned threads = 1;
};

/// A property did not hold; the report has already been written.
struct PropertyFailure {};

Json big_to_json(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

Json u128_to_json(u128 v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return to_string(v);
}

void emit_json(std::ostream& out, const Json& report) { out << report.dump(2) << '\n'; }

Json report(std::string op, Json params, Json n, Json result, Json deviation) {
  Json r;
  r["op"] = std::move(op);
  r["params"] = std::move(params);
  r["N"] = std::move(n);
  r["result"] = std::move(result);
  r["deviation"] = std::move(deviation);
  return r;
}

template <class T>
T require(const std::optional<T>& v, const char* flag) {
  if (!v) throw InputError(std::string("missing ") + flag);
  return *v;
}

void require_flag(const std::string& v, const char* flag) {
  if (v.empty()) throw InputError(std::string("missing ") + flag);
}

// --- ford / gen / locate / term ------------------------------------------

void cmd_ford(const Options& o, std::ostream& out) {
  FordStream s(Alphabet(o.base), Order(o.order));
  if (o.ford_format == "text") {
    write_digits_text(out, s);
  } else if (o.ford_format == "binary") {
    write_digits_binary(out, s);
  } else {
    bool first = true;
    while (auto d = s.next()) {
      if (!first) out << ',';
      out << *d;
      first = false;
    }
    out << '\n';
  }
}

void cmd_gen(const Options& o, std::ostream& out) {
  const std::uint64_t count = require(o.count, "--count");
  auto write = [&](SegmentStream s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const RationalTerm term = *s.next();
      out << (o.gen_format == "csv" ? format_double(term.value()) : format_rational(term)) << '\n';
    }
  };
  if (o.variant == "knuth") {
    if (!o.t.empty()) throw InputError("--t does not apply to the knuth variant");
    write(knuth::k_stream());
  } else {
    require_flag(o.t, "--t");
    write(l_stream(GrowthFn::parse(o.t)));
  }
}

void cmd_locate(const Options& o, std::ostream& out) {
  const Locator loc = locate(parse_u128(o.index), GrowthFn::parse(o.t));
  out << "r=" << loc.r << " q=" << to_string(loc.q) << " p=" << to_string(loc.p) << '\n';
}

void cmd_term(const Options& o, std::ostream& out) {
  out << format_rational(term_at(parse_u128(o.index), GrowthFn::parse(o.t))) << '\n';
}

// --- verify ---------------------------------------------------------------

void verify_debruijn(const Options& o, std::ostream& out) {
  const Alphabet base(o.base);
  const Order order(o.order);
  const DigitSeq f = ford_sequence(base, order);
  const bool ok = is_debruijn(f, order);
  Json params{{"base", o.base}, {"order", o.order}};
  emit_json(out, report("verify.debruijn", params, f.size(), Json{{"is_debruijn", ok}}, nullptr));
  if (!ok) throw PropertyFailure{};
}

void verify_best(const Options& o, std::ostream& out) {
  const Alphabet base(o.base);
  const Order order(o.order);
  const BigInt formula = best_count(base, order);
  Json result{{"formula", big_to_json(formula)}, {"enumerated", nullptr}, {"ford_is_least", nullptr}};
  bool ok = true;
  try {
    const auto all = enumerate_debruijn(base, order);
    const bool least = !all.empty() && all.front() == ford_sequence(base, order);
    result["enumerated"] = all.size();
    result["ford_is_least"] = least;
    ok = formula == all.size() && least;
  } catch (const CapacityError&) {
    result["enumeration_skipped"] = "outside the exhaustive-search guard";
  }
  Json params{{"base", o.base}, {"order", o.order}};
  emit_json(out, report("verify.best", params, nullptr, result, nullptr));
  if (!ok) throw PropertyFailure{};
}

Json box_json(const Box& box, const CyclicBoxCount& c) {
  return Json{{"box", box.to_string()},
              {"count", c.count},
              {"expected", c.expected},
              {"scale", c.scale},
              {"epsilon", c.epsilon}};
}

void verify_lemma1(const Options& o, std::ostream& out) {
  const unsigned n = require(o.n, "--n");
  Json params{{"n", n}};
  std::vector<Box> boxes;
  std::uint64_t seed = 0;
  if (!o.box.empty()) {
    boxes.push_back(Box::parse(o.box));
    params["box"] = o.box;
  } else {
    seed = sampling_seed();
    std::mt19937_64 rng(seed);
    std::vector<unsigned> ks;
    if (o.k) {
      ks.push_back(*o.k);
    } else {
      for (unsigned k = 1; k <= std::min(n, 3u); ++k) ks.push_back(k);
    }
    for (unsigned k : ks) {
      if (k < 1 || k > n) throw InputError("--k must lie in 1..n");
      for (unsigned i = 0; i < o.samples; ++i) boxes.push_back(sample_box(rng, k, n, i % 2 == 1));
    }
    params["samples"] = o.samples;
    params["k"] = ks;
    params["seed"] = seed;
  }
  std::uint64_t violations = 0;
  double worst = 0.0;
  Json first = nullptr;
  Json single;
  for (const Box& box : boxes) {
    const CyclicBoxCount c = lemma1_cyclic_count(n, box);
    worst = std::max(worst, std::abs(c.epsilon));
    if (!c.within_bound) {
      if (violations++ == 0) first = box_json(box, c);
    }
    if (boxes.size() == 1) single = box_json(box, c);
  }
  Json result{{"boxes", boxes.size()}, {"violations", violations}, {"max_abs_epsilon", worst}};
  if (boxes.size() == 1) result["window"] = single;
  result["first_counterexample"] = first;
  emit_json(out, report("verify.lemma1", params, u128_to_json(checked_pow(n, n, "n^n")), result, worst));
  if (violations > 0) throw PropertyFailure{};
}

struct CyclicWeylCheck {
  CyclicWeyl table;
  std::optional<std::complex<double>> direct;
  bool ok = true;
};

CyclicWeylCheck check_cyclic_weyl(unsigned n, const WeylVector& ell) {
  CyclicWeylCheck c{lemma2_cyclic_weyl(n, ell), std::nullopt, true};
  const double nn = std::pow(static_cast<double>(n), n);
  if (n <= 7) c.direct = cyclic_weyl_direct(n, ell);
  if (c.table.hypothesis) c.ok = c.table.balanced && std::abs(c.table.value) < 1e-9 * nn;
  if (c.direct && std::abs(*c.direct - c.table.value) >= 1e-6 * nn) c.ok = false;
  return c;
}

Json complex_json(std::complex<double> z) { return Json{z.real(), z.imag()}; }

void verify_lemma2(const Options& o, std::ostream& out) {
  const unsigned n = require(o.n, "--n");
  const double nn = std::pow(static_cast<double>(n), n);
  if (!o.ell.empty()) {
    const WeylVector ell = WeylVector::parse(o.ell);
    const CyclicWeylCheck c = check_cyclic_weyl(n, ell);
    Json mult = Json::array();
    for (u128 m : c.table.multiplicity) mult.push_back(u128_to_json(m));
    Json result{{"g", c.table.g},
                {"hypothesis", c.table.hypothesis},
                {"balanced", c.table.balanced},
                {"multiplicity", mult},
                {"sum", complex_json(c.table.value)},
                {"abs", std::abs(c.table.value)}};
    result["direct"] = c.direct ? complex_json(*c.direct) : Json(nullptr);
    const Json params{{"n", n}, {"ell", ell.to_string()}};
    emit_json(out, report("verify.lemma2", params, u128_to_json(checked_pow(n, n, "n^n")), result,
                          std::abs(c.table.value) / nn));
    if (!c.ok) throw PropertyFailure{};
    return;
  }
  // Every ell with entries in {-3..3} \ {0} and k <= min(n, 3).
  std::uint64_t vectors = 0, covered = 0, violations = 0;
  double worst = 0.0;
  Json first = nullptr;
  for (unsigned k = 1; k <= std::min(n, 3u); ++k) {
    std::vector<std::int64_t> e(k, -3);
    for (;;) {
      const WeylVector ell(e);
      const CyclicWeylCheck c = check_cyclic_weyl(n, ell);
      ++vectors;
      if (c.table.hypothesis) {
        ++covered;
        worst = std::max(worst, std::abs(c.table.value) / nn);
      }
      if (!c.ok && violations++ == 0) first = ell.to_string();
      std::size_t i = k;
      while (i > 0 && e[i - 1] == 3) e[--i] = -3;
      if (i == 0) break;
      e[i - 1] = e[i - 1] == -1 ? 1 : e[i - 1] + 1;
    }
  }
  Json result{{"vectors", vectors}, {"hypothesis_holds", covered}, {"violations", violations},
              {"first_counterexample", first}};
  emit_json(out, report("verify.lemma2", Json{{"n", n}}, u128_to_json(checked_pow(n, n, "n^n")), result, worst));
  if (violations > 0) throw PropertyFailure{};
}

void verify_prop3(const Options& o, std::ostream& out) {
  const unsigned max_n = o.max_n.value_or(12);
  if (max_n < 1) throw InputError("--max-n must be positive");
  Json rows = Json::array();
  bool ok = true;
  for (unsigned n = 1; n <= max_n; ++n) {
    const auto [lhs, rhs] = power_sum_bound(n);
    rows.push_back(Json{{"n", n}, {"lhs", big_to_json(lhs)}, {"rhs", big_to_json(rhs)}, {"holds", lhs <= rhs}});
    ok = ok && lhs <= rhs;
  }
  emit_json(out, report("verify.prop3", Json{{"max_n", max_n}}, nullptr, Json{{"rows", rows}}, nullptr));
  if (!ok) throw PropertyFailure{};
}

void cmd_verify(const Options& o, std::ostream& out) {
  if (o.check == "debruijn") return verify_debruijn(o, out);
  if (o.check == "best") return verify_best(o, out);
  if (o.check == "lemma1") return verify_lemma1(o, out);
  if (o.check == "lemma2") return verify_lemma2(o, out);
  verify_prop3(o, out);
}

// --- stats ----------------------------------------------------------------

struct Source {
  enum class Kind { knuth, l, file } kind;
  std::optional<GrowthFn> t;
  std::vector<RationalTerm> terms;

  static Source parse(const std::string& spec) {
    if (spec == "knuth") return {Kind::knuth, std::nullopt, {}};
    if (spec.starts_with("l:")) return {Kind::l, GrowthFn::parse(spec.substr(2)), {}};
    if (spec.starts_with("file:")) {
      std::ifstream in(spec.substr(5));
      if (!in) throw InputError("cannot open " + spec.substr(5));
      return {Kind::file, std::nullopt, read_rational_text(in)};
    }
    throw InputError("source must be knuth, l:<growth> or file:<path>");
  }

  template <class Fn>
  auto visit(Fn&& fn) const {
    if (kind == Kind::knuth) {
      auto s = knuth::k_stream();
      return fn(s);
    }
    if (kind == Kind::l) {
      auto s = l_stream(*t);
      return fn(s);
    }
    SpanSource s(terms);
    return fn(s);
  }

  std::uint64_t windows(const std::optional<std::uint64_t>& count, std::size_t k) const {
    if (count) {
      if (*count == 0) throw InputError("--count must be positive");
      return *count;
    }
    if (kind != Kind::file) throw InputError("missing --count");
    if (terms.size() < k) throw_short_stream(0, 1, k);
    return terms.size() - k + 1;
  }

  /// First n + k - 1 terms, for the chunk-parallel paths.
  std::vector<RationalTerm> prefix(std::uint64_t n, std::size_t k) const {
    return visit([&](auto& s) { return take(s, static_cast<std::size_t>(n + k - 1)); });
  }
};

Json stats_params(const Options& o) {
  Json p{{"source", o.source}};
  if (o.threads > 1) p["threads"] = o.threads;
  return p;
}

void stats_boxcount(const Options& o, const Source& src, std::ostream& out) {
  require_flag(o.box, "--box");
  const Box box = Box::parse(o.box);
  const std::uint64_t n = src.windows(o.count, box.dim());
  const WindowCount c = o.threads > 1 ? box_count_parallel(src.prefix(n, box.dim()), n, box, o.threads)
                                      : src.visit([&](auto& s) { return box_count(s, n, box); });
  Json params = stats_params(o);
  params["box"] = box.to_string();
  emit_json(out, report("boxcount", params, n,
                        Json{{"nu", c.nu}, {"ratio", c.ratio()}, {"volume", box.volume()}},
                        std::abs(c.ratio() - box.volume())));
}

void stats_weyl(const Options& o, const Source& src, std::ostream& out) {
  require_flag(o.ell, "--ell");
  const WeylVector ell = WeylVector::parse(o.ell);
  const std::uint64_t n = src.windows(o.count, ell.dim());
  const std::complex<double> s =
      o.threads > 1 ? weyl_sum_parallel(src.prefix(n, ell.dim()), n, ell, o.threads)
                    : src.visit([&](auto& s) { return weyl_sum(s, n, ell); });
  const double normalized = std::abs(s) / static_cast<double>(n);
  Json params = stats_params(o);
  params["ell"] = ell.to_string();
  emit_json(out, report("weyl", params, n, Json{{"sum", complex_json(s)}, {"abs_over_n", normalized}},
                        normalized));
}

void stats_perms(const Options& o, const Source& src, std::ostream& out) {
  const unsigned k = o.k.value_or(3);
  const std::uint64_t n = src.windows(o.count, k);
  const OrderStats st = o.threads > 1 ? perm_order_stats_parallel(src.prefix(n, k), n, k, o.threads)
                                      : src.visit([&](auto& s) { return perm_order_stats(s, n, k); });
  const auto freq = st.frequencies();
  const double target = 1.0 / static_cast<double>(st.counts.size());
  Json patterns = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < st.counts.size(); ++i) {
    std::string ranks;
    for (unsigned r : permutation_pattern(k, i)) ranks += std::to_string(r);
    patterns.push_back(Json{{"ranks", ranks}, {"count", st.counts[i]}, {"frequency", freq[i]}});
    worst = std::max(worst, std::abs(freq[i] - target));
  }
  Json params = stats_params(o);
  params["k"] = k;
  Json result{{"patterns", patterns},
              {"strict_windows", st.strict_windows()},
              {"tie_count", st.tie_count},
              {"tie_fraction", st.tie_fraction()}};
  emit_json(out, report("perms", params, n, result, st.strict_windows() > 0 ? Json(worst) : Json(nullptr)));
}

void stats_discrepancy(const Options& o, const Source& src, std::ostream& out) {
  const unsigned k = o.k.value_or(2);
  const std::uint64_t n = src.windows(o.count, k);
  const GridCounter proto(k, o.grid);
  double estimate = 0.0;
  if (o.threads > 1) {
    const auto terms = src.prefix(n, k);
    estimate = reduce_windows(std::span<const RationalTerm>(terms), n, proto, o.threads).estimate();
  } else {
    estimate = src.visit([&](auto& s) { return star_discrepancy_estimate(s, n, k, o.grid); });
  }
  Json params = stats_params(o);
  params["k"] = k;
  params["grid"] = o.grid;
  emit_json(out, report("discrepancy", params, n, Json{{"estimate", estimate}}, estimate));
}

std::vector<std::uint64_t> checkpoints(const Options& o, const Source& src) {
  std::vector<std::uint64_t> cps;
  if (o.checkpoints != "auto") {
    std::istringstream list(o.checkpoints);
    std::string item;
    while (std::getline(list, item, ',')) cps.push_back(to_u64(parse_u128(item)));
    return cps;
  }
  if (src.kind == Source::Kind::file) throw InputError("--checkpoints auto needs a generator source");
  if (src.kind == Source::Kind::knuth) {
    for (unsigned s = 1; s <= o.max_n.value_or(3); ++s) cps.push_back(to_u64(knuth::prefix_length(s)));
    return cps;
  }
  unsigned max_n = o.max_n.value_or(6);
  if (!o.max_n && src.t->table_limit()) max_n = std::min(max_n, *src.t->table_limit());
  for (u128 b : d_boundaries(*src.t, max_n)) cps.push_back(to_u64(b));
  return cps;
}

void stats_converge(const Options& o, const Source& src, std::ostream& out) {
  require_flag(o.box, "--box");
  const Box box = Box::parse(o.box);
  const auto cps = checkpoints(o, src);
  const auto rows = src.visit([&](auto& s) { return convergence_series(s, cps, box); });
  out << "N,ratio,deviation\n";
  for (const auto& row : rows) {
    out << row.n << ',' << format_double(row.ratio) << ',' << format_double(row.deviation) << '\n';
  }
}

void cmd_stats(const Options& o, std::ostream& out) {
  if (o.threads == 0) throw InputError("--threads must be positive");
  const Source src = Source::parse(o.source);
  if (o.op == "boxcount") return stats_boxcount(o, src, out);
  if (o.op == "weyl") return stats_weyl(o, src, out);
  if (o.op == "perms") return stats_perms(o, src, out);
  if (o.op == "discrepancy") return stats_discrepancy(o, src, out);
  stats_converge(o, src, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Completely uniformly distributed sequences from Ford de Bruijn sequences", "cudseq"};
  app.require_subcommand(1);
  Options o;

  auto* ford = app.add_subcommand("ford", "Write the Ford de Bruijn sequence F(b,k)");
  ford->add_option("--base", o.base, "alphabet size b")->required();
  ford->add_option("--order", o.order, "word length k")->required();
  ford->add_option("--format", o.ford_format, "text | binary | inline")
      ->default_val("text")
      ->check(CLI::IsMember({"text", "binary", "inline"}));

  auto* gen = app.add_subcommand("gen", "Write the first N terms of K or L(t)");
  gen->add_option("--variant", o.variant, "knuth | l")->required()->check(CLI::IsMember({"knuth", "l"}));
  gen->add_option("--t", o.t, "growth: id | sq | table:1=1,2=4,...");
  gen->add_option("--count", o.count, "number of terms");
  gen->add_option("--format", o.gen_format, "rational | csv")
      ->default_val("rational")
      ->check(CLI::IsMember({"rational", "csv"}));

  auto* loc = app.add_subcommand("locate", "Decompose N into (r, q, p) for L(t)");
  loc->add_option("--t", o.t, "growth spec")->required();
  loc->add_option("N", o.index, "1-based index")->required();

  auto* term = app.add_subcommand("term", "Print the N-th term of L(t)");
  term->add_option("--t", o.t, "growth spec")->required();
  term->add_option("N", o.index, "1-based index")->required();

  auto* verify = app.add_subcommand("verify", "Check a combinatorial property, report JSON");
  verify->add_option("check", o.check, "debruijn | best | lemma1 | lemma2 | prop3")
      ->required()
      ->check(CLI::IsMember({"debruijn", "best", "lemma1", "lemma2", "prop3"}));
  verify->add_option("--base", o.base);
  verify->add_option("--order", o.order);
  verify->add_option("--n", o.n);
  verify->add_option("--k", o.k);
  verify->add_option("--ell", o.ell, "comma-separated integers");
  verify->add_option("--box", o.box, "u1:v1,u2:v2,...");
  verify->add_option("--samples", o.samples, "random boxes per k")->default_val(200);
  verify->add_option("--max-n", o.max_n);

  auto* stats = app.add_subcommand("stats", "Window statistics over a stream");
  stats->add_option("op", o.op, "boxcount | weyl | perms | discrepancy | converge")
      ->required()
      ->check(CLI::IsMember({"boxcount", "weyl", "perms", "discrepancy", "converge"}));
  stats->add_option("--source", o.source, "knuth | l:<growth> | file:<path>")->required();
  stats->add_option("--box", o.box, "u1:v1,u2:v2,...");
  stats->add_option("--ell", o.ell, "comma-separated integers");
  stats->add_option("--k", o.k, "window size");
  stats->add_option("--grid", o.grid, "grid resolution m")->default_val(8);
  stats->add_option("--count", o.count, "number of windows N");
  stats->add_option("--checkpoints", o.checkpoints, "auto | N1,N2,...")->default_val("auto");
  stats->add_option("--max-n", o.max_n, "last segment for auto checkpoints");
  stats->add_option("--threads", o.threads)->default_val(1);

  for (auto* sub : {ford, gen, loc, term, verify, stats}) sub->add_option("--out", o.out_path, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::ofstream file;
  std::ostream* target = &out;
  if (!o.out_path.empty()) {
    file.open(o.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << o.out_path << '\n';
      return 2;
    }
    target = &file;
  }

  try {
    if (*ford) cmd_ford(o, *target);
    if (*gen) cmd_gen(o, *target);
    if (*loc) cmd_locate(o, *target);
    if (*term) cmd_term(o, *target);
    if (*verify) cmd_verify(o, *target);
    if (*stats) cmd_stats(o, *target);
  } catch (const PropertyFailure&) {
    return 1;
  } catch (const ShortStreamError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace cudseq::cli
