#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sololab/errors.hpp"
#include "sololab/gap.hpp"
#include "sololab/json_io.hpp"
#include "sololab/kc_allocator.hpp"
#include "sololab/machine_enum.hpp"
#include "sololab/mixture.hpp"
#include "sololab/semimeasure.hpp"
#include "sololab/tm_text.hpp"
#include "sololab/weights.hpp"

namespace sololab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Format { Json, Csv };

/// Everything one invocation needs. Numeric fields are unsigned, so the
/// non-negativity invariant holds by type.
struct RunConfig {
  std::string command;     ///< parse, enum, lambda, mix, kc, gap
  std::string subcommand;  ///< e.g. show, eval, split-check, request
  std::vector<std::string> args;
  std::string spec_path;
  std::string index;  ///< decimal machine index
  bool universal = false;
  std::string x;  ///< single target string for `lambda --x`
  bool has_x = false;
  std::size_t depth = 3;
  Budget budget{9, 64};
  std::uint64_t n_machines = 0;  ///< 0: every i with |I(i)| <= L
  std::string weights_path;
  std::string base = "default";
  std::vector<std::string> js;
  Format format = Format::Json;
  std::string c = "1/2^4";
};

/// Input problem that maps to exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MachineSpec parse_machine_file(const std::string& path) { return parse_machine_text(read_file(path)); }

inline MachineIndex parse_index(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError("machine index must be a non-negative decimal integer, got '" + text + "'");
  }
  return MachineIndex(text);
}

inline WeightScheme load_scheme(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw UsageError("weights file '" + path + "': " + e.what());
  }
  return scheme_from_json(j);
}

inline std::uint64_t machines_for(const RunConfig& cfg) {
  return cfg.n_machines ? cfg.n_machines : indices_within_length(cfg.budget.max_len);
}

/// The scheme named by --weights, else the default scheme over N machines.
inline WeightScheme scheme_for(const RunConfig& cfg) {
  if (!cfg.weights_path.empty()) return load_scheme(cfg.weights_path);
  const std::uint64_t n = machines_for(cfg);
  if (n == 0) throw UsageError("no machine codeword fits in L; raise --max-len or pass -N");
  return default_scheme(n);
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

inline void emit_table(std::ostream& out, const ApproxTable& t, Format f) {
  if (f == Format::Csv) {
    out << to_csv(t);
  } else {
    emit(out, to_json(t));
  }
}

namespace detail {

inline int cmd_parse(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const MachineSpec spec = parse_machine_file(cfg.args.at(0));
  emit(out, Json{{"num_states", spec.num_states()}, {"index", encode_machine(spec).str()}, {"text", to_text(spec)}});
  log << "parsed " << spec.num_states() << "-state machine\n";
  return kExitOk;
}

inline int cmd_enum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string& what = cfg.subcommand;
  if (what == "show") {
    const MachineIndex i = parse_index(cfg.args.at(0));
    out << to_text(decode_machine(i));
  } else if (what == "encode") {
    out << encode_machine(parse_machine_file(cfg.args.at(0))).str() << '\n';
  } else if (what == "code") {
    out << code_I(parse_index(cfg.args.at(0))).str() << '\n';
  } else if (what == "decode") {
    BitString bits;
    try {
      bits = BitString::parse(cfg.args.at(0));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const DecodedIndex d = decode_I(bits);
    emit(out, Json{{"index", d.index.str()}, {"remainder", d.remainder.str()}});
  } else {
    throw UsageError("unknown enum subcommand '" + what + "'");
  }
  return kExitOk;
}

inline int cmd_lambda(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const int sources = (cfg.spec_path.empty() ? 0 : 1) + (cfg.index.empty() ? 0 : 1) + (cfg.universal ? 1 : 0);
  if (sources != 1) throw UsageError("lambda needs exactly one of --spec, --index, --universal");

  std::optional<MachineSpec> spec;
  std::string source = "U";
  if (!cfg.spec_path.empty()) {
    spec = parse_machine_file(cfg.spec_path);
    source = machine_label(encode_machine(*spec));
  } else if (!cfg.index.empty()) {
    const MachineIndex i = parse_index(cfg.index);
    spec = decode_machine(i);
    source = machine_label(i);
  }

  if (cfg.has_x) {
    BitString x;
    try {
      x = BitString::parse(cfg.x);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto programs = spec ? minimal_programs(*spec, x, cfg.budget) : minimal_programs(universal_execution(), x, cfg.budget);
    DyadicRational value;
    Json list = Json::array();
    for (const auto& p : programs) {
      value += DyadicRational::pow2_neg(static_cast<std::uint32_t>(p.size()));
      list.push_back(p.str());
    }
    emit(out, Json{{"source", source}, {"budget", to_json(cfg.budget)}, {"x", x.str()}, {"value", to_json(value)},
                   {"minimal_programs", std::move(list)}});
    return kExitOk;
  }

  const ApproxTable table =
      spec ? tabulate(*spec, cfg.depth, cfg.budget, source) : tabulate(universal_execution(), cfg.depth, cfg.budget, "U");
  const auto violations = check_semimeasure(table);
  emit_table(out, table, cfg.format);
  log << source << ": " << table.values.size() << " values, " << violations.size() << " semimeasure violations\n";
  return violations.empty() ? kExitOk : kExitCheckFailed;
}

inline int cmd_mix(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const std::string& what = cfg.subcommand;
  if (what == "eval") {
    const WeightScheme scheme = scheme_for(cfg);
    const ApproxTable t = mixture_table(scheme, cfg.depth, cfg.budget);
    const auto violations = check_semimeasure(t);
    emit_table(out, t, cfg.format);
    log << "mixture over " << scheme.size() << " machines, weight sum " << scheme.total() << '\n';
    return violations.empty() ? kExitOk : kExitCheckFailed;
  }
  if (what == "split-check") {
    const ComparisonReport rep = split_sum_check(cfg.depth, cfg.budget, cfg.n_machines);
    emit(out, to_json(rep));
    log << "split-sum: " << rep.rows.size() << " strings, " << rep.violations().size() << " discrepancies\n";
    return rep.passed() ? kExitOk : kExitCheckFailed;
  }
  if (what == "dominance") {
    if (cfg.js.empty()) throw UsageError("mix dominance needs -j <index>");
    const ApproxTable m = universal_table(cfg.depth, cfg.budget);
    Json results = Json::array();
    bool ok = true;
    for (const auto& text : cfg.js) {
      const DominanceResult d = dominance_check(parse_index(text), m);
      ok = ok && d.report.passed();
      results.push_back(to_json(d));
      log << "dominance j=" << text << " constant " << d.constant << ": " << d.report.violations().size()
          << " violations\n";
    }
    emit(out, Json{{"passed", ok}, {"results", std::move(results)}});
    return ok ? kExitOk : kExitCheckFailed;
  }
  throw UsageError("unknown mix subcommand '" + what + "'");
}

inline int cmd_kc(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const std::string& what = cfg.subcommand;
  if (what == "request") {
    KraftAllocator alloc;
    Json issued = Json::array();
    for (const auto& text : cfg.args) {
      const MachineIndex k = parse_index(text);
      if (k > 4096) throw UsageError("codeword length " + text + " is too large");
      const auto sigma = alloc.try_request(static_cast<std::size_t>(k));
      if (!sigma) {
        emit(out, Json{{"passed", false}, {"issued", std::move(issued)}, {"failed_request", static_cast<std::size_t>(k)},
                       {"error", "KraftExhausted"}, {"free_mass", to_json(alloc.free_mass())}});
        log << "request for length " << text << " exhausted the code space\n";
        return kExitCheckFailed;
      }
      issued.push_back(Json{{"length", static_cast<std::size_t>(k)}, {"codeword", sigma->str()}});
    }
    emit(out, Json{{"passed", true}, {"issued", std::move(issued)}, {"free_mass", to_json(alloc.free_mass())}});
    return kExitOk;
  }
  if (what == "synth") {
    const SynthesizedUniversal u = synthesize_universal(scheme_for(cfg));
    emit(out, to_json(u));
    log << "dispatch table with " << u.entries().size() << " codewords\n";
    return kExitOk;
  }
  if (what == "verify") {
    const ComparisonReport rep = kc_verify(scheme_for(cfg), cfg.depth, cfg.budget);
    emit(out, to_json(rep));
    log << "mixture-to-machine: " << rep.violations().size() << " discrepancies\n";
    return rep.passed() ? kExitOk : kExitCheckFailed;
  }
  throw UsageError("unknown kc subcommand '" + what + "'");
}

inline DyadicRational parse_c(const std::string& text) {
  const DyadicRational c = DyadicRational::parse(text);
  if (c.sign() <= 0) throw UsageError("--c must be positive");
  return c;
}

inline int cmd_gap(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const DyadicRational c = parse_c(cfg.c);
  const std::string& what = cfg.subcommand;
  if (what == "report") {
    ApproxTable table;
    if (!cfg.spec_path.empty()) {
      const MachineSpec spec = parse_machine_file(cfg.spec_path);
      table = tabulate(spec, cfg.depth, cfg.budget, machine_label(encode_machine(spec)));
    } else if (!cfg.index.empty()) {
      const MachineIndex i = parse_index(cfg.index);
      table = tabulate(decode_machine(i), cfg.depth, cfg.budget, machine_label(i));
    } else if (!cfg.weights_path.empty()) {
      table = mixture_table(load_scheme(cfg.weights_path), cfg.depth, cfg.budget);
    } else {
      table = universal_table(cfg.depth, cfg.budget);
    }
    const GapReport rep = gap_report(table, c);
    emit(out, to_json(rep));
    log << rep.source << ": " << rep.verdict() << '\n';
    return rep.any_flagged() || rep.any_negative() ? kExitCheckFailed : kExitOk;
  }
  if (what == "delta-prime") {
    WeightScheme scheme;
    if (cfg.base == "default") {
      const std::uint64_t n = machines_for(cfg);
      if (n == 0) throw UsageError("no machine codeword fits in L");
      scheme = default_scheme(n);
    } else {
      scheme = load_scheme(cfg.base);
    }
    const ApproxTable base = mixture_table(scheme, cfg.depth, cfg.budget);
    const ApproxTable dp = delta_prime_table(base);
    const auto semimeasure = check_semimeasure(dp);
    const GapReport gaps = gap_report(dp, c);

    std::vector<MachineIndex> js;
    if (cfg.js.empty()) {
      for (const auto& m : scheme.machines) js.push_back(m.index);
    } else {
      for (const auto& t : cfg.js) js.push_back(parse_index(t));
    }
    Json dominance = Json::array();
    bool dominant = true;
    std::size_t covered = 0;
    std::set<MachineIndex> seen;
    for (const auto& j : js) {
      if (!seen.insert(j).second) continue;
      const auto d = delta_prime_dominance_check(scheme, j, dp);
      if (!d) continue;
      ++covered;
      dominant = dominant && d->report.passed();
      Json row = to_json(*d);
      row.erase("rows");
      dominance.push_back(std::move(row));
    }
    const bool ok = semimeasure.empty() && dominant && covered > 0;
    emit(out, Json{{"passed", ok},
                   {"verdict", gaps.verdict()},
                   {"semimeasure_violations", semimeasure.size()},
                   {"covered_machines", covered},
                   {"dominance", std::move(dominance)},
                   {"table", to_json(dp)},
                   {"gaps", to_json(gaps)}});
    log << dp.source << ": " << gaps.verdict() << ", dominance over " << covered << " machines "
        << (dominant ? "holds" : "FAILS") << '\n';
    return ok ? kExitOk : kExitCheckFailed;
  }
  throw UsageError("unknown gap subcommand '" + what + "'");
}

}  // namespace detail

/// Execute one parsed invocation. Report on `out`, human log on `log`.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  try {
    if (cfg.command == "parse") return detail::cmd_parse(cfg, out, log);
    if (cfg.command == "enum") return detail::cmd_enum(cfg, out, log);
    if (cfg.command == "lambda") return detail::cmd_lambda(cfg, out, log);
    if (cfg.command == "mix") return detail::cmd_mix(cfg, out, log);
    if (cfg.command == "kc") return detail::cmd_kc(cfg, out, log);
    if (cfg.command == "gap") return detail::cmd_gap(cfg, out, log);
    throw UsageError("unknown command '" + cfg.command + "'");
  } catch (const ParseError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

namespace detail {

inline void add_budget(CLI::App* app, RunConfig& cfg) {
  app->add_option("--depth", cfg.depth, "longest x tabulated");
  app->add_option("--max-len", cfg.budget.max_len, "longest program, in bits (L)");
  app->add_option("--fuel", cfg.budget.fuel, "steps per program (t)");
}

inline void add_scheme(CLI::App* app, RunConfig& cfg) {
  app->add_option("--weights", cfg.weights_path, "JSON weight scheme");
  app->add_option("-N", cfg.n_machines, "default scheme over machines 0..N-1 (0: all codewords within L)");
}

inline void add_format(CLI::App* app, RunConfig& cfg) {
  app->add_option("--format", cfg.format, "json or csv")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"json", Format::Json}, {"csv", Format::Csv}}));
}

}  // namespace detail

/// Parse argv and run. Exit 0 when every check passes, 1 on a failed check,
/// 2 on usage or input errors.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
  RunConfig cfg;
  CLI::App app{"sololab: monotone machines, Solomonoff semimeasures and universal priors"};
  app.require_subcommand(1);

  auto* parse = app.add_subcommand("parse", "parse and canonicalize a machine file");
  parse->add_option("file", cfg.args, "machine file")->required()->expected(1);

  auto* en = app.add_subcommand("enum", "machine enumeration and the index code I");
  en->require_subcommand(1);
  en->add_subcommand("show", "print machine i")->add_option("i", cfg.args)->required()->expected(1);
  en->add_subcommand("encode", "index of a machine file")->add_option("file", cfg.args)->required()->expected(1);
  en->add_subcommand("code", "codeword I(i)")->add_option("i", cfg.args)->required()->expected(1);
  en->add_subcommand("decode", "strip one codeword of I")->add_option("bits", cfg.args)->required()->expected(1);

  auto* lambda = app.add_subcommand("lambda", "budgeted lambda_T table, or one value with --x");
  lambda->add_option("--spec", cfg.spec_path, "machine file");
  lambda->add_option("--index", cfg.index, "machine index");
  lambda->add_flag("--universal", cfg.universal, "the universal dispatcher U");
  lambda->add_option("--x", cfg.x, "single target string")->each([&](const std::string&) { cfg.has_x = true; });
  detail::add_budget(lambda, cfg);
  detail::add_format(lambda, cfg);

  auto* mix = app.add_subcommand("mix", "truncated universal mixtures");
  mix->require_subcommand(1);
  auto* mix_eval = mix->add_subcommand("eval", "tabulate a mixture");
  detail::add_scheme(mix_eval, cfg);
  detail::add_budget(mix_eval, cfg);
  detail::add_format(mix_eval, cfg);
  auto* split = mix->add_subcommand("split-check", "lambda_U == sum_i 2^-|I(i)| lambda_{T_i}, x != epsilon");
  split->add_option("-N", cfg.n_machines, "machines in the sum (0: all codewords within L)");
  detail::add_budget(split, cfg);
  auto* dom = mix->add_subcommand("dominance", "M >= 2^-|I(j)| lambda_{T_j}, x != epsilon");
  dom->add_option("-j", cfg.js, "machine index (repeatable)")->required();
  detail::add_budget(dom, cfg);

  auto* kc = app.add_subcommand("kc", "Kraft-Chaitin allocation and machine synthesis");
  kc->require_subcommand(1);
  kc->add_subcommand("request", "allocate codewords of the given lengths")->add_option("k", cfg.args)->required();
  auto* synth = kc->add_subcommand("synth", "dispatch table realizing a weight scheme");
  detail::add_scheme(synth, cfg);
  synth->add_option("--max-len", cfg.budget.max_len, "L used for the default -N");
  auto* verify = kc->add_subcommand("verify", "lambda_{U'} == mixture, x != epsilon");
  detail::add_scheme(verify, cfg);
  detail::add_budget(verify, cfg);

  auto* gap = app.add_subcommand("gap", "semimeasure gaps and the delta' construction");
  gap->require_subcommand(1);
  auto* gap_rep = gap->add_subcommand("report", "gaps of a table against c 2^-|code(|x|)|");
  gap_rep->add_option("--spec", cfg.spec_path, "machine file");
  gap_rep->add_option("--index", cfg.index, "machine index");
  gap_rep->add_option("--weights", cfg.weights_path, "mixture weight scheme");
  gap_rep->add_option("--c", cfg.c, "bound constant (dyadic)");
  detail::add_budget(gap_rep, cfg);
  auto* dp = gap->add_subcommand("delta-prime", "delta' over a mixture: dominance and root gap");
  dp->add_option("--base", cfg.base, "'default' or a weights file");
  dp->add_option("-N", cfg.n_machines, "machines in the default base (0: all codewords within L)");
  dp->add_option("-j", cfg.js, "restrict dominance to these indices (repeatable)");
  dp->add_option("--c", cfg.c, "bound constant (dyadic)");
  detail::add_budget(dp, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, log);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    for (auto* leaf : sub->get_subcommands()) cfg.subcommand = leaf->get_name();
  }
  return run_command(cfg, out, log);
}

}  // namespace sololab::cli
