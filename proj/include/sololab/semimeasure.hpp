#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sololab/bitstring.hpp"
#include "sololab/dyadic.hpp"
#include "sololab/json_io.hpp"
#include "sololab/machine_enum.hpp"
#include "sololab/tm_core.hpp"

// Budgeted lower approximations of lambda_T(x), the uniform measure of the
// minimal programs on which T prints something extending x.
//
// The search walks the program tree lazily: a branch is simulated until the
// machine asks for an input bit it has not been given, then the configuration
// is copied and fed 0 and 1. A branch ends when the target output is reached
// (the consumed prefix at that moment is a minimal program), when the machine
// halts or runs out of fuel, or when the program would exceed max_len.
// Because branching happens only at reads and a successful branch stops, the
// programs found are prefix-free by construction.

namespace sololab {

struct Budget {
  std::size_t max_len = 0;  ///< L: longest program considered, in bits
  std::uint64_t fuel = 0;   ///< t: steps per program

  friend bool operator==(const Budget&, const Budget&) = default;
};

/// Anything the search can drive: Execution, UniversalExecution, or another
/// DispatchExecution.
template <class E>
concept Resumable = std::copyable<E> && requires(E e, const E ce, bool bit, std::uint64_t fuel, std::size_t n) {
  { e.resume(fuel, n) } -> std::same_as<ExecStatus>;
  e.feed(bit);
  { ce.output() } -> std::convertible_to<const BitString&>;
  { ce.consumed() } -> std::convertible_to<std::size_t>;
};

namespace detail {

template <Resumable E>
struct SearchNode {
  E exec;
  BitString program;
};

/// Depth-first walk over the program tree. `on_progress(node)` runs each time
/// the output grows by one bit and returns true to stop the branch. Branches
/// are explored 0 before 1.
template <Resumable E, class OnProgress>
void walk_program_tree(const E& root, Budget budget, std::size_t stop_len, OnProgress on_progress) {
  std::vector<SearchNode<E>> stack;
  stack.push_back({root, BitString{}});
  while (!stack.empty()) {
    SearchNode<E> node = std::move(stack.back());
    stack.pop_back();
    bool done = node.exec.output().size() >= stop_len;
    while (!done) {
      const std::size_t before = node.exec.output().size();
      const ExecStatus st = node.exec.resume(budget.fuel, before + 1);
      if (node.exec.output().size() > before) {
        done = on_progress(node) || node.exec.output().size() >= stop_len;
        continue;
      }
      if (st == ExecStatus::AwaitingInput && node.program.size() < budget.max_len) {
        SearchNode<E> one{node.exec, node.program};
        one.exec.feed(true);
        one.program.push_back(true);
        node.exec.feed(false);
        node.program.push_back(false);
        stack.push_back(std::move(one));
        stack.push_back(std::move(node));
      }
      done = true;
    }
  }
}

}  // namespace detail

/// Minimal programs p (|p| <= L) after whose consumption the machine has
/// printed an extension of x within the fuel budget. Returned in the order
/// found (lexicographic). x = epsilon gives {epsilon}.
template <Resumable E>
std::vector<BitString> minimal_programs(const E& root, const BitString& x, Budget budget) {
  if (x.empty()) return {BitString{}};
  std::vector<BitString> found;
  detail::walk_program_tree(root, budget, x.size(), [&](const detail::SearchNode<E>& node) {
    const BitString& out = node.exec.output();
    if (out[out.size() - 1] != x[out.size() - 1]) return true;  // diverged; monotone, so dead
    if (out.size() == x.size()) found.push_back(node.program);
    return false;
  });
  return found;
}

inline std::vector<BitString> minimal_programs(const MachineSpec& spec, const BitString& x, Budget budget) {
  return minimal_programs(Execution(spec), x, budget);
}

/// Sum of 2^-|p| over minimal_programs, exact.
template <Resumable E>
DyadicRational approx_lambda(const E& root, const BitString& x, Budget budget) {
  DyadicRational total;
  for (const BitString& p : minimal_programs(root, x, budget)) total += DyadicRational::pow2_neg(static_cast<std::uint32_t>(p.size()));
  return total;
}

inline DyadicRational approx_lambda(const MachineSpec& spec, const BitString& x, Budget budget) {
  return approx_lambda(Execution(spec), x, budget);
}

/// Budgeted semimeasure values for every x with |x| <= depth.
struct ApproxTable {
  std::string source;  ///< e.g. "T[5]", "U", "U'", "mixture"
  Budget budget;
  std::size_t depth = 0;
  std::map<BitString, DyadicRational, ShortlexLess> values;

  /// Missing entries read as zero.
  [[nodiscard]] DyadicRational at(const BitString& x) const {
    const auto it = values.find(x);
    return it == values.end() ? DyadicRational{} : it->second;
  }
};

/// A table with a zero entry for every x up to `depth`.
inline ApproxTable empty_table(std::string source, Budget budget, std::size_t depth) {
  ApproxTable t{std::move(source), budget, depth, {}};
  for (BitString& x : strings_up_to(depth)) t.values.emplace(std::move(x), DyadicRational{});
  return t;
}

/// All values up to `depth` in one walk of the program tree: when a branch's
/// output first reaches length m, its consumed prefix is the unique minimal
/// program for output[0..m) along that branch, so 2^-|p| is credited there.
template <Resumable E>
ApproxTable tabulate(const E& root, std::size_t depth, Budget budget, std::string source = "T") {
  ApproxTable table = empty_table(std::move(source), budget, depth);
  table.values[BitString{}] = DyadicRational(1);
  detail::walk_program_tree(root, budget, depth, [&](const detail::SearchNode<E>& node) {
    const BitString& out = node.exec.output();
    table.values[out] += DyadicRational::pow2_neg(static_cast<std::uint32_t>(node.program.size()));
    return false;
  });
  return table;
}

inline ApproxTable tabulate(const MachineSpec& spec, std::size_t depth, Budget budget, std::string source = "T") {
  return tabulate(Execution(spec), depth, budget, std::move(source));
}

struct SemimeasureViolation {
  enum class Kind { MissingRoot, Negative, ExceedsOne, Superadditive };
  Kind kind;
  BitString x;
  DyadicRational value;     ///< v(x)
  DyadicRational children;  ///< v(x0) + v(x1), for Superadditive
};

inline const char* to_string(SemimeasureViolation::Kind k) {
  switch (k) {
    case SemimeasureViolation::Kind::MissingRoot: return "missing-root";
    case SemimeasureViolation::Kind::Negative: return "negative";
    case SemimeasureViolation::Kind::ExceedsOne: return "exceeds-one";
    case SemimeasureViolation::Kind::Superadditive: return "superadditive";
  }
  return "?";
}

/// Empty when every value lies in [0,1] and v(x) >= v(x0) + v(x1) wherever
/// all three are present.
inline std::vector<SemimeasureViolation> check_semimeasure(const ApproxTable& table) {
  std::vector<SemimeasureViolation> out;
  if (!table.values.contains(BitString{})) out.push_back({SemimeasureViolation::Kind::MissingRoot, {}, {}, {}});
  const DyadicRational one(1);
  for (const auto& [x, v] : table.values) {
    if (v.sign() < 0) out.push_back({SemimeasureViolation::Kind::Negative, x, v, {}});
    if (v > one) out.push_back({SemimeasureViolation::Kind::ExceedsOne, x, v, {}});
    BitString x0 = x, x1 = x;
    x0.push_back(false);
    x1.push_back(true);
    const auto c0 = table.values.find(x0);
    const auto c1 = table.values.find(x1);
    if (c0 == table.values.end() || c1 == table.values.end()) continue;
    DyadicRational children = c0->second + c1->second;
    if (v < children) out.push_back({SemimeasureViolation::Kind::Superadditive, x, v, std::move(children)});
  }
  return out;
}

inline Json to_json(const SemimeasureViolation& v) {
  Json j{{"x", v.x.str()}, {"kind", to_string(v.kind)}, {"value", to_json(v.value)}};
  if (v.kind == SemimeasureViolation::Kind::Superadditive) j["children"] = to_json(v.children);
  return j;
}

inline Json to_json(const Budget& b) { return Json{{"max_len", b.max_len}, {"fuel", b.fuel}}; }

/// {"source", "budget", "depth", "values": [{"x", "mantissa", "exponent"}...]}
/// with values in shortlex order of x.
inline Json to_json(const ApproxTable& t) {
  Json values = Json::array();
  for (const auto& [x, v] : t.values) {
    values.push_back(Json{{"x", x.str()}, {"mantissa", v.mantissa().str()}, {"exponent", v.exponent()}});
  }
  return Json{{"source", t.source}, {"budget", to_json(t.budget)}, {"depth", t.depth}, {"values", std::move(values)}};
}

/// Header `x,value_mantissa,value_exponent`, one row per x in shortlex order;
/// epsilon is the empty field.
inline std::string to_csv(const ApproxTable& t) {
  std::ostringstream out;
  out << "x,value_mantissa,value_exponent\n";
  for (const auto& [x, v] : t.values) out << x.str() << ',' << v.mantissa().str() << ',' << v.exponent() << '\n';
  return out.str();
}

inline ApproxTable table_from_json(const Json& j) {
  ApproxTable t;
  t.source = j.value("source", std::string("?"));
  t.budget = {j.at("budget").at("max_len").get<std::size_t>(), j.at("budget").at("fuel").get<std::uint64_t>()};
  t.depth = j.at("depth").get<std::size_t>();
  for (const Json& row : j.at("values")) {
    t.values.emplace(BitString::parse(row.at("x").get<std::string>()), dyadic_from_json(row));
  }
  return t;
}

}  // namespace sololab
