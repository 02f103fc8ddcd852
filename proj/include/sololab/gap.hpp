#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sololab/dyadic.hpp"
#include "sololab/json_io.hpp"
#include "sololab/machine_enum.hpp"
#include "sololab/mixture.hpp"
#include "sololab/report.hpp"
#include "sololab/semimeasure.hpp"
#include "sololab/weights.hpp"

// Gap analysis: gap(x) = v(x) - v(x0) - v(x1). For a Solomonoff prior the
// gap is the mass of programs printing exactly x, and it is bounded below by
// c 2^-K(|x|) v(x). K is not computable, so the bound here uses the length of
// the index code of |x|, 2 floor(log2(|x|+1)) + 1, and c is supplied by the
// caller. All values are at the table's budget.

namespace sololab {

using Evaluator = std::function<DyadicRational(const BitString&)>;

inline Evaluator table_evaluator(ApproxTable table) {
  return [t = std::move(table)](const BitString& x) { return t.at(x); };
}

inline ApproxTable tabulate_evaluator(const Evaluator& ev, std::size_t depth, Budget budget, std::string source) {
  ApproxTable t = empty_table(std::move(source), budget, depth);
  for (auto& [x, v] : t.values) v = ev(x);
  return t;
}

/// delta'(epsilon) = 1, delta'(0) = delta'(1) = 1/2, delta'(bx) = delta(bx)/2
/// for |bx| >= 2. Zero gap at the root by construction.
inline Evaluator make_delta_prime(Evaluator base) {
  return [base = std::move(base)](const BitString& x) -> DyadicRational {
    if (x.empty()) return DyadicRational(1);
    if (x.size() == 1) return DyadicRational::pow2_neg(1);
    return base(x).half();
  };
}

inline ApproxTable delta_prime_table(const ApproxTable& base) {
  return tabulate_evaluator(make_delta_prime(table_evaluator(base)), base.depth, base.budget, "delta'(" + base.source + ")");
}

/// Surrogate for K(n): length of the index code of n.
inline std::uint32_t length_code_bits(std::size_t n) { return static_cast<std::uint32_t>(code_I_length(n)); }

struct GapRow {
  BitString x;
  DyadicRational value;
  DyadicRational gap;
  DyadicRational bound;  ///< c 2^-|code(|x|)|; relative gaps below it are flagged
  bool flagged = false;  ///< value > 0 and gap < bound * value
  bool negative = false; ///< gap < 0: the table is not a semimeasure at x
};

struct GapReport {
  std::string source;
  Budget budget;
  std::size_t depth = 0;
  DyadicRational c;
  std::vector<GapRow> rows;

  [[nodiscard]] bool any_flagged() const {
    for (const auto& r : rows) {
      if (r.flagged) return true;
    }
    return false;
  }
  [[nodiscard]] bool any_negative() const {
    for (const auto& r : rows) {
      if (r.negative) return true;
    }
    return false;
  }
  [[nodiscard]] const GapRow* row(const BitString& x) const {
    for (const auto& r : rows) {
      if (r.x == x) return &r;
    }
    return nullptr;
  }

  /// "consistent-with-mixture" when nothing is flagged, otherwise
  /// "not-a-mixture: ..." naming the first flagged x.
  [[nodiscard]] std::string verdict() const {
    for (const auto& r : rows) {
      if (!r.flagged) continue;
      if (r.x.empty() && r.gap.is_zero()) return "not-a-mixture: root gap 0";
      return "not-a-mixture: relative gap below bound at x=" + r.x.display();
    }
    return "consistent-with-mixture";
  }
};

/// Gaps at every x whose children are in the table (|x| < depth).
inline GapReport gap_report(const ApproxTable& table, const DyadicRational& c) {
  GapReport rep{table.source, table.budget, table.depth, c, {}};
  for (const auto& [x, v] : table.values) {
    if (x.size() >= table.depth) continue;
    BitString x0 = x, x1 = x;
    x0.push_back(false);
    x1.push_back(true);
    GapRow row;
    row.x = x;
    row.value = v;
    row.gap = v - table.at(x0) - table.at(x1);
    row.bound = c.scaled_pow2_neg(length_code_bits(x.size()));
    row.negative = row.gap.sign() < 0;
    row.flagged = v.sign() > 0 && row.gap < row.bound * v;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

/// gap / value as a reduced integer fraction {"num", "den"}, or null when the
/// value is zero.
inline Json relative_gap_json(const GapRow& r) {
  if (r.value.is_zero()) return nullptr;
  // (gm 2^-ge) / (vm 2^-ve) = gm 2^ve / (vm 2^ge)
  BigInt num = r.gap.mantissa() << r.value.exponent();
  BigInt den = r.value.mantissa() << r.gap.exponent();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const BigInt g = boost::multiprecision::gcd(abs(num), den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Json{{"num", num.str()}, {"den", den.str()}};
}

inline Json to_json(const GapReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"x", row.x.str()},
                        {"value", to_json(row.value)},
                        {"gap", to_json(row.gap)},
                        {"relative_gap", relative_gap_json(row)},
                        {"bound", to_json(row.bound)},
                        {"flagged", row.flagged},
                        {"negative", row.negative}});
  }
  return Json{{"source", r.source},     {"budget", to_json(r.budget)}, {"depth", r.depth}, {"c", to_json(r.c)},
              {"verdict", r.verdict()}, {"rows", std::move(rows)}};
}

struct DeltaPrimeDominance {
  MachineIndex machine;
  DyadicRational constant;  ///< the mixture's constant for T_j, halved
  ComparisonReport report;
};

/// delta'(x) >= (w_j / 2) lambda_{T_j}(x) for all x != epsilon, where w_j is
/// the total weight of machine j in the base scheme and T_j runs at
/// L - k_max, k_max being the longest atom of w_j (for the default scheme,
/// |I(j)|). Returns nullopt when j is not covered: absent from the scheme or
/// its atoms do not fit in L.
inline std::optional<DeltaPrimeDominance> delta_prime_dominance_check(const WeightScheme& scheme,
                                                                      const MachineIndex& j,
                                                                      const ApproxTable& delta_prime) {
  DyadicRational weight;
  std::uint32_t longest = 0;
  bool present = false;
  for (const auto& m : scheme.machines) {
    if (m.index != j) continue;
    present = true;
    weight += m.weight;
    for (std::uint32_t k : dyadic_lengths(m.weight)) longest = std::max(longest, k);
  }
  const Budget budget = delta_prime.budget;
  if (!present || longest > budget.max_len) return std::nullopt;

  const DyadicRational constant = weight.half();
  ApproxTable scaled = tabulate(decode_machine(j), delta_prime.depth, Budget{budget.max_len - longest, budget.fuel});
  for (auto& [x, v] : scaled.values) v *= constant;
  scaled.source = constant.to_string() + " * " + machine_label(j);
  return DeltaPrimeDominance{j, constant, compare_tables("delta-prime-dominance", delta_prime, scaled, Relation::AtLeast)};
}

/// Builds delta' over the truncated mixture of `base` at `budget`, then
/// checks machine j against it.
inline std::optional<DeltaPrimeDominance> delta_prime_dominance_check(const WeightScheme& base, const MachineIndex& j,
                                                                      std::size_t depth, Budget budget) {
  return delta_prime_dominance_check(base, j, delta_prime_table(mixture_table(base, depth, budget)));
}

inline Json to_json(const DeltaPrimeDominance& d) {
  Json j = to_json(d.report);
  j["machine"] = d.machine.str();
  j["constant"] = to_json(d.constant);
  return j;
}

}  // namespace sololab
