#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sololab/errors.hpp"
#include "sololab/machine_enum.hpp"
#include "sololab/parallel.hpp"
#include "sololab/report.hpp"
#include "sololab/semimeasure.hpp"
#include "sololab/weights.hpp"

// Truncated universal mixtures xi = sum_i w_i lambda_{T_i}.
//
// Budget matching: each weight is split into its dyadic atoms 2^-k, and the
// atom 2^-k of machine i sees programs of length at most L - k. For the
// default scheme every weight is the single atom 2^-|I(i)|, so machine i is
// evaluated at L - |I(i)|, exactly the length left over after U has read
// I(i). Atoms with L - k < 0 contribute nothing.

namespace sololab {

struct MixtureTerm {
  MachineIndex index;
  std::uint32_t length;  ///< the atom is 2^-length
};

inline std::vector<MixtureTerm> mixture_terms(const WeightScheme& scheme) {
  scheme.validate();
  std::vector<MixtureTerm> terms;
  for (const auto& m : scheme.machines) {
    for (std::uint32_t k : dyadic_lengths(m.weight)) terms.push_back({m.index, k});
  }
  return terms;
}

inline std::string machine_label(const MachineIndex& i) { return "T[" + i.str() + "]"; }

/// Exact truncated mixture value at one x. Throws InvalidWeights.
inline DyadicRational mixture_eval(const WeightScheme& scheme, const BitString& x, Budget budget) {
  DyadicRational total;
  std::map<MachineIndex, MachineSpec> specs;
  for (const auto& term : mixture_terms(scheme)) {
    if (term.length > budget.max_len) continue;
    auto it = specs.find(term.index);
    if (it == specs.end()) it = specs.emplace(term.index, decode_machine(term.index)).first;
    const Budget reduced{budget.max_len - term.length, budget.fuel};
    total += approx_lambda(it->second, x, reduced).scaled_pow2_neg(term.length);
  }
  return total;
}

/// Mixture values for every x up to `depth`. Per-machine tables are computed
/// in parallel, one per distinct (machine, reduced length budget).
inline ApproxTable mixture_table(const WeightScheme& scheme, std::size_t depth, Budget budget,
                                 std::string source = "mixture") {
  const auto terms = mixture_terms(scheme);
  std::map<std::pair<MachineIndex, std::size_t>, std::size_t> slot;
  std::vector<std::pair<MachineIndex, std::size_t>> jobs;
  for (const auto& t : terms) {
    if (t.length > budget.max_len) continue;
    auto key = std::make_pair(t.index, budget.max_len - t.length);
    if (slot.emplace(key, jobs.size()).second) jobs.push_back(std::move(key));
  }
  const auto tables = parallel_map(jobs.size(), [&](std::size_t k) {
    const MachineSpec spec = decode_machine(jobs[k].first);
    return tabulate(spec, depth, Budget{jobs[k].second, budget.fuel});
  });

  ApproxTable out = empty_table(std::move(source), budget, depth);
  for (const auto& t : terms) {
    if (t.length > budget.max_len) continue;
    const ApproxTable& part = tables[slot.at({t.index, budget.max_len - t.length})];
    for (auto& [x, v] : out.values) v += part.at(x).scaled_pow2_neg(t.length);
  }
  return out;
}

/// M-approximation: the universal dispatcher's table at `budget`.
inline ApproxTable universal_table(std::size_t depth, Budget budget) {
  return tabulate(universal_execution(), depth, budget, "U");
}

/// lambda_U(x) against sum_i 2^-|I(i)| lambda_{T_i}(x) at matched budgets,
/// for every 1 <= |x| <= depth. `n_machines` of 0 means "every i whose
/// codeword fits in L"; a smaller positive N than that is rejected because the
/// truncated sum would be missing terms.
inline ComparisonReport split_sum_check(std::size_t depth, Budget budget, std::uint64_t n_machines = 0) {
  const std::uint64_t needed = indices_within_length(budget.max_len);
  if (n_machines == 0) n_machines = needed;
  if (n_machines < needed) {
    throw Error("N=" + std::to_string(n_machines) + " omits machines whose codewords fit in L=" +
                std::to_string(budget.max_len) + "; need N >= " + std::to_string(needed));
  }
  const ApproxTable left = universal_table(depth, budget);
  // L = 0: no codeword fits, both sides vanish off epsilon
  const ApproxTable right =
      n_machines == 0 ? empty_table("mixture", budget, depth) : mixture_table(default_scheme(n_machines), depth, budget);
  return compare_tables("split-sum", left, right, Relation::Equal);
}

struct DominanceResult {
  MachineIndex machine;
  DyadicRational constant;
  ComparisonReport report;
};

/// M(x) >= 2^-|I(j)| lambda_{T_j}(x) for all x != epsilon up to the table's
/// depth, with T_j at the reduced budget L - |I(j)|. Takes a precomputed
/// M-table so many j can share it. Throws BudgetTooSmall.
inline DominanceResult dominance_check(const MachineIndex& j, const ApproxTable& m_table) {
  const std::size_t code_len = code_I_length(j);
  const Budget budget = m_table.budget;
  if (code_len > budget.max_len) {
    throw BudgetTooSmall("|I(" + j.str() + ")| = " + std::to_string(code_len) + " exceeds L = " +
                         std::to_string(budget.max_len));
  }
  const auto k = static_cast<std::uint32_t>(code_len);
  const DyadicRational constant = DyadicRational::pow2_neg(k);
  ApproxTable scaled = tabulate(decode_machine(j), m_table.depth, Budget{budget.max_len - code_len, budget.fuel});
  for (auto& [x, v] : scaled.values) v = v.scaled_pow2_neg(k);
  scaled.source = constant.to_string() + " * " + machine_label(j);
  return {j, constant, compare_tables("dominance", m_table, scaled, Relation::AtLeast)};
}

inline DominanceResult dominance_check(const MachineIndex& j, std::size_t depth, Budget budget) {
  if (code_I_length(j) > budget.max_len) return dominance_check(j, empty_table("U", budget, depth));
  return dominance_check(j, universal_table(depth, budget));
}

inline Json to_json(const DominanceResult& d) {
  Json j = to_json(d.report);
  j["machine"] = d.machine.str();
  j["constant"] = to_json(d.constant);
  return j;
}

}  // namespace sololab
