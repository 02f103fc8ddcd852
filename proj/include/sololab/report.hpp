#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sololab/bitstring.hpp"
#include "sololab/dyadic.hpp"
#include "sololab/json_io.hpp"
#include "sololab/semimeasure.hpp"

namespace sololab {

enum class Relation { Equal, AtLeast };

struct ComparisonRow {
  BitString x;
  DyadicRational left;
  DyadicRational right;
  bool ok = true;
};

/// Per-x comparison of two tables; a check passes when no row fails.
struct ComparisonReport {
  std::string check;
  std::string left_name;
  std::string right_name;
  Relation relation = Relation::Equal;
  Budget budget;
  std::size_t depth = 0;
  std::vector<ComparisonRow> rows;

  [[nodiscard]] std::vector<BitString> violations() const {
    std::vector<BitString> out;
    for (const auto& r : rows) {
      if (!r.ok) out.push_back(r.x);
    }
    return out;
  }
  [[nodiscard]] bool passed() const { return violations().empty(); }
};

/// Compare left and right at every x of `left` up to its depth. Epsilon is
/// skipped: all equivalence and dominance statements exclude it.
inline ComparisonReport compare_tables(std::string check, const ApproxTable& left, const ApproxTable& right,
                                       Relation relation) {
  ComparisonReport rep;
  rep.check = std::move(check);
  rep.left_name = left.source;
  rep.right_name = right.source;
  rep.relation = relation;
  rep.budget = left.budget;
  rep.depth = left.depth;
  for (const auto& [x, lv] : left.values) {
    if (x.empty()) continue;
    DyadicRational rv = right.at(x);
    const bool ok = relation == Relation::Equal ? lv == rv : lv >= rv;
    rep.rows.push_back({x, lv, std::move(rv), ok});
  }
  return rep;
}

inline Json to_json(const ComparisonReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"x", row.x.str()}, {"left", to_json(row.left)}, {"right", to_json(row.right)}, {"ok", row.ok}});
  }
  Json viol = Json::array();
  for (const auto& x : r.violations()) viol.push_back(x.str());
  return Json{{"check", r.check},
              {"left", r.left_name},
              {"relation", r.relation == Relation::Equal ? "==" : ">="},
              {"right", r.right_name},
              {"budget", to_json(r.budget)},
              {"depth", r.depth},
              {"passed", r.passed()},
              {"violations", std::move(viol)},
              {"rows", std::move(rows)}};
}

}  // namespace sololab
