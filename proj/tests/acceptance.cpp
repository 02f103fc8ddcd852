// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sololab/sololab.hpp"

using namespace sololab;

namespace {

constexpr std::size_t kDepth = 4;
constexpr Budget kBudget{11, 128};

struct Verdict {
  bool ok;
  std::string detail;
};

bool report(int id, const char* name, const std::function<Verdict()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %d %s: %s [%.1fs]\n", v.ok ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
  std::fflush(stdout);
  return v.ok;
}

std::string budget_text(Budget b, std::size_t depth) {
  return "L=" + std::to_string(b.max_len) + " t=" + std::to_string(b.fuel) + " depth " + std::to_string(depth);
}

Verdict split_sum(const ApproxTable& u) {
  const std::uint64_t n = indices_within_length(kBudget.max_len);
  const ComparisonReport r =
      compare_tables("split-sum", u, mixture_table(default_scheme(n), kDepth, kBudget), Relation::Equal);
  return {r.passed() && r.rows.size() == 30, std::to_string(r.rows.size()) + " strings, " +
                                                 std::to_string(r.violations().size()) + " discrepancies over N=" +
                                                 std::to_string(n) + " machines, " + budget_text(kBudget, kDepth)};
}

Verdict mixture_to_machine() {
  // the default weights on 0..7 and a hand-picked dyadic scheme on the same machines
  WeightScheme custom;
  const char* weights[] = {"1/4", "1/8", "1/8", "1/16", "1/16", "3/32", "1/32", "5/64"};
  for (std::uint64_t i = 0; i < 8; ++i) custom.machines.push_back({i, DyadicRational::parse(weights[i])});
  std::size_t bad = 0, rows = 0, codewords = 0;
  for (const WeightScheme& s : {default_scheme(8), custom}) {
    const ComparisonReport r = kc_verify(s, kDepth, kBudget);
    bad += r.violations().size();
    rows += r.rows.size();
    const SynthesizedUniversal u = synthesize_universal(s);
    codewords += u.entries().size();
    std::vector<BitString> codes;
    for (const auto& e : u.entries()) codes.push_back(e.codeword);
    if (!is_prefix_free(codes)) ++bad;
  }
  return {bad == 0, "2 schemes over N=8, " + std::to_string(codewords) + " codewords, " + std::to_string(rows) +
                        " comparisons, " + std::to_string(bad) + " discrepancies, " + budget_text(kBudget, kDepth)};
}

Verdict dominance(const ApproxTable& u) {
  const std::uint64_t n = indices_within_length(kBudget.max_len);
  std::size_t bad = 0;
  for (std::uint64_t j = 0; j < n; ++j) bad += dominance_check(j, u).report.violations().size();
  return {bad == 0, std::to_string(n) + " machines, " + std::to_string(bad) + " violations, " + budget_text(kBudget, kDepth)};
}

Verdict semimeasure_and_monotone() {
  std::mt19937_64 rng(20240401);
  const Budget ladder[] = {{4, 16}, {6, 32}, {8, 64}};
  std::size_t semimeasure_bad = 0, monotone_bad = 0;
  for (int it = 0; it < 200; ++it) {
    const MachineSpec m = oracle::random_machine(rng, 3);
    std::vector<ApproxTable> tables;
    for (const Budget& b : ladder) {
      tables.push_back(tabulate(m, kDepth, b));
      semimeasure_bad += check_semimeasure(tables.back()).size();
    }
    for (std::size_t k = 1; k < tables.size(); ++k) {
      for (const auto& [x, v] : tables[k - 1].values) {
        if (v > tables[k].at(x)) ++monotone_bad;
      }
    }
  }
  return {semimeasure_bad == 0 && monotone_bad == 0,
          "200 machines, " + std::to_string(semimeasure_bad) + " semimeasure violations, " +
              std::to_string(monotone_bad) + " monotonicity violations, ladder (4,16) (6,32) (8,64), depth 4"};
}

Verdict oracle_equivalence() {
  std::mt19937_64 rng(20240402);
  const Budget b{10, 64};
  std::size_t bad = 0, checked = 0;
  for (int it = 0; it < 50; ++it) {
    const MachineSpec m = oracle::random_machine(rng, 3);
    const auto naive = oracle::naive_table(oracle::runner(m), kDepth, b);
    const ApproxTable t = tabulate(m, kDepth, b);
    for (const auto& [x, v] : naive) {
      ++checked;
      if (approx_lambda(m, x, b) != v || t.at(x) != v) ++bad;
    }
  }
  return {bad == 0, "50 machines, " + std::to_string(checked) + " values, " + std::to_string(bad) +
                        " discrepancies, " + budget_text(b, kDepth)};
}

Verdict kraft_chaitin() {
  std::mt19937_64 rng(20240403);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  std::uniform_int_distribution<std::size_t> count(1, 16);
  std::size_t bad = 0, within = 0, over = 0;

  // sequences with total mass <= 1: every request must succeed
  while (within < 1000) {
    const std::size_t n = count(rng);
    std::vector<std::size_t> seq;
    DyadicRational mass;
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t k = len(rng);
      const DyadicRational next = mass + DyadicRational::pow2_neg(static_cast<std::uint32_t>(k));
      if (next > DyadicRational(1)) continue;
      seq.push_back(k);
      mass = next;
    }
    ++within;
    KraftAllocator a;
    for (std::size_t k : seq) {
      const auto got = a.try_request(k);
      if (!got || got->size() != k || !a.conserved()) ++bad;
    }
    if (!is_prefix_free(a.issued())) ++bad;
  }

  // sequences whose total exceeds 1: the first failure must be the first
  // request the brute-force oracle calls infeasible
  while (over < 1000) {
    std::vector<std::size_t> seq;
    DyadicRational mass;
    while (seq.size() < 16) {
      const std::size_t k = 1 + rng() % 4;
      seq.push_back(k);
      mass += DyadicRational::pow2_neg(static_cast<std::uint32_t>(k));
      if (mass > DyadicRational(1) && rng() % 2 == 0) break;
    }
    if (mass <= DyadicRational(1)) continue;
    ++over;
    KraftAllocator a;
    std::vector<BitString> issued;
    std::optional<std::size_t> first_infeasible;
    for (std::size_t r = 0; r < seq.size(); ++r) {
      const bool feasible = oracle::feasible(issued, seq[r]);
      if (!feasible) {
        first_infeasible = r;
        if (a.try_request(seq[r])) ++bad;
        if (!a.conserved()) ++bad;
        break;
      }
      const auto got = a.try_request(seq[r]);
      if (!got || got->size() != seq[r] || !a.conserved()) {
        ++bad;
        break;
      }
      issued.push_back(*got);
    }
    if (!first_infeasible) ++bad;
    if (!is_prefix_free(a.issued())) ++bad;
  }
  return {bad == 0, std::to_string(within) + " sequences with sum <= 1, " + std::to_string(over) +
                        " with sum > 1, " + std::to_string(bad) + " failures"};
}

Verdict delta_prime() {
  const WeightScheme base = default_scheme(indices_within_length(kBudget.max_len));
  const ApproxTable dp = delta_prime_table(mixture_table(base, kDepth, kBudget));
  const GapReport gaps = gap_report(dp, DyadicRational::pow2_neg(4));
  const bool root_zero = gaps.row(BitString{})->gap.is_zero();
  std::size_t covered = 0, bad = 0;
  for (const auto& m : base.machines) {
    const auto d = delta_prime_dominance_check(base, m.index, dp);
    if (!d) continue;
    ++covered;
    if (d->constant != m.weight.half()) ++bad;
    bad += d->report.violations().size();
  }
  const bool flagged = gaps.verdict().starts_with("not-a-mixture");
  const bool ok = root_zero && flagged && bad == 0 && covered == base.size() && check_semimeasure(dp).empty();
  return {ok, std::string("root gap ") + (root_zero ? "0" : "nonzero") + ", " + std::to_string(covered) +
                  " covered machines, " + std::to_string(bad) + " dominance violations, verdict \"" +
                  gaps.verdict() + "\", " + budget_text(kBudget, kDepth)};
}

Verdict kraft_sums() {
  std::ostringstream detail;
  bool ok = true;
  DyadicRational prev;
  for (std::uint64_t n : {1, 10, 100, 1000}) {
    const DyadicRational closed = kraft_partial_sum(n);
    const DyadicRational brute = oracle::kraft_sum_bruteforce(n);
    ok = ok && closed == brute && closed <= DyadicRational(1) && closed > prev;
    prev = closed;
    detail << "N=" << n << ": " << closed << (closed == brute ? "" : " (brute force differs)") << "; ";
  }
  std::string d = detail.str();
  d.resize(d.size() - 2);
  return {ok, d};
}

}  // namespace

int main() {
  std::printf("building the universal table (%s)\n", budget_text(kBudget, kDepth).c_str());
  std::fflush(stdout);
  const ApproxTable u = universal_table(kDepth, kBudget);

  bool ok = true;
  ok &= report(1, "split-sum identity", [&] { return split_sum(u); });
  ok &= report(2, "mixture-to-machine identity", mixture_to_machine);
  ok &= report(3, "dominance", [&] { return dominance(u); });
  ok &= report(4, "semimeasure and monotone convergence", semimeasure_and_monotone);
  ok &= report(5, "oracle equivalence", oracle_equivalence);
  ok &= report(6, "Kraft-Chaitin allocator", kraft_chaitin);
  ok &= report(7, "delta' counterexample", delta_prime);
  ok &= report(8, "Kraft sum of the index code", kraft_sums);
  return ok ? 0 : 1;
}
