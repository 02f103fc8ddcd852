#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sololab/bitstring.hpp"
#include "sololab/dyadic.hpp"
#include "sololab/errors.hpp"
#include "sololab/json_io.hpp"
#include "sololab/machine_enum.hpp"
#include "sololab/mixture.hpp"
#include "sololab/report.hpp"
#include "sololab/semimeasure.hpp"
#include "sololab/weights.hpp"

namespace sololab {

/// Online prefix-code allocation for the Kraft-Chaitin construction.
///
/// The unit interval is tracked as a set of free dyadic intervals, each named
/// by the bit string whose cylinder it is. A request for length k takes the
/// leftmost free interval of size >= 2^-k, issues its leftmost length-k
/// extension and returns the remainder as free intervals of sizes
/// 2^-k, ..., 2^-(m+1).
///
/// Starting from {[0,1)} this keeps the free intervals at pairwise distinct
/// sizes that increase from left to right, so the leftmost fit is also the
/// smallest fit, and a request fails only when the free mass is below 2^-k,
/// i.e. exactly when the requested total would exceed 1.
class KraftAllocator {
 public:
  KraftAllocator() { free_.emplace(BitString{}); }

  /// Length-k codeword, prefix-free with everything issued so far.
  /// k = 0 succeeds only on a fresh allocator. Throws KraftExhausted.
  BitString request(std::size_t k) {
    auto got = try_request(k);
    if (!got) {
      throw KraftExhausted("no free interval of size 2^-" + std::to_string(k) + " (free mass " + free_mass().to_string() +
                           ")");
    }
    return *std::move(got);
  }

  std::optional<BitString> try_request(std::size_t k) {
    auto it = free_.begin();
    while (it != free_.end() && it->size() > k) ++it;
    if (it == free_.end()) return std::nullopt;
    const BitString base = *it;
    free_.erase(it);
    for (std::size_t j = base.size() + 1; j <= k; ++j) {
      BitString piece = base + BitString::repeat(false, j - base.size() - 1);
      piece.push_back(true);
      free_.insert(std::move(piece));
    }
    BitString sigma = base + BitString::repeat(false, k - base.size());
    issued_.push_back(sigma);
    return sigma;
  }

  [[nodiscard]] const std::vector<BitString>& issued() const noexcept { return issued_; }

  /// Free intervals in left-to-right order.
  [[nodiscard]] std::vector<BitString> free_intervals() const { return {free_.begin(), free_.end()}; }

  [[nodiscard]] DyadicRational issued_mass() const { return mass(issued_); }
  [[nodiscard]] DyadicRational free_mass() const { return mass(free_); }

  /// issued + free == 1, exactly.
  [[nodiscard]] bool conserved() const { return issued_mass() + free_mass() == DyadicRational(1); }

 private:
  template <class Range>
  static DyadicRational mass(const Range& r) {
    DyadicRational m;
    for (const BitString& b : r) m += DyadicRational::pow2_neg(static_cast<std::uint32_t>(b.size()));
    return m;
  }

  std::set<BitString> free_;  // lexicographic order of disjoint cylinders = order of left endpoints
  std::vector<BitString> issued_;
};

/// True when no string in `codes` is a prefix of another.
inline bool is_prefix_free(const std::vector<BitString>& codes) {
  for (std::size_t a = 0; a < codes.size(); ++a) {
    for (std::size_t b = a + 1; b < codes.size(); ++b) {
      if (codes[a].comparable_with(codes[b])) return false;
    }
  }
  return true;
}

struct WeightDecomposition {
  struct Entry {
    MachineIndex index;
    std::vector<std::uint32_t> lengths;  ///< k_ij, ascending; sum_j 2^-k_ij = w_i
  };
  std::vector<Entry> entries;
};

/// Each dyadic weight is the finite sum of the powers of two in its binary
/// expansion. Throws InvalidWeights for a scheme failing its Kraft
/// certificate.
inline WeightDecomposition decompose_weights(const WeightScheme& scheme) {
  scheme.validate();
  WeightDecomposition d;
  for (const auto& m : scheme.machines) d.entries.push_back({m.index, dyadic_lengths(m.weight)});
  return d;
}

struct DispatchEntry {
  BitString codeword;
  MachineIndex machine;
};

namespace detail {

/// Binary trie over a prefix-free codeword set; leaves hold the machine.
struct DispatchTrie {
  struct Node {
    std::int32_t child[2] = {-1, -1};
    std::shared_ptr<const MachineSpec> machine;
  };
  std::vector<Node> nodes{1};
};

}  // namespace detail

/// Incremental decoder walking the dispatch trie. Rejects as soon as the
/// bits read so far are not a prefix of any codeword.
class TableDecoder {
 public:
  explicit TableDecoder(std::shared_ptr<const detail::DispatchTrie> trie) : trie_(std::move(trie)) {}

  DecodeStep push(bool bit) {
    const std::int32_t next = trie_->nodes[node_].child[bit ? 1 : 0];
    if (next < 0) return {DecodeStep::Kind::Reject, nullptr};
    node_ = static_cast<std::size_t>(next);
    if (const auto& m = trie_->nodes[node_].machine) return {DecodeStep::Kind::Done, m};
    return {};
  }

 private:
  std::shared_ptr<const detail::DispatchTrie> trie_;
  std::size_t node_ = 0;
};

using SynthesizedExecution = DispatchExecution<TableDecoder>;

/// U'(sigma_ij p) = T_i(p) over an allocated dispatch table; inputs without
/// a table codeword prefix produce no output.
class SynthesizedUniversal {
 public:
  /// Throws Error if the codewords are not prefix-free.
  explicit SynthesizedUniversal(std::vector<DispatchEntry> entries) : entries_(std::move(entries)) {
    auto trie = std::make_shared<detail::DispatchTrie>();
    std::map<MachineIndex, std::shared_ptr<const MachineSpec>> specs;
    for (const auto& e : entries_) {
      std::size_t node = 0;
      for (std::size_t b = 0; b < e.codeword.size(); ++b) {
        if (trie->nodes[node].machine) throw Error("codeword " + e.codeword.display() + " extends another codeword");
        const int side = e.codeword[b] ? 1 : 0;
        if (trie->nodes[node].child[side] < 0) {
          trie->nodes[node].child[side] = static_cast<std::int32_t>(trie->nodes.size());
          trie->nodes.emplace_back();
        }
        node = static_cast<std::size_t>(trie->nodes[node].child[side]);
      }
      auto& leaf = trie->nodes[node];
      if (leaf.machine || leaf.child[0] >= 0 || leaf.child[1] >= 0) {
        throw Error("codeword " + e.codeword.display() + " is a prefix of, or equal to, another codeword");
      }
      auto& spec = specs[e.machine];
      if (!spec) spec = std::make_shared<const MachineSpec>(decode_machine(e.machine));
      leaf.machine = spec;
    }
    trie_ = std::move(trie);
  }

  [[nodiscard]] const std::vector<DispatchEntry>& entries() const noexcept { return entries_; }

  [[nodiscard]] SynthesizedExecution execution() const {
    if (const auto& root = trie_->nodes[0].machine) return SynthesizedExecution(TableDecoder(trie_), root);
    return SynthesizedExecution(TableDecoder(trie_));
  }

  [[nodiscard]] RunResult run(const BitString& input, std::uint64_t fuel) const { return drive(execution(), input, fuel); }

  [[nodiscard]] ApproxTable tabulate(std::size_t depth, Budget budget) const {
    return sololab::tabulate(execution(), depth, budget, "U'");
  }

 private:
  std::vector<DispatchEntry> entries_;
  std::shared_ptr<const detail::DispatchTrie> trie_;
};

/// Allocate a codeword of length k_ij for every atom of every weight, in
/// scheme order, and build the dispatcher. Throws InvalidWeights, or
/// KraftExhausted (unreachable for a scheme with a valid certificate).
inline SynthesizedUniversal synthesize_universal(const WeightScheme& scheme) {
  const WeightDecomposition d = decompose_weights(scheme);
  KraftAllocator alloc;
  std::vector<DispatchEntry> entries;
  for (const auto& e : d.entries) {
    for (std::uint32_t k : e.lengths) entries.push_back({alloc.request(k), e.index});
  }
  return SynthesizedUniversal(std::move(entries));
}

/// lambda_{U'} against the truncated mixture it was built from, x != epsilon.
inline ComparisonReport kc_verify(const WeightScheme& scheme, std::size_t depth, Budget budget) {
  const SynthesizedUniversal u = synthesize_universal(scheme);
  return compare_tables("mixture-to-machine", u.tabulate(depth, budget), mixture_table(scheme, depth, budget),
                        Relation::Equal);
}

/// {"dispatch": {"<codeword>": "<machine index>", ...}} in allocation order.
inline Json to_json(const SynthesizedUniversal& u) {
  Json table = Json::object();
  for (const auto& e : u.entries()) table[e.codeword.str()] = e.machine.str();
  return Json{{"dispatch", std::move(table)}};
}

inline SynthesizedUniversal synthesized_from_json(const Json& j) {
  std::vector<DispatchEntry> entries;
  for (const auto& [code, machine] : j.at("dispatch").items()) {
    entries.push_back({BitString::parse(code), MachineIndex(machine.get<std::string>())});
  }
  return SynthesizedUniversal(std::move(entries));
}

}  // namespace sololab
