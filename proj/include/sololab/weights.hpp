#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sololab/dyadic.hpp"
#include "sololab/errors.hpp"
#include "sololab/json_io.hpp"
#include "sololab/machine_enum.hpp"

namespace sololab {

struct WeightedMachine {
  MachineIndex index;
  DyadicRational weight;
};

/// Finite dyadic weights over enumerated machines. The default scheme puts
/// w_i = 2^-|I(i)| on machines 0..N-1; custom schemes may name any indices.
struct WeightScheme {
  std::vector<WeightedMachine> machines;

  [[nodiscard]] std::size_t size() const noexcept { return machines.size(); }

  [[nodiscard]] DyadicRational total() const {
    DyadicRational sum;
    for (const auto& m : machines) sum += m.weight;
    return sum;
  }

  /// Kraft certificate: every weight positive and the exact sum at most 1.
  /// Throws InvalidWeights.
  void validate() const {
    if (machines.empty()) throw InvalidWeights("weight scheme is empty");
    for (std::size_t k = 0; k < machines.size(); ++k) {
      if (machines[k].index < 0) throw InvalidWeights("negative machine index at entry " + std::to_string(k));
      if (machines[k].weight.sign() <= 0) {
        throw InvalidWeights("weight of machine " + machines[k].index.str() + " is not positive");
      }
    }
    const DyadicRational sum = total();
    if (sum > DyadicRational(1)) throw InvalidWeights("weights sum to " + sum.to_string() + " > 1");
  }
};

inline WeightScheme default_scheme(std::uint64_t n) {
  WeightScheme s;
  s.machines.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    s.machines.push_back({MachineIndex(i), DyadicRational::pow2_neg(static_cast<std::uint32_t>(code_I_length(i)))});
  }
  return s;
}

/// Binary expansion of a dyadic weight in (0, 1]: the lengths k with a set
/// bit at 2^-k, ascending. 5/8 -> {1, 3}; 1 -> {0}.
inline std::vector<std::uint32_t> dyadic_lengths(const DyadicRational& w) {
  if (w.sign() <= 0) throw InvalidWeights("weight " + w.to_string() + " is not positive");
  if (w > DyadicRational(1)) throw InvalidWeights("weight " + w.to_string() + " exceeds 1");
  std::vector<std::uint32_t> lengths;
  const BigInt& m = w.mantissa();
  const auto e = w.exponent();
  for (auto b = static_cast<std::uint32_t>(boost::multiprecision::msb(m)) + 1; b-- > 0;) {
    if (boost::multiprecision::bit_test(m, b)) lengths.push_back(e - b);
  }
  return lengths;
}

/// {"machines": [{"index": "<decimal>", "weight": "<dyadic>"}, ...]}
inline Json to_json(const WeightScheme& s) {
  Json list = Json::array();
  for (const auto& m : s.machines) list.push_back(Json{{"index", m.index.str()}, {"weight", m.weight.to_string()}});
  return Json{{"machines", std::move(list)}};
}

/// Accepts the to_json layout. Index may be a JSON integer or decimal string;
/// weight a JSON string in any form DyadicRational::parse accepts, or an
/// integer. Throws NonDyadicWeight / InvalidWeights.
inline WeightScheme scheme_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("machines") || !j.at("machines").is_array()) {
    throw InvalidWeights("weights file must be an object with a 'machines' array");
  }
  WeightScheme s;
  for (const Json& row : j.at("machines")) {
    if (!row.is_object() || !row.contains("index") || !row.contains("weight")) {
      throw InvalidWeights("each machine entry needs 'index' and 'weight'");
    }
    const Json& idx = row.at("index");
    MachineIndex index;
    if (idx.is_number_unsigned()) {
      index = idx.get<std::uint64_t>();
    } else if (idx.is_string()) {
      const auto text = idx.get<std::string>();
      if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw InvalidWeights("bad machine index '" + text + "'");
      }
      index = MachineIndex(text);
    } else {
      throw InvalidWeights("machine index must be a non-negative integer");
    }
    const Json& w = row.at("weight");
    DyadicRational weight;
    if (w.is_string()) {
      weight = DyadicRational::parse(w.get<std::string>());
    } else if (w.is_number_integer()) {
      weight = DyadicRational(w.get<long long>());
    } else {
      throw NonDyadicWeight("weight must be a string such as \"3/8\"; floating point is not accepted");
    }
    s.machines.push_back({std::move(index), std::move(weight)});
  }
  s.validate();
  return s;
}

}  // namespace sololab
