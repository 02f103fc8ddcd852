#pragma once

#include <json.hpp>

#include "sololab/bitstring.hpp"
#include "sololab/dyadic.hpp"

namespace sololab {

using Json = nlohmann::ordered_json;

/// Dyadic values are written as integer pairs, never as floating point.
/// The mantissa is a decimal string because it may exceed 64 bits.
inline Json to_json(const DyadicRational& d) {
  return Json{{"mantissa", d.mantissa().str()}, {"exponent", d.exponent()}};
}

inline DyadicRational dyadic_from_json(const Json& j) {
  const std::string m = j.at("mantissa").is_string() ? j.at("mantissa").get<std::string>()
                                                     : std::to_string(j.at("mantissa").get<long long>());
  return {BigInt(m), j.at("exponent").get<std::uint32_t>()};
}

}  // namespace sololab
