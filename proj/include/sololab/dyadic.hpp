#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "sololab/errors.hpp"

namespace sololab {

using BigInt = boost::multiprecision::cpp_int;

/// Exact number of the form mantissa * 2^-exponent.
///
/// Canonical form: the mantissa is odd, or the exponent is zero. Every
/// operation renormalizes, so equal values compare equal field-by-field.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long long value) : mantissa_(value) {}  // NOLINT(google-explicit-constructor)
  DyadicRational(BigInt mantissa, std::uint32_t exponent)
      : mantissa_(std::move(mantissa)), exponent_(exponent) {
    normalize();
  }

  /// 2^-k.
  static DyadicRational pow2_neg(std::uint32_t k) { return {BigInt(1), k}; }

  /// Accepts "m/2^e", "p/q" with q a power of two, a plain integer, or a
  /// finite decimal such as "0.625". Anything not exactly dyadic throws
  /// NonDyadicWeight.
  static DyadicRational parse(std::string_view text);

  [[nodiscard]] const BigInt& mantissa() const noexcept { return mantissa_; }
  [[nodiscard]] std::uint32_t exponent() const noexcept { return exponent_; }

  [[nodiscard]] bool is_zero() const noexcept { return mantissa_.is_zero(); }
  [[nodiscard]] int sign() const noexcept { return mantissa_.sign(); }

  [[nodiscard]] DyadicRational half() const { return {mantissa_, exponent_ + 1}; }
  [[nodiscard]] DyadicRational scaled_pow2_neg(std::uint32_t k) const { return {mantissa_, exponent_ + k}; }

  DyadicRational& operator+=(const DyadicRational& rhs) {
    align_add(rhs, false);
    return *this;
  }
  DyadicRational& operator-=(const DyadicRational& rhs) {
    align_add(rhs, true);
    return *this;
  }
  DyadicRational& operator*=(const DyadicRational& rhs) {
    mantissa_ *= rhs.mantissa_;
    exponent_ += rhs.exponent_;
    normalize();
    return *this;
  }
  friend DyadicRational operator+(DyadicRational a, const DyadicRational& b) { return a += b; }
  friend DyadicRational operator-(DyadicRational a, const DyadicRational& b) { return a -= b; }
  friend DyadicRational operator*(DyadicRational a, const DyadicRational& b) { return a *= b; }
  friend DyadicRational operator-(DyadicRational a) {
    a.mantissa_ = -a.mantissa_;
    return a;
  }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
    const std::uint32_t e = std::max(a.exponent_, b.exponent_);
    const BigInt lhs = a.mantissa_ << (e - a.exponent_);
    const BigInt rhs = b.mantissa_ << (e - b.exponent_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "m" when the exponent is zero, otherwise "m/2^e".
  [[nodiscard]] std::string to_string() const {
    if (exponent_ == 0) return mantissa_.str();
    return mantissa_.str() + "/2^" + std::to_string(exponent_);
  }

  /// For human-facing logs only.
  [[nodiscard]] double to_double() const {
    return std::ldexp(static_cast<double>(mantissa_), -static_cast<int>(exponent_));
  }

  friend std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.to_string(); }

 private:
  void normalize() {
    if (mantissa_.is_zero()) {
      exponent_ = 0;
      return;
    }
    if (exponent_ == 0) return;
    const auto trailing = static_cast<std::uint32_t>(boost::multiprecision::lsb(abs(mantissa_)));
    const std::uint32_t shift = std::min(trailing, exponent_);
    mantissa_ >>= shift;  // exact: only zero bits are dropped
    exponent_ -= shift;
  }

  void align_add(const DyadicRational& rhs, bool subtract) {
    if (exponent_ < rhs.exponent_) {
      mantissa_ <<= (rhs.exponent_ - exponent_);
      exponent_ = rhs.exponent_;
    }
    BigInt other = rhs.mantissa_ << (exponent_ - rhs.exponent_);
    if (subtract) {
      mantissa_ -= other;
    } else {
      mantissa_ += other;
    }
    normalize();
  }

  BigInt mantissa_{0};
  std::uint32_t exponent_{0};
};

namespace detail {

inline BigInt parse_bigint(std::string_view text, std::string_view whole) {
  if (text.empty()) throw NonDyadicWeight("malformed number '" + std::string(whole) + "'");
  bool neg = false;
  if (text.front() == '-' || text.front() == '+') {
    neg = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw NonDyadicWeight("malformed number '" + std::string(whole) + "'");
  BigInt value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw NonDyadicWeight("malformed number '" + std::string(whole) + "'");
    value = value * 10 + (c - '0');
  }
  return neg ? BigInt(-value) : value;
}

/// log2(q) when q is a positive power of two.
inline std::optional<std::uint32_t> exact_log2(const BigInt& q) {
  if (q <= 0) return std::nullopt;
  const auto bit = static_cast<std::uint32_t>(boost::multiprecision::lsb(q));
  if (q != (BigInt(1) << bit)) return std::nullopt;
  return bit;
}

/// Reduce p/q and require the reduced denominator to be a power of two.
inline DyadicRational dyadic_from_fraction(BigInt p, BigInt q, std::string_view whole) {
  if (q.is_zero()) throw NonDyadicWeight("zero denominator in '" + std::string(whole) + "'");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const BigInt g = boost::multiprecision::gcd(abs(p), q);
  if (!g.is_zero()) {
    p /= g;
    q /= g;
  }
  if (p.is_zero()) return {};
  const auto e = exact_log2(q);
  if (!e) throw NonDyadicWeight("'" + std::string(whole) + "' is not a dyadic rational");
  return {p, *e};
}

}  // namespace detail

inline DyadicRational DyadicRational::parse(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt p = detail::parse_bigint(text.substr(0, slash), whole);
    std::string_view den = text.substr(slash + 1);
    if (den.starts_with("2^")) {
      const BigInt e = detail::parse_bigint(den.substr(2), whole);
      if (e < 0 || e > 1'000'000) throw NonDyadicWeight("bad exponent in '" + std::string(whole) + "'");
      return {p, static_cast<std::uint32_t>(e)};
    }
    return detail::dyadic_from_fraction(p, detail::parse_bigint(den, whole), whole);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    const std::string_view frac = text.substr(dot + 1);
    digits += frac;
    BigInt q = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) q *= 10;
    return detail::dyadic_from_fraction(detail::parse_bigint(digits, whole), q, whole);
  }
  return {detail::parse_bigint(text, whole), 0};
}

}  // namespace sololab
