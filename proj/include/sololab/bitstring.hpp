#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sololab {

/// Finite binary string. Used for programs, outputs and codewords.
///
/// Stored as a string of '0'/'1' characters; the empty string is epsilon.
/// The natural `operator<` is plain lexicographic order; use ShortlexLess
/// where the enumeration order (epsilon, 0, 1, 00, 01, ...) is wanted.
class BitString {
 public:
  BitString() = default;

  static BitString parse(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') {
        throw std::invalid_argument("not a binary string: '" + std::string(text) + "'");
      }
      out.bits_.push_back(c);
    }
    return out;
  }

  /// Lowest `width` bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t width) {
    BitString out;
    out.bits_.resize(width, '0');
    for (std::size_t k = 0; k < width; ++k) {
      if ((value >> k) & 1U) out.bits_[width - 1 - k] = '1';
    }
    return out;
  }

  static BitString repeat(bool bit, std::size_t count) {
    BitString out;
    out.bits_.assign(count, bit ? '1' : '0');
    return out;
  }

  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
  [[nodiscard]] bool operator[](std::size_t k) const noexcept { return bits_[k] == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void pop_back() { bits_.pop_back(); }
  void reserve(std::size_t n) { bits_.reserve(n); }

  [[nodiscard]] BitString prefix(std::size_t n) const {
    BitString out;
    out.bits_ = bits_.substr(0, n);
    return out;
  }

  [[nodiscard]] BitString suffix_from(std::size_t n) const {
    BitString out;
    if (n < bits_.size()) out.bits_ = bits_.substr(n);
    return out;
  }

  /// True when *this is a (not necessarily proper) prefix of `other`.
  [[nodiscard]] bool is_prefix_of(const BitString& other) const noexcept {
    return bits_.size() <= other.bits_.size() &&
           other.bits_.compare(0, bits_.size(), bits_) == 0;
  }

  /// Prefix-comparable: one is a prefix of the other.
  [[nodiscard]] bool comparable_with(const BitString& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  BitString& operator+=(const BitString& rhs) {
    bits_ += rhs.bits_;
    return *this;
  }
  friend BitString operator+(BitString lhs, const BitString& rhs) { return lhs += rhs; }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString& a, const BitString& b) { return a.bits_ <=> b.bits_; }

  [[nodiscard]] const std::string& str() const noexcept { return bits_; }

  /// Printable form; epsilon prints as "ε" here but as "" in str().
  [[nodiscard]] std::string display() const { return bits_.empty() ? std::string("ε") : bits_; }

 private:
  std::string bits_;
};

struct ShortlexLess {
  bool operator()(const BitString& a, const BitString& b) const noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// All strings of length <= depth in shortlex order.
inline std::vector<BitString> strings_up_to(std::size_t depth) {
  std::vector<BitString> out;
  for (std::size_t len = 0; len <= depth; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      out.push_back(BitString::from_uint(v, len));
    }
  }
  return out;
}

}  // namespace sololab

template <>
struct std::hash<sololab::BitString> {
  std::size_t operator()(const sololab::BitString& b) const noexcept {
    return std::hash<std::string>{}(b.str());
  }
};
