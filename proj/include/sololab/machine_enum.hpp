#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>

#include "sololab/bitstring.hpp"
#include "sololab/dyadic.hpp"
#include "sololab/errors.hpp"
#include "sololab/tm_core.hpp"

// Canonical numbering of machine specs, the self-delimiting index code
// I(i) = 1^k 0 s, and the universal dispatcher U(I(i) p) = T_i(p).
//
// Numbering: machines with fewer states come first. Among n-state machines
// the index is a little-endian mixed-radix number over the table entries,
// taken in the order (0,B), (0,0), (0,1), (1,B), (1,0), ... so the start
// entry (0,B) is the least significant digit. Each digit is the rank of an
// Action among the A(n) = S(n)^2 + S(n) actions, where S(n) = 27 (n+1)
// counts sub-actions:
//
//   sub rank    = ((next * 3 + write) * 3 + move) * 3 + emit
//                 next in 0..n-1 then H; write 0,1,B; move L,R,S; emit 0,1,-
//   action rank = sub0 * S + sub1        for read actions
//               = S^2 + sub               for noread actions

namespace sololab {

using MachineIndex = BigInt;

namespace detail {

inline std::uint64_t subaction_count(std::size_t n) { return 27 * (static_cast<std::uint64_t>(n) + 1); }
inline std::uint64_t action_count(std::size_t n) {
  const std::uint64_t s = subaction_count(n);
  return s * s + s;
}

/// Number of distinct n-state specs.
inline BigInt table_count(std::size_t n) { return boost::multiprecision::pow(BigInt(action_count(n)), static_cast<unsigned>(3 * n)); }

inline std::uint64_t subaction_rank(const SubAction& s, std::size_t n) {
  const std::uint64_t next = s.next == kHalt ? n : s.next;
  return ((next * 3 + static_cast<std::uint64_t>(s.write)) * 3 + static_cast<std::uint64_t>(s.move)) * 3 +
         static_cast<std::uint64_t>(s.emit);
}

inline SubAction subaction_from_rank(std::uint64_t r, std::size_t n) {
  SubAction s;
  s.emit = static_cast<Emit>(r % 3);
  r /= 3;
  s.move = static_cast<Move>(r % 3);
  r /= 3;
  s.write = static_cast<Symbol>(r % 3);
  r /= 3;
  s.next = r == n ? kHalt : static_cast<StateId>(r);
  return s;
}

inline std::uint64_t action_rank(const Action& a, std::size_t n) {
  const std::uint64_t s = subaction_count(n);
  if (a.reads()) return subaction_rank(a.branch(false), n) * s + subaction_rank(a.branch(true), n);
  return s * s + subaction_rank(a.only(), n);
}

inline Action action_from_rank(std::uint64_t r, std::size_t n) {
  const std::uint64_t s = subaction_count(n);
  if (r < s * s) return Action::read(subaction_from_rank(r / s, n), subaction_from_rank(r % s, n));
  return Action::noread(subaction_from_rank(r - s * s, n));
}

/// Table slot of the d-th digit: (state d/3, symbol B,0,1 for d%3 = 0,1,2).
inline std::size_t digit_slot(std::size_t d) {
  const std::size_t state = d / kNumSymbols;
  const std::size_t col = d % kNumSymbols;
  const Symbol sym = col == 0 ? Symbol::Blank : col == 1 ? Symbol::Zero : Symbol::One;
  return state * kNumSymbols + static_cast<std::size_t>(sym);
}

}  // namespace detail

/// Index of `spec` in the canonical enumeration (0-based).
inline MachineIndex encode_machine(const MachineSpec& spec) {
  const std::size_t n = spec.num_states();
  BigInt offset = 0;
  for (std::size_t m = 1; m < n; ++m) offset += detail::table_count(m);
  const BigInt radix = detail::action_count(n);
  BigInt rank = 0;
  for (std::size_t d = 3 * n; d-- > 0;) {
    rank = rank * radix + detail::action_rank(spec.table()[detail::digit_slot(d)], n);
  }
  return offset + rank;
}

/// Inverse of encode_machine. Every non-negative index names exactly one spec.
inline MachineSpec decode_machine(MachineIndex index) {
  if (index < 0) throw Error("machine index must be non-negative");
  std::size_t n = 1;
  for (BigInt count = detail::table_count(n); index >= count; count = detail::table_count(++n)) index -= count;
  const BigInt radix = detail::action_count(n);
  std::vector<Action> table(3 * n);
  for (std::size_t d = 0; d < 3 * n; ++d) {
    const auto digit = static_cast<std::uint64_t>(index % radix);
    index /= radix;
    table[detail::digit_slot(d)] = detail::action_from_rank(digit, n);
  }
  return MachineSpec(n, std::move(table));
}

/// I(i) = 1^k 0 s, where s is the i-th string in shortlex order and k = |s|.
inline BitString code_I(const MachineIndex& i) {
  if (i < 0) throw Error("machine index must be non-negative");
  const BigInt shifted = i + 1;
  const auto k = static_cast<std::size_t>(boost::multiprecision::msb(shifted));
  const BigInt payload = shifted - (BigInt(1) << k);
  BitString out = BitString::repeat(true, k);
  out.push_back(false);
  for (std::size_t b = k; b-- > 0;) out.push_back(boost::multiprecision::bit_test(payload, static_cast<unsigned>(b)));
  return out;
}

/// Length of I(i) without materializing it: 2 floor(log2(i+1)) + 1.
inline std::size_t code_I_length(const MachineIndex& i) {
  return 2 * static_cast<std::size_t>(boost::multiprecision::msb(BigInt(i + 1))) + 1;
}

struct DecodedIndex {
  MachineIndex index;
  BitString remainder;
};

/// Strip one codeword of I from the front of `bits`. Throws IncompleteCode.
inline DecodedIndex decode_I(const BitString& bits) {
  std::size_t k = 0;
  while (k < bits.size() && bits[k]) ++k;
  if (k == bits.size()) throw IncompleteCode("no terminating 0 after " + std::to_string(k) + " leading 1s");
  if (bits.size() < 2 * k + 1) {
    throw IncompleteCode("payload needs " + std::to_string(k) + " bits, have " + std::to_string(bits.size() - k - 1));
  }
  BigInt index = (BigInt(1) << k) - 1;
  BigInt payload = 0;
  for (std::size_t b = k + 1; b < 2 * k + 1; ++b) payload = (payload << 1) + (bits[b] ? 1 : 0);
  return {index + payload, bits.suffix_from(2 * k + 1)};
}

/// Number of indices whose codeword fits in `max_len` bits.
inline std::uint64_t indices_within_length(std::size_t max_len) {
  if (max_len == 0) return 0;
  const std::size_t kmax = (max_len - 1) / 2;
  if (kmax >= 63) throw Error("length budget too large to enumerate");
  return (std::uint64_t{1} << (kmax + 1)) - 1;
}

/// Closed form of sum_{i<N} 2^-|I(i)|. Codewords with payload length k carry
/// total mass 2^-(k+1), so with K = floor(log2(N+1)) and r = N - (2^K - 1):
/// 1 - 2^-K + r 2^-(2K+1).
inline DyadicRational kraft_partial_sum(std::uint64_t n) {
  const auto big_k = static_cast<std::uint32_t>(boost::multiprecision::msb(BigInt(n) + 1));
  const BigInt r = BigInt(n) - ((BigInt(1) << big_k) - 1);
  return DyadicRational(1) - DyadicRational::pow2_neg(big_k) + DyadicRational(r, 2 * big_k + 1);
}

/// Result of feeding one codeword bit to a dispatcher decoder.
struct DecodeStep {
  enum class Kind { NeedMore, Done, Reject } kind = Kind::NeedMore;
  std::shared_ptr<const MachineSpec> machine;  // set when kind == Done
};

/// Dispatcher over a prefix code: reads codeword bits (at zero fuel cost),
/// then runs the selected machine on the rest of the input. Codeword bits
/// count toward consumed(). A rejected codeword yields no output.
///
/// Decoder must provide `DecodeStep push(bool)`.
template <class Decoder>
class DispatchExecution {
 public:
  explicit DispatchExecution(Decoder decoder) : decoder_(std::move(decoder)) {}

  /// Only valid for decoders that accept the empty codeword.
  DispatchExecution(Decoder decoder, std::shared_ptr<const MachineSpec> machine) : decoder_(std::move(decoder)) {
    select(std::move(machine));
  }

  ExecStatus resume(std::uint64_t fuel, std::size_t stop_at_output = std::numeric_limits<std::size_t>::max()) {
    for (;;) {
      if (inner_) return status_ = inner_->resume(fuel, stop_at_output);
      if (rejected_) return status_ = ExecStatus::Halted;
      if (empty_output().size() >= stop_at_output) return status_ = ExecStatus::Running;
      if (!has_pending_) return status_ = ExecStatus::AwaitingInput;
      has_pending_ = false;
      ++code_bits_;
      DecodeStep step = decoder_.push(pending_);
      if (step.kind == DecodeStep::Kind::Reject) {
        rejected_ = true;
      } else if (step.kind == DecodeStep::Kind::Done) {
        select(std::move(step.machine));
      }
    }
  }

  void feed(bool bit) {
    if (inner_) {
      inner_->feed(bit);
    } else {
      pending_ = bit;
      has_pending_ = true;
    }
    if (status_ == ExecStatus::AwaitingInput) status_ = ExecStatus::Running;
  }

  [[nodiscard]] const BitString& output() const noexcept { return inner_ ? inner_->output() : empty_output(); }
  [[nodiscard]] std::size_t consumed() const noexcept { return code_bits_ + (inner_ ? inner_->consumed() : 0); }
  [[nodiscard]] ExecStatus status() const noexcept { return status_; }
  [[nodiscard]] bool selected() const noexcept { return inner_.has_value(); }
  [[nodiscard]] const Decoder& decoder() const noexcept { return decoder_; }

 private:
  static const BitString& empty_output() {
    static const BitString kEmpty;
    return kEmpty;
  }

  void select(std::shared_ptr<const MachineSpec> machine) {
    machine_ = std::move(machine);
    inner_.emplace(*machine_);
  }

  Decoder decoder_;
  std::shared_ptr<const MachineSpec> machine_;
  std::optional<Execution> inner_;  // points into *machine_, which copies share
  std::size_t code_bits_ = 0;
  bool pending_ = false;
  bool has_pending_ = false;
  bool rejected_ = false;
  ExecStatus status_ = ExecStatus::Running;
};

/// Incremental decoder for I. Never rejects: every bit string is either a
/// codeword prefix or has one as a prefix.
class IndexCodeDecoder {
 public:
  DecodeStep push(bool bit) {
    if (!seen_zero_) {
      if (bit) {
        ++ones_;
      } else {
        seen_zero_ = true;
        payload_ = 0;
      }
    } else {
      payload_ = (payload_ << 1) + (bit ? 1 : 0);
      ++payload_bits_;
    }
    if (seen_zero_ && payload_bits_ == ones_) {
      index_ = ((BigInt(1) << ones_) - 1) + payload_;
      return {DecodeStep::Kind::Done, std::make_shared<const MachineSpec>(decode_machine(*index_))};
    }
    return {};
  }

  /// Set once the codeword is complete.
  [[nodiscard]] const std::optional<MachineIndex>& index() const noexcept { return index_; }

 private:
  std::size_t ones_ = 0;
  std::size_t payload_bits_ = 0;
  bool seen_zero_ = false;
  BigInt payload_ = 0;
  std::optional<MachineIndex> index_;
};

using UniversalExecution = DispatchExecution<IndexCodeDecoder>;

inline UniversalExecution universal_execution() { return UniversalExecution(IndexCodeDecoder{}); }

/// U(I(i) p) = T_i(p). Codeword decoding is free in fuel.
inline RunResult universal_run(const BitString& input, std::uint64_t fuel) {
  return drive(universal_execution(), input, fuel);
}

}  // namespace sololab
