#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sololab/bitstring.hpp"
#include "sololab/errors.hpp"

namespace sololab {

/// Work-tape alphabet {0, 1, B}. The numeric values double as table column
/// and enumeration rank.
enum class Symbol : std::uint8_t { Zero = 0, One = 1, Blank = 2 };
enum class Move : std::uint8_t { Left = 0, Right = 1, Stay = 2 };
/// Output of one step; at most one bit.
enum class Emit : std::uint8_t { Zero = 0, One = 1, None = 2 };

using StateId = std::uint32_t;
inline constexpr StateId kHalt = std::numeric_limits<StateId>::max();

inline constexpr std::size_t kNumSymbols = 3;

struct SubAction {
  Symbol write = Symbol::Blank;
  Move move = Move::Stay;
  Emit emit = Emit::None;
  StateId next = kHalt;

  friend bool operator==(const SubAction&, const SubAction&) = default;
};

/// What a (state, work symbol) pair does: either one SubAction, or read one
/// input bit and branch on it.
class Action {
 public:
  Action() = default;

  static Action noread(SubAction s) { return Action(false, s, s); }
  static Action read(SubAction on0, SubAction on1) { return Action(true, on0, on1); }

  [[nodiscard]] bool reads() const noexcept { return read_; }
  /// For a noread action the bit is ignored.
  [[nodiscard]] const SubAction& branch(bool bit) const noexcept { return bit ? on1_ : on0_; }
  [[nodiscard]] const SubAction& only() const noexcept { return on0_; }

  friend bool operator==(const Action&, const Action&) = default;

 private:
  Action(bool read, SubAction on0, SubAction on1) : read_(read), on0_(on0), on1_(on1) {}

  bool read_ = false;
  SubAction on0_{};
  SubAction on1_{};
};

/// Finite transition table of a monotone machine. Start state is 0, the
/// work tape starts blank and output is append-only.
class MachineSpec {
 public:
  /// `table[state * 3 + symbol]`. Throws Error unless the table is total
  /// and every next state is in range or kHalt.
  MachineSpec(std::size_t num_states, std::vector<Action> table)
      : num_states_(num_states), table_(std::move(table)) {
    if (num_states_ == 0) throw Error("a machine needs at least one state");
    if (table_.size() != num_states_ * kNumSymbols) {
      throw Error("transition table has " + std::to_string(table_.size()) + " entries, expected " +
                  std::to_string(num_states_ * kNumSymbols));
    }
    for (const Action& a : table_) {
      for (bool bit : {false, true}) {
        const StateId next = a.branch(bit).next;
        if (next != kHalt && next >= num_states_) {
          throw Error("next state " + std::to_string(next) + " out of range");
        }
      }
    }
  }

  [[nodiscard]] std::size_t num_states() const noexcept { return num_states_; }
  [[nodiscard]] const Action& action(StateId state, Symbol sym) const noexcept {
    return table_[state * kNumSymbols + static_cast<std::size_t>(sym)];
  }
  [[nodiscard]] const std::vector<Action>& table() const noexcept { return table_; }

  friend bool operator==(const MachineSpec&, const MachineSpec&) = default;

 private:
  std::size_t num_states_;
  std::vector<Action> table_;
};

enum class RunStatus { Halted, FuelExhausted, AwaitingInput };

struct RunResult {
  BitString output;
  std::size_t consumed = 0;
  RunStatus status = RunStatus::FuelExhausted;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return "Halted";
    case RunStatus::FuelExhausted: return "FuelExhausted";
    case RunStatus::AwaitingInput: return "AwaitingInput";
  }
  return "?";
}

/// Where a resumable execution stopped.
enum class ExecStatus {
  Running,        ///< stopped because the requested output length was reached
  Halted,
  FuelExhausted,
  AwaitingInput,  ///< next transition reads a bit that has not been fed yet
};

/// Resumable configuration of one machine.
///
/// Copying an Execution snapshots the configuration; the program-tree search
/// relies on this to branch at read points without re-simulating the prefix.
/// Holds a non-owning pointer to the spec.
class Execution {
 public:
  explicit Execution(const MachineSpec& spec) : spec_(&spec), tape_(16, Symbol::Blank), origin_(8) {}

  /// Run until the output reaches `stop_at_output` bits, the machine halts,
  /// `fuel` total steps have been used, or an unfed input bit is needed.
  ExecStatus resume(std::uint64_t fuel, std::size_t stop_at_output = std::numeric_limits<std::size_t>::max()) {
    if (status_ == ExecStatus::Halted) return status_;
    for (;;) {
      if (output_.size() >= stop_at_output) return status_ = ExecStatus::Running;
      if (steps_ >= fuel) return status_ = ExecStatus::FuelExhausted;
      const Action& action = spec_->action(state_, cell());
      bool bit = false;
      if (action.reads()) {
        if (!has_pending_) return status_ = ExecStatus::AwaitingInput;
        bit = pending_;
        has_pending_ = false;
        ++consumed_;
      }
      apply(action.branch(bit));
      ++steps_;
      if (state_ == kHalt) return status_ = ExecStatus::Halted;
    }
  }

  /// Supply the next input bit. At most one bit may be pending.
  void feed(bool bit) {
    pending_ = bit;
    has_pending_ = true;
    if (status_ == ExecStatus::AwaitingInput) status_ = ExecStatus::Running;
  }

  [[nodiscard]] const BitString& output() const noexcept { return output_; }
  [[nodiscard]] std::size_t consumed() const noexcept { return consumed_; }
  [[nodiscard]] std::uint64_t steps() const noexcept { return steps_; }
  [[nodiscard]] ExecStatus status() const noexcept { return status_; }
  [[nodiscard]] bool has_pending() const noexcept { return has_pending_; }

 private:
  [[nodiscard]] Symbol cell() const noexcept { return tape_[static_cast<std::size_t>(origin_ + head_)]; }

  void apply(const SubAction& s) {
    tape_[static_cast<std::size_t>(origin_ + head_)] = s.write;
    if (s.emit != Emit::None) output_.push_back(s.emit == Emit::One);
    if (s.move == Move::Left) {
      --head_;
      if (origin_ + head_ < 0) grow_left();
    } else if (s.move == Move::Right) {
      ++head_;
      if (origin_ + head_ >= static_cast<std::int64_t>(tape_.size())) tape_.resize(tape_.size() * 2, Symbol::Blank);
    }
    state_ = s.next;
  }

  void grow_left() {
    const std::size_t extra = tape_.size();
    tape_.insert(tape_.begin(), extra, Symbol::Blank);
    origin_ += static_cast<std::int64_t>(extra);
  }

  const MachineSpec* spec_;
  std::vector<Symbol> tape_;
  std::int64_t origin_;  // tape_ index of cell 0
  std::int64_t head_ = 0;
  StateId state_ = 0;
  BitString output_;
  std::size_t consumed_ = 0;
  std::uint64_t steps_ = 0;
  bool pending_ = false;
  bool has_pending_ = false;
  ExecStatus status_ = ExecStatus::Running;
};

/// Feed `input` lazily into any resumable execution and report where it
/// stopped. Shared by `run` and the universal dispatchers.
template <class Exec>
RunResult drive(Exec exec, const BitString& input, std::uint64_t fuel) {
  std::size_t next = 0;
  for (;;) {
    const ExecStatus s = exec.resume(fuel);
    if (s == ExecStatus::AwaitingInput && next < input.size()) {
      exec.feed(input[next++]);
      continue;
    }
    RunResult r;
    r.output = exec.output();
    r.consumed = exec.consumed();
    r.status = s == ExecStatus::Halted          ? RunStatus::Halted
               : s == ExecStatus::AwaitingInput ? RunStatus::AwaitingInput
                                                : RunStatus::FuelExhausted;
    return r;
  }
}

/// Deterministic, fuel-bounded run. One fuel unit per transition; input is
/// consumed only when a read transition is taken.
inline RunResult run(const MachineSpec& spec, const BitString& input, std::uint64_t fuel) {
  return drive(Execution(spec), input, fuel);
}

/// Small named machines used by tests, samples and docs.
namespace catalog {

/// One state; never reads, emits 0 on every step, never halts.
inline MachineSpec zeros_emitter() {
  const Action a = Action::noread({Symbol::Blank, Move::Stay, Emit::Zero, 0});
  return MachineSpec(1, {a, a, a});
}

/// Two states: state 0 reads a bit onto the tape, state 1 emits it back.
/// Copies its input to its output at two steps per bit.
inline MachineSpec copier() {
  const Action halt = Action::noread({Symbol::Blank, Move::Stay, Emit::None, kHalt});
  const Action read = Action::read({Symbol::Zero, Move::Stay, Emit::None, 1}, {Symbol::One, Move::Stay, Emit::None, 1});
  const Action emit0 = Action::noread({Symbol::Blank, Move::Stay, Emit::Zero, 0});
  const Action emit1 = Action::noread({Symbol::Blank, Move::Stay, Emit::One, 0});
  return MachineSpec(2, {halt, halt, read, emit0, emit1, halt});
}

/// Emits `bits` then halts, without reading input.
inline MachineSpec printer(const BitString& bits) {
  const std::size_t n = bits.size() + 1;
  std::vector<Action> table;
  for (std::size_t s = 0; s < n; ++s) {
    const bool last = s + 1 == n;
    const SubAction sub{Symbol::Blank, Move::Stay, last ? Emit::None : (bits[s] ? Emit::One : Emit::Zero),
                        last ? kHalt : static_cast<StateId>(s + 1)};
    for (std::size_t k = 0; k < kNumSymbols; ++k) table.push_back(Action::noread(sub));
  }
  return MachineSpec(n, std::move(table));
}

}  // namespace catalog

}  // namespace sololab
