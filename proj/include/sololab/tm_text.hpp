#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sololab/errors.hpp"
#include "sololab/tm_core.hpp"

// Line-oriented machine text format:
//
//   # comment
//   states 2
//   0 B -> read (0 S - 1)(1 S - 1)
//   1 0 -> noread (B S 0 0)
//
// Each row is `state symbol -> read (sub)(sub)` or `state symbol -> noread (sub)`,
// with sub = `write move emit next`: write in {0,1,B}, move in {L,R,S},
// emit in {-,0,1}, next a state number or H. Every (state, symbol) pair must
// appear exactly once.

namespace sololab {

namespace detail {

inline char symbol_char(Symbol s) { return s == Symbol::Zero ? '0' : s == Symbol::One ? '1' : 'B'; }
inline char move_char(Move m) { return m == Move::Left ? 'L' : m == Move::Right ? 'R' : 'S'; }
inline char emit_char(Emit e) { return e == Emit::Zero ? '0' : e == Emit::One ? '1' : '-'; }

inline std::optional<Symbol> parse_symbol(std::string_view t) {
  if (t == "0") return Symbol::Zero;
  if (t == "1") return Symbol::One;
  if (t == "B") return Symbol::Blank;
  return std::nullopt;
}

inline std::optional<Move> parse_move(std::string_view t) {
  if (t == "L") return Move::Left;
  if (t == "R") return Move::Right;
  if (t == "S") return Move::Stay;
  return std::nullopt;
}

inline std::optional<Emit> parse_emit(std::string_view t) {
  if (t == "0") return Emit::Zero;
  if (t == "1") return Emit::One;
  if (t == "-") return Emit::None;
  return std::nullopt;
}

inline std::optional<std::size_t> parse_count(std::string_view t) {
  if (t.empty() || t.size() > 9) return std::nullopt;
  std::size_t v = 0;
  for (char c : t) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline std::vector<std::string> tokenize(std::string_view line) {
  std::string spaced;
  for (char c : line) {
    if (c == '(' || c == ')') {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::istringstream in(spaced);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

class RowParser {
 public:
  RowParser(const std::vector<std::string>& toks, std::size_t line, std::size_t num_states)
      : toks_(toks), line_(line), num_states_(num_states) {}

  const std::string& next(const char* what) {
    if (pos_ >= toks_.size()) fail(std::string("expected ") + what + " but the line ended");
    return toks_[pos_++];
  }

  void expect(std::string_view tok) {
    const std::string& got = next(std::string(tok).c_str());
    if (got != tok) fail("expected '" + std::string(tok) + "', got '" + got + "'");
  }

  StateId state(const std::string& tok) {
    if (tok == "H") return kHalt;
    const auto v = parse_count(tok);
    if (!v) fail("bad state '" + tok + "'");
    if (*v >= num_states_) {
      throw ParseError(ParseError::Kind::BadStateRef, line_,
                       "state " + tok + " with only " + std::to_string(num_states_) + " states");
    }
    return static_cast<StateId>(*v);
  }

  SubAction sub() {
    expect("(");
    SubAction s;
    const std::string& w = next("write symbol");
    const auto write = parse_symbol(w);
    if (!write) fail("bad write symbol '" + w + "'");
    const std::string& m = next("move");
    const auto move = parse_move(m);
    if (!move) fail("bad move '" + m + "'");
    const std::string& e = next("emit");
    const auto emit = parse_emit(e);
    if (!emit) fail("bad emit '" + e + "'");
    s.write = *write;
    s.move = *move;
    s.emit = *emit;
    s.next = state(next("next state"));
    expect(")");
    return s;
  }

  void finish() {
    if (pos_ != toks_.size()) fail("trailing tokens after '" + toks_[pos_ - 1] + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ParseError::Kind::Syntax, line_, what);
  }

 private:
  const std::vector<std::string>& toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t num_states_;
};

}  // namespace detail

/// Parse the textual machine format. Throws ParseError.
inline MachineSpec parse_machine_text(std::string_view text) {
  std::size_t num_states = 0;
  std::size_t header_line = 0;
  std::vector<std::optional<Action>> rows;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = detail::tokenize(line);
    if (toks.empty()) continue;

    if (header_line == 0) {
      if (toks.size() != 2 || toks[0] != "states") {
        throw ParseError(ParseError::Kind::Syntax, line_no, "expected 'states N' header");
      }
      const auto n = detail::parse_count(toks[1]);
      if (!n || *n == 0) throw ParseError(ParseError::Kind::Syntax, line_no, "state count must be a positive integer");
      num_states = *n;
      header_line = line_no;
      rows.assign(num_states * kNumSymbols, std::nullopt);
      continue;
    }
    if (toks[0] == "states") throw ParseError(ParseError::Kind::Syntax, line_no, "duplicate 'states' header");

    detail::RowParser p(toks, line_no, num_states);
    const StateId state = p.state(p.next("state"));
    if (state == kHalt) p.fail("H is not a table row");
    const std::string& sym_tok = p.next("work symbol");
    const auto sym = detail::parse_symbol(sym_tok);
    if (!sym) p.fail("bad work symbol '" + sym_tok + "'");
    p.expect("->");
    const std::string& kind = p.next("'read' or 'noread'");
    Action action;
    if (kind == "read") {
      const SubAction on0 = p.sub();
      const SubAction on1 = p.sub();
      action = Action::read(on0, on1);
    } else if (kind == "noread") {
      action = Action::noread(p.sub());
    } else {
      p.fail("expected 'read' or 'noread', got '" + kind + "'");
    }
    p.finish();

    auto& slot = rows[state * kNumSymbols + static_cast<std::size_t>(*sym)];
    if (slot) p.fail("duplicate row for state " + std::to_string(state) + " symbol " + sym_tok);
    slot = action;
  }

  if (header_line == 0) throw ParseError(ParseError::Kind::Syntax, line_no, "missing 'states N' header");

  std::vector<Action> table;
  table.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k]) {
      const auto sym = static_cast<Symbol>(k % kNumSymbols);
      throw ParseError(ParseError::Kind::NonTotalTable, header_line,
                       "no row for state " + std::to_string(k / kNumSymbols) + " symbol " +
                           detail::symbol_char(sym));
    }
    table.push_back(*rows[k]);
  }
  return MachineSpec(num_states, std::move(table));
}

inline std::string to_text(const SubAction& s) {
  std::string out = "(";
  out += detail::symbol_char(s.write);
  out += ' ';
  out += detail::move_char(s.move);
  out += ' ';
  out += detail::emit_char(s.emit);
  out += ' ';
  out += s.next == kHalt ? std::string("H") : std::to_string(s.next);
  out += ')';
  return out;
}

/// Canonical text: header, then rows ordered by state and symbol 0, 1, B.
inline std::string to_text(const MachineSpec& spec) {
  std::string out = "states " + std::to_string(spec.num_states()) + "\n";
  for (StateId s = 0; s < spec.num_states(); ++s) {
    for (Symbol sym : {Symbol::Zero, Symbol::One, Symbol::Blank}) {
      const Action& a = spec.action(s, sym);
      out += std::to_string(s) + ' ' + detail::symbol_char(sym) + " -> ";
      if (a.reads()) {
        out += "read " + to_text(a.branch(false)) + to_text(a.branch(true));
      } else {
        out += "noread " + to_text(a.only());
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace sololab
