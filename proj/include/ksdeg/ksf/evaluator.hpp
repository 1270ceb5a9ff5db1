#pragma once

// Step-bounded oracle computations {e}_s^sigma(x).
//
// The contract: eval(e, x, s, oracle) is deterministic, halting within s
// steps implies the same result for every larger bound, and a halting run
// reads only positions below |oracle| whose bit is known, so it halts with
// the same output on every extension of the oracle. Oracles are strings
// over '0', '1' and '?'; '?' marks a bit that is not yet known, and reading
// it (or reading past the end) makes the run diverge at that bound.
//
// ToyMachine is the default implementation: a register machine whose
// programs are short text listings.
//
//   registers r0..r7, r0 holds the input, the others start at 0
//   set  rA c      rA := c
//   addi rA c      rA := rA + c
//   muli rA c      rA := rA * c
//   add  rA rB     rA := rA + rB
//   sub  rA rB     rA := max(rA - rB, 0)
//   mul  rA rB     rA := rA * rB
//   read rA rB     rA := oracle bit at position rB
//   jz   rA L      jump to label L if rA = 0
//   jnz  rA L      jump to label L if rA != 0
//   jmp  L         jump to label L
//   halt rA        stop with output rA
//
// Each executed instruction is one step. Labels are written `name:` on a
// line of their own; `#` starts a comment. Falling off the end diverges.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ksdeg::ksf {

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  [[nodiscard]] virtual std::optional<std::uint64_t> eval(std::uint64_t e, std::uint64_t x, std::uint64_t steps,
                                                          std::string_view oracle) const = 0;
};

class ProgramError : public std::runtime_error {
 public:
  ProgramError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Instruction {
  enum class Op { set, addi, muli, add, sub, mul, read, jz, jnz, jmp, halt };

  Op op;
  unsigned a = 0;
  std::uint64_t b = 0;  // register, constant or jump target
};

struct Program {
  std::vector<Instruction> code;
  std::string source;

  static Program parse(const std::string& text) {
    static const std::map<std::string, Instruction::Op> ops{
        {"set", Instruction::Op::set}, {"addi", Instruction::Op::addi}, {"muli", Instruction::Op::muli},
        {"add", Instruction::Op::add}, {"sub", Instruction::Op::sub},   {"mul", Instruction::Op::mul},
        {"read", Instruction::Op::read}, {"jz", Instruction::Op::jz},   {"jnz", Instruction::Op::jnz},
        {"jmp", Instruction::Op::jmp},  {"halt", Instruction::Op::halt}};

    struct Pending {
      std::vector<std::string> words;
      std::size_t line;
    };
    std::vector<Pending> lines;
    std::map<std::string, std::size_t> labels;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      std::istringstream words(raw);
      std::vector<std::string> w;
      for (std::string t; words >> t;) w.push_back(t);
      if (w.empty()) continue;
      if (w.size() == 1 && w[0].size() > 1 && w[0].back() == ':') {
        const auto name = w[0].substr(0, w[0].size() - 1);
        if (!labels.emplace(name, lines.size()).second) throw ProgramError("duplicate label '" + name + "'", lineno);
        continue;
      }
      lines.push_back({std::move(w), lineno});
    }

    auto reg = [](const std::string& s, std::size_t line) -> unsigned {
      if (s.size() == 2 && s[0] == 'r' && s[1] >= '0' && s[1] <= '7') return static_cast<unsigned>(s[1] - '0');
      throw ProgramError("expected a register r0..r7, got '" + s + "'", line);
    };
    auto number = [](const std::string& s, std::size_t line) -> std::uint64_t {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw ProgramError("expected a number, got '" + s + "'", line);
      }
      return std::stoull(s);
    };
    auto label = [&labels](const std::string& s, std::size_t line) -> std::uint64_t {
      const auto it = labels.find(s);
      if (it == labels.end()) throw ProgramError("unknown label '" + s + "'", line);
      return it->second;
    };

    Program p;
    p.source = text;
    for (const auto& [w, line] : lines) {
      const auto it = ops.find(w[0]);
      if (it == ops.end()) throw ProgramError("unknown instruction '" + w[0] + "'", line);
      Instruction ins{it->second};
      using Op = Instruction::Op;
      const std::size_t want = (ins.op == Op::jmp || ins.op == Op::halt) ? 2 : 3;
      if (w.size() != want) throw ProgramError("wrong number of operands for '" + w[0] + "'", line);
      switch (ins.op) {
        case Op::set:
        case Op::addi:
        case Op::muli: ins.a = reg(w[1], line); ins.b = number(w[2], line); break;
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::read: ins.a = reg(w[1], line); ins.b = reg(w[2], line); break;
        case Op::jz:
        case Op::jnz: ins.a = reg(w[1], line); ins.b = label(w[2], line); break;
        case Op::jmp: ins.b = label(w[1], line); break;
        case Op::halt: ins.a = reg(w[1], line); break;
      }
      p.code.push_back(ins);
    }
    return p;
  }

  [[nodiscard]] std::optional<std::uint64_t> run(std::uint64_t x, std::uint64_t steps, std::string_view oracle) const {
    std::uint64_t r[8] = {x, 0, 0, 0, 0, 0, 0, 0};
    std::size_t pc = 0;
    using Op = Instruction::Op;
    for (std::uint64_t step = 0; step < steps; ++step) {
      if (pc >= code.size()) return std::nullopt;
      const auto& ins = code[pc++];
      switch (ins.op) {
        case Op::set: r[ins.a] = ins.b; break;
        case Op::addi: r[ins.a] += ins.b; break;
        case Op::muli: r[ins.a] *= ins.b; break;
        case Op::add: r[ins.a] += r[ins.b]; break;
        case Op::sub: r[ins.a] = r[ins.a] > r[ins.b] ? r[ins.a] - r[ins.b] : 0; break;
        case Op::mul: r[ins.a] *= r[ins.b]; break;
        case Op::read: {
          const std::uint64_t pos = r[ins.b];
          if (pos >= oracle.size() || (oracle[pos] != '0' && oracle[pos] != '1')) return std::nullopt;
          r[ins.a] = oracle[pos] == '1' ? 1 : 0;
          break;
        }
        case Op::jz: if (r[ins.a] == 0) pc = ins.b; break;
        case Op::jnz: if (r[ins.a] != 0) pc = ins.b; break;
        case Op::jmp: pc = ins.b; break;
        case Op::halt: return r[ins.a];
      }
    }
    return std::nullopt;
  }
};

/// Program e is the e-th registered listing; unregistered indices never halt.
class ToyMachine : public Evaluator {
 public:
  ToyMachine() = default;
  explicit ToyMachine(std::vector<Program> programs) : programs_(std::move(programs)) {}

  std::uint64_t add(Program p) {
    programs_.push_back(std::move(p));
    return programs_.size() - 1;
  }

  [[nodiscard]] std::size_t size() const { return programs_.size(); }

  [[nodiscard]] std::optional<std::uint64_t> eval(std::uint64_t e, std::uint64_t x, std::uint64_t steps,
                                                  std::string_view oracle) const override {
    if (e >= programs_.size()) return std::nullopt;
    return programs_[e].run(x, steps, oracle);
  }

 private:
  std::vector<Program> programs_;
};

namespace programs {

/// Reads oracle bit `position` and outputs it.
inline Program read_bit(std::uint64_t position) {
  return Program::parse("set r1 " + std::to_string(position) + "\nread r2 r1\nhalt r2\n");
}

inline Program constant(std::uint64_t value) { return Program::parse("set r1 " + std::to_string(value) + "\nhalt r1\n"); }

}  // namespace programs

}  // namespace ksdeg::ksf
