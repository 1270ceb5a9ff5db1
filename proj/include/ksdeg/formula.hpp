#pragma once

// Sentences of the semilattice language {<=, =, +, 0}.
//
// Concrete syntax (ASCII; `+` is join):
//
//   sentence := ["E" names "."] ["A" names "."] body
//   body     := conj ("|" conj)*
//   conj     := lit ("&" lit)* ["&" "A" names "." body]
//   lit      := "!"* (atom | "(" body ")")
//   atom     := term ("<=" | "=") term
//   term     := factor ("+" factor)*
//   factor   := "0" | name | "(" term ")"
//
// There is no implication; write `p -> q` as `!p | q`.
//
// A universal block may also close a top-level conjunction, as in
// `E x. !(x<=0) & A y. body`; the parser moves it to the prefix, which is
// equivalent because the earlier conjuncts cannot mention the new variables.

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ksdeg/usl.hpp"

namespace ksdeg::formula {

struct Term {
  enum class Kind { zero, var, join };

  Kind kind = Kind::zero;
  std::string name;         // var only
  std::vector<Term> args;   // join only: exactly two

  static Term zero() { return {}; }
  static Term var(std::string n) { return {Kind::var, std::move(n), {}}; }
  static Term join(Term a, Term b) { return {Kind::join, {}, {std::move(a), std::move(b)}}; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Formula {
  enum class Kind { leq, eq, negation, conjunction, disjunction };

  Kind kind = Kind::leq;
  Term lhs, rhs;                 // atoms
  std::vector<Formula> parts;    // negation: one; conjunction/disjunction: two or more

  static Formula leq(Term a, Term b) { return {Kind::leq, std::move(a), std::move(b), {}}; }
  static Formula eq(Term a, Term b) { return {Kind::eq, std::move(a), std::move(b), {}}; }
  static Formula negation(Formula f) { return {Kind::negation, {}, {}, {std::move(f)}}; }
  static Formula conjunction(std::vector<Formula> fs) { return {Kind::conjunction, {}, {}, std::move(fs)}; }
  static Formula disjunction(std::vector<Formula> fs) { return {Kind::disjunction, {}, {}, std::move(fs)}; }

  [[nodiscard]] bool is_atom() const { return kind == Kind::leq || kind == Kind::eq; }

  friend bool operator==(const Formula&, const Formula&) = default;
};

struct Sigma2Sentence {
  std::vector<std::string> exist_vars;
  std::vector<std::string> univ_vars;
  Formula body;

  friend bool operator==(const Sigma2Sentence&, const Sigma2Sentence&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_term(const Term& t, std::string& out) {
  switch (t.kind) {
    case Term::Kind::zero: out += "0"; break;
    case Term::Kind::var: out += t.name; break;
    case Term::Kind::join:
      print_term(t.args[0], out);
      out += " + ";
      if (t.args[1].kind == Term::Kind::join) {
        out += "(";
        print_term(t.args[1], out);
        out += ")";
      } else {
        print_term(t.args[1], out);
      }
      break;
  }
}

inline void print_formula(const Formula& f, std::string& out) {
  switch (f.kind) {
    case Formula::Kind::leq:
    case Formula::Kind::eq:
      print_term(f.lhs, out);
      out += f.kind == Formula::Kind::leq ? " <= " : " = ";
      print_term(f.rhs, out);
      break;
    case Formula::Kind::negation:
      out += "!(";
      print_formula(f.parts[0], out);
      out += ")";
      break;
    case Formula::Kind::conjunction:
    case Formula::Kind::disjunction: {
      const bool conj = f.kind == Formula::Kind::conjunction;
      for (std::size_t i = 0; i < f.parts.size(); ++i) {
        if (i) out += conj ? " & " : " | ";
        const auto& p = f.parts[i];
        const bool wrap = p.kind == Formula::Kind::disjunction || (conj && p.kind == Formula::Kind::conjunction);
        if (wrap) out += "(";
        print_formula(p, out);
        if (wrap) out += ")";
      }
      break;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  std::string s;
  detail::print_term(t, s);
  return s;
}

inline std::string to_string(const Formula& f) {
  std::string s;
  detail::print_formula(f, s);
  return s;
}

inline std::string to_string(const Sigma2Sentence& s) {
  std::string out;
  auto block = [&out](char q, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out += q;
    for (const auto& n : names) out += " " + n;
    out += ". ";
  };
  block('E', s.exist_vars);
  block('A', s.univ_vars);
  out += to_string(s.body);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  enum class Kind { name, zero, le, eq, plus, amp, bar, bang, lparen, rparen, dot, end };
  Kind kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
      out.push_back({Token::Kind::name, s.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i - start != 1 || c != '0') throw ParseError("only the constant 0 is allowed, got '" + s.substr(start, i - start) + "'", start);
      out.push_back({Token::Kind::zero, "0", start});
      continue;
    }
    if (c == '<') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Token::Kind::le, "<=", start});
        i += 2;
        continue;
      }
      throw ParseError("expected '<='", start);
    }
    Token::Kind kind;
    switch (c) {
      case '=': kind = Token::Kind::eq; break;
      case '+': kind = Token::Kind::plus; break;
      case '&': kind = Token::Kind::amp; break;
      case '|': kind = Token::Kind::bar; break;
      case '!': kind = Token::Kind::bang; break;
      case '(': kind = Token::Kind::lparen; break;
      case ')': kind = Token::Kind::rparen; break;
      case '.': kind = Token::Kind::dot; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, std::string(1, c), start});
    ++i;
  }
  out.push_back({Token::Kind::end, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

  Sigma2Sentence sentence() {
    Sigma2Sentence s;
    std::map<std::string, std::size_t> declared;
    if (at_keyword("E")) {
      ++i_;
      s.exist_vars = names(declared);
    }
    if (at_keyword("A")) {
      ++i_;
      s.univ_vars = names(declared);
    } else {
      late_block_ = &s.univ_vars;
      declared_ = &declared;
    }
    s.body = body();
    if (peek().kind != Token::Kind::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    for (const auto& [name, pos] : uses_) {
      if (!declared.count(name)) throw ParseError("undeclared variable '" + name + "'", pos);
    }
    return s;
  }

  Formula body_only() {
    Formula f = body();
    if (peek().kind != Token::Kind::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[i_]; }

  bool at_keyword(const char* kw) const {
    return peek().kind == Token::Kind::name && peek().text == kw && tokens_[i_ + 1].kind == Token::Kind::name;
  }

  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
    ++i_;
  }

  std::vector<std::string> names(std::map<std::string, std::size_t>& declared) {
    std::vector<std::string> out;
    while (peek().kind == Token::Kind::name) {
      const auto& t = peek();
      if (t.text == "E" || t.text == "A") throw ParseError("'" + t.text + "' is reserved", t.pos);
      if (!declared.emplace(t.text, t.pos).second) throw ParseError("duplicated variable '" + t.text + "'", t.pos);
      out.push_back(t.text);
      ++i_;
    }
    if (out.empty()) throw ParseError("expected variable names", peek().pos);
    expect(Token::Kind::dot, "'.' after variable names");
    return out;
  }

  Formula body() {
    std::vector<Formula> parts{conj()};
    while (peek().kind == Token::Kind::bar) {
      ++i_;
      parts.push_back(conj());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::disjunction(std::move(parts));
  }

  Formula conj() {
    std::vector<Formula> parts{lit()};
    while (peek().kind == Token::Kind::amp) {
      ++i_;
      if (depth_ == 0 && late_block_ && late_block_->empty() && at_keyword("A")) {
        parts.push_back(late_universal());
        break;
      }
      parts.push_back(lit());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::conjunction(std::move(parts));
  }

  Formula late_universal() {
    ++i_;
    const std::size_t before = uses_.size();
    *late_block_ = names(*declared_);
    for (std::size_t u = 0; u < before; ++u) {
      for (const auto& v : *late_block_) {
        if (uses_[u].first == v) throw ParseError("variable '" + v + "' used outside its quantifier", uses_[u].second);
      }
    }
    return body();
  }

  Formula lit() {
    if (peek().kind == Token::Kind::bang) {
      ++i_;
      ++depth_;
      Formula inner = lit();
      --depth_;
      return Formula::negation(std::move(inner));
    }
    if (peek().kind == Token::Kind::lparen) {
      // Either a parenthesized term starting an atom or a parenthesized body.
      const std::size_t save = i_;
      const auto uses = uses_.size();
      try {
        return atom();
      } catch (const ParseError&) {
        i_ = save;
        uses_.resize(uses);
      }
      ++i_;
      ++depth_;
      Formula f = body();
      --depth_;
      expect(Token::Kind::rparen, "')'");
      return f;
    }
    return atom();
  }

  Formula atom() {
    Term a = term();
    const auto k = peek().kind;
    if (k != Token::Kind::le && k != Token::Kind::eq) throw ParseError("expected '<=' or '='", peek().pos);
    ++i_;
    Term b = term();
    return k == Token::Kind::le ? Formula::leq(std::move(a), std::move(b)) : Formula::eq(std::move(a), std::move(b));
  }

  Term term() {
    Term t = factor();
    while (peek().kind == Token::Kind::plus) {
      ++i_;
      t = Term::join(std::move(t), factor());
    }
    return t;
  }

  Term factor() {
    const auto& t = peek();
    switch (t.kind) {
      case Token::Kind::zero: ++i_; return Term::zero();
      case Token::Kind::name:
        uses_.emplace_back(t.text, t.pos);
        ++i_;
        return Term::var(t.text);
      case Token::Kind::lparen: {
        ++i_;
        Term inner = term();
        expect(Token::Kind::rparen, "')'");
        return inner;
      }
      default: throw ParseError("expected a term", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
  std::vector<std::pair<std::string, std::size_t>> uses_;
  int depth_ = 0;
  std::vector<std::string>* late_block_ = nullptr;
  std::map<std::string, std::size_t>* declared_ = nullptr;
};

}  // namespace detail

inline Sigma2Sentence parse_sentence(const std::string& text) { return detail::Parser(text).sentence(); }

/// Parses a bare body without checking variable declarations.
inline Formula parse_body(const std::string& text) { return detail::Parser(text).body_only(); }

// ---------------------------------------------------------------------------
// Variables and renaming

inline void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::var) out.insert(t.name);
  for (const auto& a : t.args) collect_vars(a, out);
}

inline void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.is_atom()) {
    collect_vars(f.lhs, out);
    collect_vars(f.rhs, out);
  }
  for (const auto& p : f.parts) collect_vars(p, out);
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

inline Term rename(const Term& t, const std::map<std::string, std::string>& m) {
  Term r = t;
  if (r.kind == Term::Kind::var) {
    if (auto it = m.find(r.name); it != m.end()) r.name = it->second;
  }
  for (auto& a : r.args) a = rename(a, m);
  return r;
}

inline Formula rename(const Formula& f, const std::map<std::string, std::string>& m) {
  Formula r = f;
  if (r.is_atom()) {
    r.lhs = rename(f.lhs, m);
    r.rhs = rename(f.rhs, m);
  }
  for (auto& p : r.parts) p = rename(p, m);
  return r;
}

inline Sigma2Sentence rename(const Sigma2Sentence& s, const std::map<std::string, std::string>& m) {
  Sigma2Sentence r{s.exist_vars, s.univ_vars, rename(s.body, m)};
  for (auto& v : r.exist_vars) {
    if (auto it = m.find(v); it != m.end()) v = it->second;
  }
  for (auto& v : r.univ_vars) {
    if (auto it = m.find(v); it != m.end()) v = it->second;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace detail {

inline void append_flat(std::vector<Formula>& out, Formula f, Formula::Kind kind) {
  if (f.kind == kind) {
    for (auto& p : f.parts) out.push_back(std::move(p));
  } else {
    out.push_back(std::move(f));
  }
}

inline Formula nnf(const Formula& f, bool negate) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::leq: return negate ? Formula::negation(f) : f;
    case K::eq: {
      Formula a = Formula::leq(f.lhs, f.rhs), b = Formula::leq(f.rhs, f.lhs);
      if (negate) return Formula::disjunction({Formula::negation(std::move(a)), Formula::negation(std::move(b))});
      return Formula::conjunction({std::move(a), std::move(b)});
    }
    case K::negation: return nnf(f.parts[0], !negate);
    case K::conjunction:
    case K::disjunction: {
      const bool conj = (f.kind == K::conjunction) != negate;
      const K kind = conj ? K::conjunction : K::disjunction;
      std::vector<Formula> parts;
      for (const auto& p : f.parts) append_flat(parts, nnf(p, negate), kind);
      if (parts.size() == 1) return std::move(parts[0]);
      return {kind, {}, {}, std::move(parts)};
    }
  }
  return f;
}

}  // namespace detail

/// Negation normal form: only `<=` atoms, negated `<=` atoms, and flattened
/// conjunctions/disjunctions remain.
inline Formula normalize_body(const Formula& f) { return detail::nnf(f, false); }

inline bool is_normalized(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::leq: return true;
    case K::eq: return false;
    case K::negation: return f.parts[0].kind == K::leq;
    case K::conjunction:
    case K::disjunction:
      for (const auto& p : f.parts) {
        if (p.kind == f.kind || !is_normalized(p)) return false;
      }
      return f.parts.size() >= 2;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

using Assignment = std::map<std::string, usl::Element>;

inline usl::Element eval_term(const Term& t, const usl::FiniteUsl& u, const Assignment& a) {
  switch (t.kind) {
    case Term::Kind::zero: return usl::FiniteUsl::zero();
    case Term::Kind::var: {
      const auto it = a.find(t.name);
      if (it == a.end()) throw EvalError("unassigned variable '" + t.name + "'");
      if (it->second >= u.size()) throw EvalError("variable '" + t.name + "' assigned out of range");
      return it->second;
    }
    case Term::Kind::join: return u.join(eval_term(t.args[0], u, a), eval_term(t.args[1], u, a));
  }
  return 0;
}

inline bool eval_formula(const Formula& f, const usl::FiniteUsl& u, const Assignment& a) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::leq: return u.leq(eval_term(f.lhs, u, a), eval_term(f.rhs, u, a));
    case K::eq: return eval_term(f.lhs, u, a) == eval_term(f.rhs, u, a);
    case K::negation: return !eval_formula(f.parts[0], u, a);
    case K::conjunction:
      for (const auto& p : f.parts) {
        if (!eval_formula(p, u, a)) return false;
      }
      return true;
    case K::disjunction:
      for (const auto& p : f.parts) {
        if (eval_formula(p, u, a)) return true;
      }
      return false;
  }
  return false;
}

inline bool eval_formula(const Formula& f, const usl::FiniteUsl& u, const usl::GeneratorValuation& v) {
  return eval_formula(f, u, v.as_map());
}

}  // namespace ksdeg::formula
