#pragma once

// Quantifier-free sentences of the forcing language, kept in CNF.
//
// Atoms (text syntax on the right):
//   n = m                                  eq(n, m)
//   {e}_s^sigma(x) halts with output y     halt(e, x, s, y, "sigma")
//   sigma is an initial segment of S       pre(S, "sigma")
//   sigma is an initial segment of Phi_G   gen("sigma")
//   position n of Phi_G is 1               bit(n)
//   <x, y, sigma> is in Phi_G              in(x, y, "sigma")
//
// `bit` and `in` abbreviate the finite disjunction of gen("tau") over all
// tau of length n + 1 with a 1 at n. Formulas combine atoms with `!`, `&`,
// `|` and parentheses and are converted to CNF on parsing.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ksdeg/ksf/axiom.hpp"
#include "ksdeg/ksf/condition.hpp"
#include "ksdeg/ksf/real.hpp"

namespace ksdeg::ksf {

struct Atom {
  enum class Kind { num_eq, halt, prefix_of_s, prefix_of_generic, in_generic };

  Kind kind = Kind::num_eq;
  std::uint64_t n = 0, m = 0;             // num_eq; in_generic uses n as the position
  std::uint64_t e = 0, x = 0, s = 0, y = 0;  // halt
  BinaryString sigma{};                   // halt, prefix_of_s, prefix_of_generic
  std::string real{};                     // prefix_of_s: parameter name

  static Atom num_eq(std::uint64_t a, std::uint64_t b) { return {Kind::num_eq, a, b}; }
  static Atom halt(std::uint64_t e, std::uint64_t x, std::uint64_t s, std::uint64_t y, BinaryString sigma) {
    Atom a{Kind::halt};
    a.e = e, a.x = x, a.s = s, a.y = y, a.sigma = std::move(sigma);
    return a;
  }
  static Atom prefix_of_s(BinaryString sigma, std::string name) {
    Atom a{Kind::prefix_of_s};
    a.sigma = std::move(sigma);
    a.real = std::move(name);
    return a;
  }
  static Atom prefix_of_generic(BinaryString sigma) {
    Atom a{Kind::prefix_of_generic};
    a.sigma = std::move(sigma);
    return a;
  }
  static Atom in_generic(Code position) { return {Kind::in_generic, position}; }

  /// Atoms that do not mention the generic; their truth is fixed.
  [[nodiscard]] bool is_fixed() const { return kind == Kind::num_eq || kind == Kind::halt || kind == Kind::prefix_of_s; }

  /// The generic bits the atom asserts.
  [[nodiscard]] Pattern pattern() const {
    Pattern p;
    if (kind == Kind::prefix_of_generic) {
      for (std::size_t i = 0; i < sigma.size(); ++i) p[i] = sigma[i] == '1';
    } else if (kind == Kind::in_generic) {
      p[n] = true;
    }
    return p;
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// A conjunction of clauses, each a disjunction of literals.
struct ForcingQf {
  std::vector<Clause> clauses;

  friend bool operator==(const ForcingQf&, const ForcingQf&) = default;
};

inline std::string to_string(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::num_eq: return "eq(" + std::to_string(a.n) + "," + std::to_string(a.m) + ")";
    case Atom::Kind::halt:
      return "halt(" + std::to_string(a.e) + "," + std::to_string(a.x) + "," + std::to_string(a.s) + "," +
             std::to_string(a.y) + ",\"" + a.sigma + "\")";
    case Atom::Kind::prefix_of_s: return "pre(" + a.real + ",\"" + a.sigma + "\")";
    case Atom::Kind::prefix_of_generic: return "gen(\"" + a.sigma + "\")";
    case Atom::Kind::in_generic: return "bit(" + std::to_string(a.n) + ")";
  }
  return "?";
}

inline std::string to_string(const Literal& l) { return (l.positive ? "" : "!") + to_string(l.atom); }

inline std::string to_string(const ForcingQf& f) {
  if (f.clauses.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i) out += " & ";
    const auto& c = f.clauses[i];
    if (c.empty()) {
      out += "false";
      continue;
    }
    if (c.size() > 1) out += "(";
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j) out += " | ";
      out += to_string(c[j]);
    }
    if (c.size() > 1) out += ")";
  }
  return out;
}

/// CNF of the negation: the conjunction of all ways of picking one negated
/// literal from every clause.
inline ForcingQf negate(const ForcingQf& f) {
  ForcingQf out;
  out.clauses.push_back({});
  for (const auto& clause : f.clauses) {
    std::vector<Clause> next;
    for (const auto& partial : out.clauses) {
      for (const auto& lit : clause) {
        Clause c = partial;
        c.push_back({lit.atom, !lit.positive});
        next.push_back(std::move(c));
      }
    }
    out.clauses = std::move(next);
  }
  // The negation of the empty conjunction is the empty disjunction.
  if (f.clauses.empty()) out.clauses = {Clause{}};
  return out;
}

class LanguageError : public std::runtime_error {
 public:
  LanguageError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

// Boolean tree used only while parsing.
struct Node {
  enum class Kind { atom, negation, conjunction, disjunction, truth };
  Kind kind;
  Atom atom{};
  bool value = true;
  std::vector<Node> parts{};
};

inline ForcingQf cnf(const Node& node, bool negate) {
  switch (node.kind) {
    case Node::Kind::truth:
      return (node.value != negate) ? ForcingQf{} : ForcingQf{{Clause{}}};
    case Node::Kind::atom: return ForcingQf{{Clause{Literal{node.atom, !negate}}}};
    case Node::Kind::negation: return cnf(node.parts[0], !negate);
    case Node::Kind::conjunction:
    case Node::Kind::disjunction: {
      const bool conj = (node.kind == Node::Kind::conjunction) != negate;
      if (conj) {
        ForcingQf out;
        for (const auto& p : node.parts) {
          auto sub = cnf(p, negate);
          out.clauses.insert(out.clauses.end(), sub.clauses.begin(), sub.clauses.end());
        }
        return out;
      }
      ForcingQf out{{Clause{}}};
      for (const auto& p : node.parts) {
        auto sub = cnf(p, negate);
        std::vector<Clause> next;
        for (const auto& a : out.clauses) {
          for (const auto& b : sub.clauses) {
            Clause c = a;
            c.insert(c.end(), b.begin(), b.end());
            next.push_back(std::move(c));
          }
        }
        out.clauses = std::move(next);
      }
      return out;
    }
  }
  return {};
}

class LanguageParser {
 public:
  LanguageParser(const std::string& text, const std::map<std::string, std::string>& bindings)
      : text_(text), bindings_(bindings) {}

  Node parse() {
    Node n = disj();
    skip();
    if (i_ != text_.size()) throw LanguageError("unexpected input", i_);
    return n;
  }

 private:
  void skip() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }

  bool accept(char c) {
    skip();
    if (i_ < text_.size() && text_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw LanguageError(std::string("expected '") + c + "'", i_);
  }

  std::string word() {
    skip();
    const std::size_t start = i_;
    while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) ++i_;
    return text_.substr(start, i_ - start);
  }

  // A bound variable stands for the text it is bound to.
  std::string resolve(const std::string& w) {
    const auto it = bindings_.find(w);
    return it == bindings_.end() ? w : it->second;
  }

  std::uint64_t number() {
    const std::size_t at = (skip(), i_);
    const std::string w = resolve(word());
    if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw LanguageError("expected a number", at);
    }
    return std::stoull(w);
  }

  BinaryString bits() {
    skip();
    const std::size_t at = i_;
    std::string s;
    if (accept('"')) {
      while (i_ < text_.size() && text_[i_] != '"') s.push_back(text_[i_++]);
      expect('"');
    } else {
      s = resolve(word());
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      else throw LanguageError("expected a quoted bit string", at);
    }
    if (!is_binary(s)) throw LanguageError("bit string must contain only 0 and 1", at);
    return s;
  }

  Node disj() {
    Node n{Node::Kind::disjunction};
    n.parts.push_back(conj());
    while (accept('|')) n.parts.push_back(conj());
    return n.parts.size() == 1 ? std::move(n.parts[0]) : n;
  }

  Node conj() {
    Node n{Node::Kind::conjunction};
    n.parts.push_back(unary());
    while (accept('&')) n.parts.push_back(unary());
    return n.parts.size() == 1 ? std::move(n.parts[0]) : n;
  }

  Node unary() {
    if (accept('!')) {
      Node n{Node::Kind::negation};
      n.parts.push_back(unary());
      return n;
    }
    if (accept('(')) {
      Node n = disj();
      expect(')');
      return n;
    }
    skip();
    const std::size_t at = i_;
    const std::string name = word();
    if (name == "true" || name == "false") return Node{Node::Kind::truth, {}, name == "true"};
    Node n{Node::Kind::atom};
    expect('(');
    if (name == "eq") {
      const auto a = number();
      expect(',');
      n.atom = Atom::num_eq(a, number());
    } else if (name == "halt") {
      std::uint64_t v[4];
      for (auto& x : v) {
        x = number();
        expect(',');
      }
      n.atom = Atom::halt(v[0], v[1], v[2], v[3], bits());
    } else if (name == "pre") {
      const std::string real = resolve(word());
      if (real.empty()) throw LanguageError("expected a real name", i_);
      expect(',');
      n.atom = Atom::prefix_of_s(bits(), real);
    } else if (name == "gen") {
      n.atom = Atom::prefix_of_generic(bits());
    } else if (name == "bit") {
      n.atom = Atom::in_generic(number());
    } else if (name == "in") {
      const auto x = number();
      expect(',');
      const auto y = number();
      expect(',');
      if (y > 1) throw LanguageError("axiom output must be 0 or 1", i_);
      n.atom = Atom::in_generic(encode(Axiom{x, static_cast<int>(y), bits()}));
    } else {
      throw LanguageError("unknown atom '" + name + "'", at);
    }
    expect(')');
    return n;
  }

  const std::string& text_;
  const std::map<std::string, std::string>& bindings_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parses a sentence and converts it to CNF. `bindings` substitutes text for
/// bare identifiers in argument positions (used to instantiate families).
inline ForcingQf parse_forcing(const std::string& text, const std::map<std::string, std::string>& bindings = {}) {
  return detail::cnf(detail::LanguageParser(text, bindings).parse(), false);
}

/// A universally quantified conjunct "for all u in domain: body(u)", cut
/// down to finitely many instances.
struct Family {
  enum class Domain { none, numbers, prefixes, strings };

  std::string variable;          // empty for a single sentence
  Domain domain = Domain::none;
  std::uint64_t bound = 0;       // numbers 0..bound-1, or strings/prefixes of length <= bound
  std::string real;              // prefixes: the parameter real
  std::string body;

  friend bool operator==(const Family&, const Family&) = default;
};

struct Instance {
  std::size_t family = 0;
  std::string value;   // the bound value as text; empty for a single sentence
  ForcingQf sentence;
};

/// All instances of the families, in order. Prefix domains need the
/// parameter reals.
inline std::vector<Instance> instances(const std::vector<Family>& families, const std::map<std::string, Real>& env) {
  std::vector<Instance> out;
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto& f = families[i];
    std::vector<std::string> values;
    switch (f.domain) {
      case Family::Domain::none: values.push_back({}); break;
      case Family::Domain::numbers:
        for (std::uint64_t v = 0; v < f.bound; ++v) values.push_back(std::to_string(v));
        break;
      case Family::Domain::prefixes: {
        const auto it = env.find(f.real);
        if (it == env.end()) throw std::invalid_argument("undeclared parameter real '" + f.real + "'");
        for (std::uint64_t len = 0; len <= f.bound; ++len) values.push_back("\"" + it->second.initial_segment(len) + "\"");
        break;
      }
      case Family::Domain::strings:
        for (std::uint64_t len = 0; len <= f.bound; ++len) {
          for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            std::string s;
            for (std::uint64_t b = len; b-- > 0;) s.push_back(((v >> b) & 1) ? '1' : '0');
            values.push_back("\"" + s + "\"");
          }
        }
        break;
    }
    for (auto& v : values) {
      std::map<std::string, std::string> bind;
      if (f.domain != Family::Domain::none) bind[f.variable] = v;
      out.push_back({i, v, parse_forcing(f.body, bind)});
    }
  }
  return out;
}

/// Parses a family written as one of
///   forall u < N: body
///   forall u in prefixes(S, N): body
///   forall u in strings(N): body
/// or a bare body (a single conjunct).
inline Family parse_family(const std::string& text) {
  static const std::regex numbers(R"(^\s*forall\s+([A-Za-z_]\w*)\s*<\s*(\d+)\s*:(.*)$)");
  static const std::regex prefixes(
      R"(^\s*forall\s+([A-Za-z_]\w*)\s+in\s+prefixes\s*\(\s*([A-Za-z_]\w*)\s*,\s*(\d+)\s*\)\s*:(.*)$)");
  static const std::regex strings(R"(^\s*forall\s+([A-Za-z_]\w*)\s+in\s+strings\s*\(\s*(\d+)\s*\)\s*:(.*)$)");
  std::smatch m;
  Family f;
  if (std::regex_match(text, m, numbers)) {
    f = {m[1], Family::Domain::numbers, std::stoull(m[2]), {}, m[3]};
  } else if (std::regex_match(text, m, prefixes)) {
    f = {m[1], Family::Domain::prefixes, std::stoull(m[3]), m[2], m[4]};
  } else if (std::regex_match(text, m, strings)) {
    f = {m[1], Family::Domain::strings, std::stoull(m[2]), {}, m[3]};
  } else if (text.find("forall") != std::string::npos) {
    throw LanguageError("malformed family quantifier", text.find("forall"));
  } else {
    f.body = text;
  }
  // Reject bodies that do not parse for a sample value.
  std::map<std::string, std::string> bind;
  if (f.domain == Family::Domain::numbers) bind[f.variable] = "0";
  else if (f.domain != Family::Domain::none) bind[f.variable] = "\"\"";
  parse_forcing(f.body, bind);
  return f;
}

inline std::string to_string(const Family& f) {
  switch (f.domain) {
    case Family::Domain::none: return f.body;
    case Family::Domain::numbers: return "forall " + f.variable + " < " + std::to_string(f.bound) + ":" + f.body;
    case Family::Domain::prefixes:
      return "forall " + f.variable + " in prefixes(" + f.real + ", " + std::to_string(f.bound) + "):" + f.body;
    case Family::Domain::strings:
      return "forall " + f.variable + " in strings(" + std::to_string(f.bound) + "):" + f.body;
  }
  return f.body;
}

}  // namespace ksdeg::ksf
