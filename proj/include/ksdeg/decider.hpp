#pragma once

// Decision procedure for Sigma-2 sentences of the degree structures.
//
// A sentence E x. A y. body holds exactly when some diagram M of x (a
// semilattice join-generated by x) has the property that body holds in every
// end-extension N of M generated by x and y. The criterion is shared by the
// Turing, arithmetic and hyperarithmetic degrees: each is an upper
// semilattice with 0 in which every finite semilattice embeds as an initial
// segment and embeddings extend along end-extensions. Those facts are taken
// as given here.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ksdeg/formula.hpp"
#include "ksdeg/usl.hpp"
#include "ksdeg/usl_enumerate.hpp"

namespace ksdeg::decider {

enum class Truth { holds, fails, undecided_at_cap };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::holds: return "true";
    case Truth::fails: return "false";
    case Truth::undecided_at_cap: return "undecided_at_cap";
  }
  return "?";
}

inline std::optional<Truth> truth_from_string(const std::string& s) {
  if (s == "true") return Truth::holds;
  if (s == "false") return Truth::fails;
  if (s == "undecided_at_cap") return Truth::undecided_at_cap;
  return std::nullopt;
}

struct Caps {
  std::size_t max_vars = 5;
  std::size_t max_size = 33;

  friend bool operator==(const Caps&, const Caps&) = default;
};

/// One failing end-extension for a candidate diagram.
struct Counterexample {
  usl::FiniteUsl m;
  usl::GeneratorValuation m_valuation;
  usl::FiniteUsl n;
  usl::GeneratorValuation n_valuation;
  std::vector<usl::Element> embedding;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct Witness {
  usl::FiniteUsl m;
  usl::GeneratorValuation valuation;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
  Truth truth = Truth::undecided_at_cap;
  std::optional<Witness> witness;
  std::vector<Counterexample> counterexamples;
  Caps caps_used;
  std::size_t candidates = 0;   // diagrams M examined
  std::string note;             // why the verdict is undecided, if it is

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

namespace detail {

inline void check_well_formed(const formula::Sigma2Sentence& s) {
  std::set<std::string> declared;
  for (const auto* block : {&s.exist_vars, &s.univ_vars}) {
    for (const auto& v : *block) {
      if (!declared.insert(v).second) throw std::invalid_argument("duplicated variable '" + v + "'");
    }
  }
  for (const auto& v : formula::free_vars(s.body)) {
    if (!declared.count(v)) throw std::invalid_argument("undeclared variable '" + v + "'");
  }
}

}  // namespace detail

namespace detail {

// The body evaluated directly on closure operators. A term denotes the
// closure of the generators it mentions, so it compiles to a generator mask.
class MaskFormula {
 public:
  MaskFormula(const formula::Formula& f, const std::vector<std::string>& vars) : root_(compile(f, vars)) {}

  [[nodiscard]] bool eval(const std::vector<usl::Mask>& cl) const { return eval(root_, cl); }

 private:
  struct Node {
    formula::Formula::Kind kind;
    usl::Mask a = 0, b = 0;
    std::vector<Node> parts{};
  };

  static usl::Mask term_mask(const formula::Term& t, const std::vector<std::string>& vars) {
    using K = formula::Term::Kind;
    switch (t.kind) {
      case K::zero: return 0;
      case K::var: {
        const auto it = std::find(vars.begin(), vars.end(), t.name);
        if (it == vars.end()) throw std::invalid_argument("undeclared variable '" + t.name + "'");
        return usl::Mask{1} << (it - vars.begin());
      }
      case K::join: return term_mask(t.args[0], vars) | term_mask(t.args[1], vars);
    }
    return 0;
  }

  static Node compile(const formula::Formula& f, const std::vector<std::string>& vars) {
    Node n{f.kind};
    if (f.is_atom()) {
      n.a = term_mask(f.lhs, vars);
      n.b = term_mask(f.rhs, vars);
    }
    for (const auto& part : f.parts) n.parts.push_back(compile(part, vars));
    return n;
  }

  static bool eval(const Node& n, const std::vector<usl::Mask>& cl) {
    using K = formula::Formula::Kind;
    switch (n.kind) {
      case K::leq: return (n.a & ~cl[n.b]) == 0;
      case K::eq: return cl[n.a] == cl[n.b];
      case K::negation: return !eval(n.parts[0], cl);
      case K::conjunction:
        return std::all_of(n.parts.begin(), n.parts.end(), [&](const Node& p) { return eval(p, cl); });
      case K::disjunction:
        return std::any_of(n.parts.begin(), n.parts.end(), [&](const Node& p) { return eval(p, cl); });
    }
    return false;
  }

  Node root_;
};

}  // namespace detail

/// Universal stage for one candidate: the first end-extension, in search
/// order, that falsifies the body, or nothing. `truncated` reports whether
/// the extension enumeration hit the carrier cap.
struct UniversalCheck {
  std::optional<usl::Extension> failure;
  bool truncated = false;
};

inline UniversalCheck check_universal(const formula::Formula& body, const usl::FiniteUsl& m,
                                      const usl::GeneratorValuation& mv, const std::vector<std::string>& univ,
                                      std::size_t max_size) {
  std::vector<std::string> vars = mv.names;
  vars.insert(vars.end(), univ.begin(), univ.end());
  const detail::MaskFormula compiled(body, vars);
  UniversalCheck out;
  std::vector<usl::Mask> failing;
  const auto visited = usl::detail::visit_end_extensions(m, mv, univ.size(), max_size, [&](const std::vector<usl::Mask>& cl) {
    if (compiled.eval(cl)) return true;
    failing = cl;
    return false;
  });
  out.truncated = visited.truncated;
  if (visited.stopped) out.failure = usl::realize_extension(m, mv, univ, failing);
  return out;
}

inline Verdict decide(const formula::Sigma2Sentence& s, const Caps& caps = {}) {
  detail::check_well_formed(s);
  if (caps.max_vars < 1 || caps.max_size < 1) throw std::invalid_argument("caps must be positive");
  Verdict v;
  v.caps_used = caps;
  const std::size_t vars = s.exist_vars.size() + s.univ_vars.size();
  if (vars > caps.max_vars || vars > usl::kMaxGenerators) {
    v.note = "sentence has " + std::to_string(vars) + " variables, cap is " + std::to_string(caps.max_vars);
    return v;
  }
  const formula::Formula body = formula::normalize_body(s.body);
  const auto candidates = usl::enumerate_generated(s.exist_vars, caps.max_size);
  bool open = candidates.truncated;
  for (const auto& m : candidates.diagrams) {
    ++v.candidates;
    auto check = check_universal(body, m.usl, m.valuation, s.univ_vars, caps.max_size);
    if (check.failure) {
      v.counterexamples.push_back(
          {m.usl, m.valuation, check.failure->usl, check.failure->valuation, check.failure->embedding});
    } else if (check.truncated) {
      open = true;
    } else {
      v.truth = Truth::holds;
      v.witness = Witness{m.usl, m.valuation};
      v.counterexamples.clear();
      return v;
    }
  }
  if (open) {
    v.note = "carrier cap " + std::to_string(caps.max_size) + " truncated the enumeration";
    return v;
  }
  v.truth = Truth::fails;
  return v;
}

/// Sentences with an empty existential or empty universal block.
inline Verdict decide_fragment(const formula::Sigma2Sentence& s, const Caps& caps = {}) {
  if (!s.exist_vars.empty() && !s.univ_vars.empty()) {
    throw std::invalid_argument("decide_fragment needs an empty existential or universal block");
  }
  return decide(s, caps);
}

/// Re-checks a verdict against the sentence: a witness must pass the full
/// universal stage again, and every counterexample must be an end-extension
/// of its candidate that falsifies the body. Returns an empty string when
/// the verdict checks out, otherwise the reason it does not.
inline std::string verify_verdict(const formula::Sigma2Sentence& s, const Verdict& v) {
  const formula::Formula body = formula::normalize_body(s.body);
  if (v.truth == Truth::holds) {
    if (!v.witness) return "true verdict without a witness";
    const auto& w = *v.witness;
    if (w.valuation.names != s.exist_vars) return "witness valuation does not match the existential block";
    if (!usl::generates(w.m, w.valuation)) return "witness valuation does not generate the witness";
    auto check = check_universal(body, w.m, w.valuation, s.univ_vars, v.caps_used.max_size);
    if (check.failure) return "witness has a failing end-extension";
    if (check.truncated) return "witness check truncated at cap";
    return {};
  }
  if (v.truth == Truth::fails) {
    const auto candidates = usl::enumerate_generated(s.exist_vars, v.caps_used.max_size);
    if (candidates.truncated) return "candidate enumeration truncated";
    if (candidates.diagrams.size() != v.counterexamples.size()) return "counterexample count differs from candidate count";
    std::set<usl::CanonicalKey> covered;
    for (const auto& c : v.counterexamples) {
      if (usl::check_embedding(c.m, c.n, c.embedding) != usl::EmbeddingKind::end_extension_embedding) {
        return "counterexample is not an end-extension";
      }
      for (std::size_t i = 0; i < c.m_valuation.names.size(); ++i) {
        if (c.n_valuation.find(c.m_valuation.names[i]) != c.embedding[c.m_valuation.targets[i]]) {
          return "counterexample does not extend the candidate valuation";
        }
      }
      if (!usl::generates(c.n, c.n_valuation)) return "counterexample valuation does not generate it";
      if (formula::eval_formula(body, c.n, c.n_valuation)) return "counterexample satisfies the body";
      covered.insert(usl::canonicalize(c.m, c.m_valuation));
    }
    for (const auto& d : candidates.diagrams) {
      if (!covered.count(d.key)) return "a candidate has no counterexample";
    }
    return {};
  }
  return {};
}

}  // namespace ksdeg::decider
