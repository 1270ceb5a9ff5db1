#pragma once

// The forcing relation on quantifier-free sentences, the decision of
// whether a finite functional can be completed to a condition forcing a
// sentence, and the three-valued view of the generic a condition fixes.
//
// Clause by clause:
//   fixed atoms (eq, halt, pre) are forced iff true;
//   gen(sigma) standing alone is forced iff every 1 of sigma is an axiom of
//   p and every 0 is zero-forced by p;
//   a negated atom is forced iff no extension forces the atom;
//   a disjunction is forced iff every extension has a further extension
//   forcing one of its literals;
//   a conjunction is forced iff each conjunct is.
//
// Extensions may add reals freely, and a real through the use of an axiom
// shuts that axiom out for good. So q forces !gen(sigma) iff no extension
// of q has generic bits agreeing with sigma, and p fails to force a
// disjunction exactly when some extension's functional disagrees with every
// positive generic literal and agrees with every negative one. Both reduce
// to find_extension.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksdeg/ksf/condition.hpp"
#include "ksdeg/ksf/evaluator.hpp"
#include "ksdeg/ksf/language.hpp"

namespace ksdeg::ksf {

/// What fixed atoms are evaluated against.
struct ForcingContext {
  const Evaluator* evaluator = nullptr;
  std::map<std::string, Real> reals;   // parameter reals by name
};

inline bool fixed_truth(const Atom& a, const ForcingContext& ctx) {
  switch (a.kind) {
    case Atom::Kind::num_eq: return a.n == a.m;
    case Atom::Kind::halt: {
      if (!ctx.evaluator) throw std::invalid_argument("halt atom needs an evaluator");
      const auto out = ctx.evaluator->eval(a.e, a.x, a.s, a.sigma);
      return out && *out == a.y;
    }
    case Atom::Kind::prefix_of_s: {
      const auto it = ctx.reals.find(a.real);
      if (it == ctx.reals.end()) throw std::invalid_argument("undeclared parameter real '" + a.real + "'");
      return it->second.has_prefix(a.sigma);
    }
    default: throw std::logic_error("not a fixed atom");
  }
}

/// Checks that every parameter real the sentence mentions is declared.
inline void check_parameters(const ForcingQf& psi, const ForcingContext& ctx) {
  for (const auto& c : psi.clauses) {
    for (const auto& l : c) {
      if (l.atom.kind == Atom::Kind::prefix_of_s && !ctx.reals.count(l.atom.real)) {
        throw std::invalid_argument("undeclared parameter real '" + l.atom.real + "'");
      }
    }
  }
}

/// Clause 4 for gen(sigma): the condition's generic agrees with sigma and
/// every 0 of sigma is zero-forced.
inline bool forces_prefix(const Condition& p, const BinaryString& sigma, const Mode& mode) {
  for (std::size_t n = 0; n < sigma.size(); ++n) {
    if (sigma[n] == '1') {
      if (!p.phi.contains_code(n)) return false;
    } else if (!zero_forced(p, n, mode)) {
      return false;
    }
  }
  return true;
}

namespace detail {

inline bool forces_clause(const Condition& p, const Clause& clause, const Mode& mode, const ForcingContext& ctx) {
  if (clause.size() == 1 && clause[0].positive && clause[0].atom.kind == Atom::Kind::prefix_of_generic) {
    return forces_prefix(p, clause[0].atom.sigma, mode);
  }
  ExtensionGoals goals;
  bool generic = false;
  for (const auto& lit : clause) {
    if (lit.atom.is_fixed()) {
      if (fixed_truth(lit.atom, ctx) == lit.positive) return true;
      continue;
    }
    const Pattern pattern = lit.atom.pattern();
    if (lit.positive) {
      goals.disagree.push_back(pattern);
    } else if (!goals.agree(pattern)) {
      return true;  // the atom can never hold, so its negation is forced
    }
    generic = true;
  }
  if (!generic) return false;
  return !find_extension(p, mode, goals).has_value();
}

}  // namespace detail

inline bool forces_qf(const Condition& p, const ForcingQf& psi, const Mode& mode, const ForcingContext& ctx) {
  require_member(p, mode, "condition");
  check_parameters(psi, ctx);
  for (const auto& clause : psi.clauses) {
    if (!detail::forces_clause(p, clause, mode, ctx)) return false;
  }
  return true;
}

namespace detail {

// Reals making (phi0, X) force the pattern: a blocker for each 0 of the
// pattern not already zero-forced. Nothing if phi0 disagrees with it.
inline std::optional<std::set<Real>> witness_for_pattern(const Condition& base, const Pattern& pattern, const Mode& mode) {
  std::set<Real> out;
  for (const auto& [n, bit] : pattern) {
    const auto d = decode(n);
    if (bit) {
      if (!d.axiom || !base.phi.contains(*d.axiom)) return std::nullopt;
    } else if (d.axiom) {
      if (base.phi.contains(*d.axiom)) return std::nullopt;
      if (!zero_forced(base, n, mode)) out.insert(blocker(*d.axiom, mode));
    }
  }
  return out;
}

// Reals making (phi0, X) force the negated pattern, using the first
// position where phi0 disagrees with it. Nothing if phi0 agrees everywhere.
inline std::optional<std::set<Real>> witness_against_pattern(const Condition& base, const Pattern& pattern,
                                                             const Mode& mode) {
  for (const auto& [n, bit] : pattern) {
    const auto d = decode(n);
    if (bit) {
      if (!d.axiom || zero_forced(base, n, mode)) return std::set<Real>{};
      if (!base.phi.contains(*d.axiom)) return std::set<Real>{blocker(*d.axiom, mode)};
    } else if (d.axiom && base.phi.contains(*d.axiom)) {
      return std::set<Real>{};
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Some X with (phi0, X) forcing psi, or nothing if there is none. In a
/// disjunction the first literal (in clause order) that can be forced on its
/// own is the one forced.
inline std::optional<std::set<Real>> decide_qf_forcing(const TuringFunctional& phi0, const ForcingQf& psi,
                                                       const Mode& mode, const ForcingContext& ctx) {
  const Condition base{phi0, {}};
  require_member(base, mode, "functional");
  check_parameters(psi, ctx);
  std::set<Real> all;
  for (const auto& clause : psi.clauses) {
    std::optional<std::set<Real>> chosen;
    for (const auto& lit : clause) {
      if (lit.atom.is_fixed()) {
        if (fixed_truth(lit.atom, ctx) == lit.positive) {
          chosen = std::set<Real>{};
          break;
        }
        continue;
      }
      const Pattern pattern = lit.atom.pattern();
      chosen = lit.positive ? detail::witness_for_pattern(base, pattern, mode)
                            : detail::witness_against_pattern(base, pattern, mode);
      if (chosen) break;
    }
    if (!chosen) return std::nullopt;
    all.insert(chosen->begin(), chosen->end());
  }
  return all;
}

// ---------------------------------------------------------------------------
// The generic as seen by a condition

enum class GenericBit { one, zero_forced, undecided };

inline char to_char(GenericBit b) {
  switch (b) {
    case GenericBit::one: return '1';
    case GenericBit::zero_forced: return '0';
    case GenericBit::undecided: return '?';
  }
  return '?';
}

inline GenericBit generic_bit(const Condition& p, Code n, const Mode& mode) {
  if (p.phi.contains_code(n)) return GenericBit::one;
  return zero_forced(p, n, mode) ? GenericBit::zero_forced : GenericBit::undecided;
}

/// Positions 0..length-1 of the generic as '1', '0' or '?'.
inline std::string generic_oracle(const Condition& p, std::size_t length, const Mode& mode = Mode::full()) {
  std::string out;
  out.reserve(length);
  for (Code n = 0; n < length; ++n) out.push_back(to_char(generic_bit(p, n, mode)));
  return out;
}

/// Positions 0..length-1 of C join generic: even position 2n carries C(n),
/// odd position 2n+1 carries generic bit n.
inline std::string joined_oracle(const Condition& p, const Real& c, std::size_t length, const Mode& mode = Mode::full()) {
  std::string out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(i % 2 == 0 ? c.bit(i / 2) : to_char(generic_bit(p, i / 2, mode)));
  }
  return out;
}

/// The value p forces for program e on input x within s steps, reading the
/// first `length` positions of C join generic; nothing if the run touches
/// an undecided bit, reads past the slice, or does not halt in time.
inline std::optional<std::uint64_t> local_computation(const Condition& p, const Evaluator& ev, std::uint64_t e,
                                                      std::uint64_t x, std::uint64_t steps, std::size_t length,
                                                      const Real& c, const Mode& mode = Mode::full()) {
  return ev.eval(e, x, steps, joined_oracle(p, c, length, mode));
}

}  // namespace ksdeg::ksf
