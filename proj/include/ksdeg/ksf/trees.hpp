#pragma once

// Bounded searches over extensions of a finite functional: splits,
// essentiality of string vectors, and the frontiers of the trees T and U.
//
// Essentiality is co-r.e.: a vector is refuted by exhibiting an extension
// that avoids it, and no finite search can confirm it. Every positive
// answer here is therefore "essential up to the search bounds".

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ksdeg/ksf/condition.hpp"
#include "ksdeg/ksf/evaluator.hpp"
#include "ksdeg/ksf/forcing.hpp"
#include "ksdeg/ksf/language.hpp"

namespace ksdeg::ksf {

struct SearchBounds {
  std::size_t max_new_axioms = 1;
  std::size_t max_use_length = 3;
  std::uint64_t max_axiom_input = 1;   // new axioms have inputs 0..max_axiom_input
  std::size_t max_new_reals = 1;       // reals a split condition may add
  std::uint64_t max_steps = 64;
  std::uint64_t inputs = 2;            // program inputs 0..inputs-1
  std::size_t oracle_length = 64;      // length of the joined oracle slice

  friend bool operator==(const SearchBounds&, const SearchBounds&) = default;
};

/// Every functional Phi0 + N extending (Phi0, reals) with at most
/// max_new_axioms new axioms inside the bounds, each passing `keep`; in
/// order of |N|, then lexicographically.
template <class Keep>
std::vector<TuringFunctional> bounded_extensions(const Condition& base, const Mode& mode, const SearchBounds& b,
                                                 Keep keep) {
  std::vector<Axiom> pool;
  const auto old_max = base.phi.max_use_length();
  for (std::size_t len = old_max ? *old_max + 1 : 0; len <= b.max_use_length; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      BinaryString s;
      for (std::size_t i = len; i-- > 0;) s.push_back(((bits >> i) & 1) ? '1' : '0');
      for (std::uint64_t x = 0; x <= b.max_axiom_input; ++x) {
        for (int y = 0; y <= 1; ++y) {
          Axiom a{x, y, s};
          if (admissible_new_axiom(base, a, mode) && keep(a)) pool.push_back(a);
        }
      }
    }
  }
  std::sort(pool.begin(), pool.end());
  std::vector<TuringFunctional> out;
  std::vector<std::size_t> pick;
  for (std::size_t size = 0; size <= b.max_new_axioms && size <= pool.size(); ++size) {
    // All index combinations of this size, lexicographically.
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      TuringFunctional f = base.phi;
      for (std::size_t i : pick) f.insert(pool[i]);
      if (validate_functional(f).ok()) out.push_back(std::move(f));
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == pool.size() - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

/// Reals a split search may add: every string of length max_use_length
/// followed by zeros (these block every axiom whose use lies along them).
inline std::vector<Real> blocker_pool(const SearchBounds& b, const Mode& mode) {
  std::set<Real> pool;
  const std::size_t len = b.max_use_length;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
    BinaryString s;
    for (std::size_t i = len; i-- > 0;) s.push_back(((bits >> i) & 1) ? '1' : '0');
    Real r(s, "0");
    if (!mode.is_q() || !(r == mode.a)) pool.insert(r);
  }
  return {pool.begin(), pool.end()};
}

struct Split {
  Condition p, q;
  std::uint64_t x = 0;
  std::uint64_t y1 = 0, y2 = 0;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Parameters of a split search besides the bounds.
struct SplitTarget {
  std::uint64_t program = 0;
  Real c;   // the parameter real joined with the generic

  friend bool operator==(const SplitTarget&, const SplitTarget&) = default;
};

namespace detail {

template <class Keep>
std::optional<Split> search_split(const TuringFunctional& phi0, const SplitTarget& t, const SearchBounds& b,
                                  const Mode& mode, const Evaluator& ev, Keep keep) {
  const Condition base{phi0, {}};
  require_member(base, mode, "functional");
  const auto functionals = bounded_extensions(base, mode, b, keep);
  const auto pool = blocker_pool(b, mode);

  std::vector<Condition> conditions;
  for (const auto& f : functionals) {
    std::vector<std::size_t> pick;
    for (std::size_t size = 0; size <= b.max_new_reals && size <= pool.size(); ++size) {
      pick.resize(size);
      for (std::size_t i = 0; i < size; ++i) pick[i] = i;
      while (true) {
        Condition c{f, {}};
        for (std::size_t i : pick) c.reals.insert(pool[i]);
        conditions.push_back(std::move(c));
        std::size_t i = size;
        while (i > 0 && pick[i - 1] == pool.size() - size + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }

  // For each input, the first condition showing each value; a later
  // condition with a different value forms a split with it.
  std::vector<std::map<std::uint64_t, std::size_t>> first(b.inputs);
  std::optional<std::tuple<std::size_t, std::size_t, std::uint64_t>> best;
  for (std::size_t j = 0; j < conditions.size(); ++j) {
    for (std::uint64_t x = 0; x < b.inputs; ++x) {
      const auto v = local_computation(conditions[j], ev, t.program, x, b.max_steps, b.oracle_length, t.c, mode);
      if (!v) continue;
      for (const auto& [w, i] : first[x]) {
        if (w == *v) continue;
        const auto cand = std::make_tuple(i, j, x);
        if (!best || cand < *best) best = cand;
      }
      first[x].try_emplace(*v, j);
    }
  }
  if (!best) return std::nullopt;
  const auto [i, j, x] = *best;
  const auto y1 = local_computation(conditions[i], ev, t.program, x, b.max_steps, b.oracle_length, t.c, mode);
  const auto y2 = local_computation(conditions[j], ev, t.program, x, b.max_steps, b.oracle_length, t.c, mode);
  return Split{conditions[i], conditions[j], x, *y1, *y2};
}

}  // namespace detail

/// Two conditions extending (phi0, {}) inside the bounds whose local
/// computations disagree at a common input; nothing means "no split up to
/// the bounds", not "no split".
inline std::optional<Split> find_split(const TuringFunctional& phi0, const SplitTarget& t, const SearchBounds& b,
                                       const Mode& mode, const Evaluator& ev) {
  return detail::search_split(phi0, t, b, mode, ev, [](const Axiom&) { return true; });
}

/// Re-checks a split from scratch.
inline std::string verify_split(const TuringFunctional& phi0, const SplitTarget& t, const SearchBounds& b,
                                const Mode& mode, const Evaluator& ev, const Split& s) {
  const Condition base{phi0, {}};
  if (!extends(s.p, base, mode)) return "first condition does not extend the base";
  if (!extends(s.q, base, mode)) return "second condition does not extend the base";
  if (s.y1 == s.y2) return "outputs agree";
  const auto y1 = local_computation(s.p, ev, t.program, s.x, b.max_steps, b.oracle_length, t.c, mode);
  const auto y2 = local_computation(s.q, ev, t.program, s.x, b.max_steps, b.oracle_length, t.c, mode);
  if (y1 != s.y1) return "first computation does not reproduce";
  if (y2 != s.y2) return "second computation does not reproduce";
  return {};
}

// ---------------------------------------------------------------------------
// Essentiality

/// Strings of one common length.
using StringVector = std::vector<BinaryString>;

inline bool is_string_vector(const StringVector& v) {
  return std::all_of(v.begin(), v.end(), [&](const BinaryString& s) { return is_binary(s) && s.size() == v.front().size(); });
}

/// A conjunction of universally quantified quantifier-free conjuncts.
struct ConjunctTarget {
  std::vector<Family> families;
};

using EssentialTarget = std::variant<ConjunctTarget, SplitTarget>;

struct Refutation {
  // Conjunct targets: a condition forcing the negation of one instance.
  Condition condition;
  std::size_t family = 0;
  std::string value;
  // Split targets: the avoiding split.
  std::optional<Split> split;

  friend bool operator==(const Refutation&, const Refutation&) = default;
};

struct EssentialityVerdict {
  std::optional<Refutation> refuted;   // empty: essential up to `bounds`
  SearchBounds bounds;

  [[nodiscard]] bool essential_up_to_bounds() const { return !refuted.has_value(); }

  friend bool operator==(const EssentialityVerdict&, const EssentialityVerdict&) = default;
};

/// No component of tau is compatible with the use of `a`.
inline bool avoids(const Axiom& a, const StringVector& tau) {
  return std::none_of(tau.begin(), tau.end(), [&](const BinaryString& t) { return compatible(a.sigma, t); });
}

inline EssentialityVerdict essential_up_to(const StringVector& tau, const TuringFunctional& phi0,
                                           const EssentialTarget& target, const SearchBounds& b, const Mode& mode,
                                           const Evaluator& ev, const std::map<std::string, Real>& env = {}) {
  if (!is_string_vector(tau)) throw std::invalid_argument("vector components must be binary strings of one length");
  EssentialityVerdict out{std::nullopt, b};
  const auto keep = [&](const Axiom& a) { return avoids(a, tau); };
  if (const auto* split = std::get_if<SplitTarget>(&target)) {
    if (auto s = detail::search_split(phi0, *split, b, mode, ev, keep)) out.refuted = Refutation{{}, 0, {}, std::move(s)};
    return out;
  }
  const auto& conj = std::get<ConjunctTarget>(target);
  const ForcingContext ctx{&ev, env};
  const auto inst = instances(conj.families, env);
  const Condition base{phi0, {}};
  require_member(base, mode, "functional");
  for (const auto& f : bounded_extensions(base, mode, b, keep)) {
    for (const auto& i : inst) {
      if (auto w = decide_qf_forcing(f, negate(i.sentence), mode, ctx)) {
        out.refuted = Refutation{Condition{f, std::move(*w)}, i.family, i.value, std::nullopt};
        return out;
      }
    }
  }
  return out;
}

/// Re-checks a refutation without the search that produced it: the
/// condition extends (phi0, {}), adds no axiom compatible with a component
/// of tau, and forces the negated instance (or the split reproduces).
inline std::string verify_refutation(const StringVector& tau, const TuringFunctional& phi0,
                                     const EssentialTarget& target, const SearchBounds& b, const Mode& mode,
                                     const Evaluator& ev, const Refutation& r,
                                     const std::map<std::string, Real>& env = {}) {
  const Condition base{phi0, {}};
  auto fresh_avoid = [&](const Condition& c) {
    for (const auto& a : c.phi.axioms()) {
      if (!phi0.contains(a) && !avoids(a, tau)) return false;
    }
    return true;
  };
  if (const auto* split = std::get_if<SplitTarget>(&target)) {
    if (!r.split) return "split target refuted without a split";
    if (!fresh_avoid(r.split->p) || !fresh_avoid(r.split->q)) return "a new axiom is compatible with the vector";
    return verify_split(phi0, *split, b, mode, ev, *r.split);
  }
  const auto& conj = std::get<ConjunctTarget>(target);
  if (r.family >= conj.families.size()) return "no such conjunct";
  const auto& fam = conj.families[r.family];
  std::map<std::string, std::string> bind;
  if (fam.domain != Family::Domain::none) bind[fam.variable] = r.value;
  const ForcingQf instance = parse_forcing(fam.body, bind);
  if (!extends(r.condition, base, mode)) return "condition does not extend the base";
  if (!fresh_avoid(r.condition)) return "a new axiom is compatible with the vector";
  if (!forces_qf(r.condition, negate(instance), mode, ForcingContext{&ev, env})) {
    return "condition does not force the negated conjunct";
  }
  return {};
}

/// Every k-vector of strings of length `depth` that survives
/// essential_up_to, in lexicographic order.
inline std::vector<StringVector> tree_frontier(const TuringFunctional& phi0, const EssentialTarget& target,
                                               std::size_t k, std::size_t depth, const SearchBounds& b,
                                               const Mode& mode, const Evaluator& ev,
                                               const std::map<std::string, Real>& env = {}) {
  if (k * depth > 20) throw std::invalid_argument("frontier too large to enumerate");
  std::vector<StringVector> out;
  const std::uint64_t total = std::uint64_t{1} << (k * depth);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    StringVector v(k);
    for (std::size_t i = 0; i < k * depth; ++i) {
      v[i / depth].push_back(((bits >> (k * depth - 1 - i)) & 1) ? '1' : '0');
    }
    if (k == 0) v.clear();
    if (essential_up_to(v, phi0, target, b, mode, ev, env).essential_up_to_bounds()) out.push_back(std::move(v));
  }
  return out;
}

/// The reals along a chain of vectors: component i continues the last
/// vector's component i with the given period.
inline std::vector<Real> path_reals(const std::vector<StringVector>& chain, const BinaryString& period,
                                    const Mode& mode = Mode::full()) {
  if (chain.empty()) throw std::invalid_argument("empty chain");
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!is_string_vector(chain[i]) || chain[i].size() != chain[0].size()) {
      throw std::invalid_argument("chain entries must be vectors of one size");
    }
    if (i == 0) continue;
    const auto& prev = chain[i - 1];
    const auto& cur = chain[i];
    if (!cur.empty() && cur[0].size() <= prev[0].size()) throw std::invalid_argument("chain lengths must increase");
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (!is_prefix(prev[j], cur[j])) throw std::invalid_argument("chain entries must extend their predecessors");
    }
  }
  std::vector<Real> out;
  for (const auto& s : chain.back()) {
    Real r(s, period);
    if (mode.is_q() && r == mode.a) throw std::invalid_argument("path continues into the real A");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ksdeg::ksf
