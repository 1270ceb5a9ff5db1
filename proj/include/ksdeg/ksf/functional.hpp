#pragma once

// Finite use-monotone Turing functionals.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ksdeg/ksf/axiom.hpp"
#include "ksdeg/ksf/real.hpp"

namespace ksdeg::ksf {

/// A finite set of axioms, kept sorted.
class TuringFunctional {
 public:
  TuringFunctional() = default;
  TuringFunctional(std::initializer_list<Axiom> axioms) : axioms_(axioms) {}
  explicit TuringFunctional(std::set<Axiom> axioms) : axioms_(std::move(axioms)) {}

  [[nodiscard]] const std::set<Axiom>& axioms() const { return axioms_; }
  [[nodiscard]] bool contains(const Axiom& a) const { return axioms_.count(a) != 0; }
  [[nodiscard]] bool empty() const { return axioms_.empty(); }
  [[nodiscard]] std::size_t size() const { return axioms_.size(); }
  bool insert(const Axiom& a) { return axioms_.insert(a).second; }
  void erase(const Axiom& a) { axioms_.erase(a); }

  /// Length of the longest use, or nothing for the empty functional.
  [[nodiscard]] std::optional<std::size_t> max_use_length() const {
    std::optional<std::size_t> m;
    for (const auto& a : axioms_) m = std::max(m.value_or(0), a.sigma.size());
    return m;
  }

  [[nodiscard]] bool contains_code(Code n) const {
    const auto d = decode(n);
    return d.axiom && contains(*d.axiom);
  }

  [[nodiscard]] bool subset_of(const TuringFunctional& other) const {
    return std::includes(other.axioms_.begin(), other.axioms_.end(), axioms_.begin(), axioms_.end());
  }

  friend bool operator==(const TuringFunctional&, const TuringFunctional&) = default;
  friend auto operator<=>(const TuringFunctional&, const TuringFunctional&) = default;

 private:
  std::set<Axiom> axioms_;
};

struct FunctionalCheck {
  enum class Rule { none, bad_axiom, functionality, use_monotone_shorter_use, use_monotone_smaller_input };

  Rule rule = Rule::none;
  std::vector<Axiom> witnesses;
  std::string message;

  [[nodiscard]] bool ok() const { return rule == Rule::none; }
  explicit operator bool() const { return ok(); }
};

inline const char* to_string(FunctionalCheck::Rule r) {
  switch (r) {
    case FunctionalCheck::Rule::none: return "none";
    case FunctionalCheck::Rule::bad_axiom: return "bad_axiom";
    case FunctionalCheck::Rule::functionality: return "functionality";
    case FunctionalCheck::Rule::use_monotone_shorter_use: return "use_monotone_shorter_use";
    case FunctionalCheck::Rule::use_monotone_smaller_input: return "use_monotone_smaller_input";
  }
  return "?";
}

/// Pairwise rules between two axioms of one functional: functionality and
/// "a strictly shorter use serves a strictly smaller input". Returns the
/// violated rule, or none.
inline FunctionalCheck::Rule pair_conflict(const Axiom& a, const Axiom& b) {
  if (a == b) return FunctionalCheck::Rule::none;
  if (a.x == b.x && compatible(a.sigma, b.sigma)) return FunctionalCheck::Rule::functionality;
  if (is_proper_prefix(a.sigma, b.sigma) && !(a.x < b.x)) return FunctionalCheck::Rule::use_monotone_shorter_use;
  if (is_proper_prefix(b.sigma, a.sigma) && !(b.x < a.x)) return FunctionalCheck::Rule::use_monotone_shorter_use;
  return FunctionalCheck::Rule::none;
}

/// Some axiom of `f` serves input x1 with a use strictly inside sigma.
inline bool has_helper(const std::set<Axiom>& f, std::uint64_t x1, const BinaryString& sigma) {
  for (const auto& b : f) {
    if (b.x == x1 && is_proper_prefix(b.sigma, sigma)) return true;
  }
  return false;
}

inline FunctionalCheck validate_functional(const TuringFunctional& f) {
  using Rule = FunctionalCheck::Rule;
  const auto& ax = f.axioms();
  for (const auto& a : ax) {
    if ((a.y != 0 && a.y != 1) || !is_binary(a.sigma)) {
      return {Rule::bad_axiom, {a}, "malformed axiom " + to_string(a)};
    }
  }
  for (auto i = ax.begin(); i != ax.end(); ++i) {
    for (auto j = std::next(i); j != ax.end(); ++j) {
      if (i->x == j->x && compatible(i->sigma, j->sigma)) {
        return {Rule::functionality, {*i, *j},
                "functionality: " + to_string(*i) + " and " + to_string(*j) + " have compatible uses"};
      }
    }
  }
  for (const auto& a : ax) {
    for (const auto& b : ax) {
      if (is_proper_prefix(a.sigma, b.sigma) && !(a.x < b.x)) {
        return {Rule::use_monotone_shorter_use, {a, b},
                "use-monotone: " + to_string(a) + " has a shorter use than " + to_string(b) + " but no smaller input"};
      }
    }
  }
  for (const auto& b : ax) {
    for (std::uint64_t x1 = 0; x1 < b.x; ++x1) {
      if (!has_helper(ax, x1, b.sigma)) {
        return {Rule::use_monotone_smaller_input, {b},
                "use-monotone: no axiom for input " + std::to_string(x1) + " with use strictly inside that of " +
                    to_string(b)};
      }
    }
  }
  return {};
}

/// Phi(x, oracle): the output of the axiom for x whose use is an initial
/// segment of the oracle.
inline std::optional<int> eval_functional(const TuringFunctional& f, std::uint64_t x, const BinaryString& oracle) {
  for (const auto& a : f.axioms()) {
    if (a.x == x && is_prefix(a.sigma, oracle)) return a.y;
  }
  return std::nullopt;
}

inline std::optional<int> eval_functional(const TuringFunctional& f, std::uint64_t x, const Real& oracle) {
  for (const auto& a : f.axioms()) {
    if (a.x == x && oracle.has_prefix(a.sigma)) return a.y;
  }
  return std::nullopt;
}

/// The axiom applies to the real: its use is an initial segment of it.
inline bool applies_to(const Axiom& a, const Real& r) { return r.has_prefix(a.sigma); }

}  // namespace ksdeg::ksf
