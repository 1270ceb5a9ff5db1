#pragma once

// Forcing conditions (Phi, X) and the extension relation, in the full
// forcing P and in the restricted forcing Q(A, B).

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksdeg/ksf/axiom.hpp"
#include "ksdeg/ksf/functional.hpp"
#include "ksdeg/ksf/real.hpp"

namespace ksdeg::ksf {

struct Condition {
  TuringFunctional phi;
  std::set<Real> reals;

  friend bool operator==(const Condition&, const Condition&) = default;
  friend auto operator<=>(const Condition&, const Condition&) = default;
};

/// P, or Q(A, B): conditions whose functional partially computes B on input
/// A and whose reals exclude A.
struct Mode {
  enum class Kind { p, q };

  Kind kind = Kind::p;
  Real a, b;

  static Mode full() { return {}; }
  static Mode restricted(Real a, Real b) { return {Kind::q, std::move(a), std::move(b)}; }

  [[nodiscard]] bool is_q() const { return kind == Kind::q; }
  [[nodiscard]] const Real* avoid() const { return is_q() ? &a : nullptr; }

  friend bool operator==(const Mode&, const Mode&) = default;
};

inline int real_value(const Real& r, std::uint64_t n) { return r.bit(static_cast<std::size_t>(n)) == '1' ? 1 : 0; }

/// The axiom is compatible with Q(A, B): if it applies to A it outputs B(x).
inline bool respects_q(const Axiom& ax, const Mode& mode) {
  return !mode.is_q() || !mode.a.has_prefix(ax.sigma) || ax.y == real_value(mode.b, ax.x);
}

inline bool membership_q(const Condition& p, const Real& a, const Real& b) {
  if (p.reals.count(a)) return false;
  const Mode m = Mode::restricted(a, b);
  return std::all_of(p.phi.axioms().begin(), p.phi.axioms().end(), [&](const Axiom& ax) { return respects_q(ax, m); });
}

inline bool is_member(const Condition& p, const Mode& mode) {
  return validate_functional(p.phi).ok() && (!mode.is_q() || membership_q(p, mode.a, mode.b));
}

inline void require_member(const Condition& p, const Mode& mode, const char* which) {
  if (auto check = validate_functional(p.phi); !check) {
    throw std::invalid_argument(std::string(which) + " has an invalid functional: " + check.message);
  }
  if (mode.is_q() && !membership_q(p, mode.a, mode.b)) {
    throw std::invalid_argument(std::string(which) + " is not a condition of the restricted forcing");
  }
}

/// q extends p (q <= p).
inline bool extends(const Condition& q, const Condition& p, const Mode& mode = Mode::full()) {
  require_member(q, mode, "extending condition");
  require_member(p, mode, "base condition");
  if (!p.phi.subset_of(q.phi)) return false;
  const auto old_max = p.phi.max_use_length();
  for (const auto& ax : q.phi.axioms()) {
    if (p.phi.contains(ax)) continue;
    if (old_max && ax.sigma.size() <= *old_max) return false;
    for (const auto& x : p.reals) {
      if (applies_to(ax, x)) return false;
    }
  }
  return std::includes(q.reals.begin(), q.reals.end(), p.reals.begin(), p.reals.end());
}

/// Whether `ax` could be added to p on its own terms: new, longer than every
/// old use, not applying to a real of p, and respecting Q.
inline bool admissible_new_axiom(const Condition& p, const Axiom& ax, const Mode& mode) {
  if ((ax.y != 0 && ax.y != 1) || p.phi.contains(ax)) return false;
  if (const auto m = p.phi.max_use_length(); m && ax.sigma.size() <= *m) return false;
  for (const auto& x : p.reals) {
    if (applies_to(ax, x)) return false;
  }
  return respects_q(ax, mode);
}

/// A partial assignment of generic bits: position -> bit.
using Pattern = std::map<Code, bool>;

/// What an extension of a condition has to look like.
struct ExtensionGoals {
  std::set<Axiom> required;               // must be in the extension
  std::set<Axiom> forbidden;              // must not be in it
  std::vector<Pattern> disagree;          // each must be violated somewhere on its domain

  /// Adds "the extension's generic bits agree with pattern". Returns false
  /// when that is impossible outright (a 1 at a position coding no axiom).
  bool agree(const Pattern& pattern) {
    for (const auto& [n, bit] : pattern) {
      const auto d = decode(n);
      if (!d.axiom) {
        if (bit) return false;
        continue;
      }
      (bit ? required : forbidden).insert(*d.axiom);
    }
    return true;
  }
};

namespace detail {

class ExtensionSearch {
 public:
  ExtensionSearch(const Condition& p, const Mode& mode, const ExtensionGoals& goals)
      : p_(p), mode_(mode), goals_(goals), current_(p.phi.axioms()), out_(goals.forbidden) {
    old_max_ = p.phi.max_use_length();
  }

  std::optional<TuringFunctional> run() {
    for (const auto& f : goals_.forbidden) {
      if (p_.phi.contains(f)) return std::nullopt;
    }
    if (solve()) return TuringFunctional(current_);
    return std::nullopt;
  }

 private:
  struct Option {
    bool add;  // add to the functional, or forbid
    Axiom axiom;
  };

  bool addable(const Axiom& a) const {
    if (out_.count(a) || !admissible_new_axiom(p_, a, mode_)) return false;
    return std::none_of(current_.begin(), current_.end(),
                        [&](const Axiom& b) { return pair_conflict(a, b) != FunctionalCheck::Rule::none; });
  }

  // Options for the first unmet goal; nullopt when every goal is met.
  std::optional<std::vector<Option>> next_goal() const {
    for (const auto& r : goals_.required) {
      if (!current_.count(r)) return std::vector<Option>{{true, r}};
    }
    for (const auto& a : current_) {
      if (p_.phi.contains(a)) continue;
      for (std::uint64_t x1 = 0; x1 < a.x; ++x1) {
        if (has_helper(current_, x1, a.sigma)) continue;
        std::vector<Option> opts;
        for (std::size_t len = 0; len < a.sigma.size(); ++len) {
          if (old_max_ && len <= *old_max_) continue;
          for (int y = 0; y <= 1; ++y) opts.push_back({true, Axiom{x1, y, a.sigma.substr(0, len)}});
        }
        return opts;
      }
    }
    for (const auto& pattern : goals_.disagree) {
      bool met = false;
      std::vector<Option> opts;
      for (const auto& [n, bit] : pattern) {
        const auto d = decode(n);
        if (!d.axiom) {
          if (bit) met = true;
          continue;
        }
        const Axiom& a = *d.axiom;
        if (bit) {
          if (current_.count(a)) continue;
          if (out_.count(a) || !admissible_new_axiom(p_, a, mode_)) {
            met = true;
          } else {
            opts.push_back({false, a});
          }
        } else {
          if (current_.count(a)) met = true;
          else opts.push_back({true, a});
        }
        if (met) break;
      }
      if (met) continue;
      // Forbidding is cheaper than adding; try those first.
      std::stable_partition(opts.begin(), opts.end(), [](const Option& o) { return !o.add; });
      return opts;
    }
    return std::nullopt;
  }

  bool solve() {
    auto goal = next_goal();
    if (!goal) return true;
    for (const auto& opt : *goal) {
      if (opt.add) {
        if (!addable(opt.axiom)) continue;
        current_.insert(opt.axiom);
        if (solve()) return true;
        current_.erase(opt.axiom);
      } else {
        if (current_.count(opt.axiom)) continue;
        out_.insert(opt.axiom);
        if (solve()) return true;
        out_.erase(opt.axiom);
      }
    }
    return false;
  }

  const Condition& p_;
  const Mode& mode_;
  const ExtensionGoals& goals_;
  std::set<Axiom> current_;
  std::set<Axiom> out_;
  std::optional<std::size_t> old_max_;
};

}  // namespace detail

/// A functional Phi_q such that (Phi_q, X_p) extends p and meets the goals,
/// or nothing when no extension of p does. Exact: helper axioms demanded by
/// use-monotonicity are searched among initial segments of required uses,
/// which is where any extension must have them.
inline std::optional<TuringFunctional> find_extension(const Condition& p, const Mode& mode, const ExtensionGoals& goals) {
  return detail::ExtensionSearch(p, mode, goals).run();
}

/// Clause (b) of the generic-prefix forcing clause for one position n: n
/// codes no axiom, or it codes an axiom kept out of p and of every extension
/// of p because (i) p has an axiom with a longer use, or one with a larger
/// input and a compatible use, (ii) a real of p extends the use, or (iii) in
/// Q the use is an initial segment of A and the output disagrees with B.
inline bool zero_forced(const Condition& p, Code n, const Mode& mode) {
  const auto d = decode(n);
  if (!d.axiom) return true;
  const Axiom& a = *d.axiom;
  if (p.phi.contains(a)) return false;
  for (const auto& b : p.phi.axioms()) {
    if (b.sigma.size() > a.sigma.size()) return true;
    if (b.x > a.x && compatible(b.sigma, a.sigma)) return true;
  }
  for (const auto& x : p.reals) {
    if (applies_to(a, x)) return true;
  }
  return mode.is_q() && mode.a.has_prefix(a.sigma) && a.y != real_value(mode.b, a.x);
}

/// A real that keeps the axiom out of every extension: its use followed by
/// zeros, steering clear of A in Q.
inline Real blocker(const Axiom& a, const Mode& mode) { return real_extending(a.sigma, mode.avoid()); }

}  // namespace ksdeg::ksf
