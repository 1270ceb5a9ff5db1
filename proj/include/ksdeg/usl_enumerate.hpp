#pragma once

// Enumeration of join-generated semilattices.
//
// A semilattice join-generated by labeled generators g_1..g_k (plus 0) is
// determined by its atomic facts a(g, T) := "g <= join(T)" for generator
// subsets T. Collected per subset, the facts form the map
// cl(T) = { g : a(g, T) }, and the closure rules
//   g in T                        => a(g, T)
//   T subset T' and a(g, T)       => a(g, T')
//   a(g, T) and a(h, T') for h in T => a(g, T')
// say exactly that cl is a closure operator. Elements are the closed sets,
// order is inclusion, join(A, B) = cl(A u B), and 0 = cl({}) (a generator
// may sit in cl({}), i.e. equal 0).
//
// The search assigns cl(T) subset by subset in order of increasing size,
// propagating the rules in both directions, so every closure operator is
// produced exactly once and dead branches are cut as soon as a rule fails.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksdeg/usl.hpp"

namespace ksdeg::usl {

using Mask = std::uint32_t;

inline constexpr unsigned kMaxGenerators = 8;

/// Labeled diagram: a semilattice together with a generating valuation.
struct Diagram {
  FiniteUsl usl;
  GeneratorValuation valuation;
  CanonicalKey key;
};

struct EnumerationResult {
  std::vector<Diagram> diagrams;  // sorted by key
  bool truncated = false;         // some structure exceeded the carrier cap
  std::size_t dropped = 0;
};

struct Extension {
  FiniteUsl usl;
  GeneratorValuation valuation;  // base names first, then the new ones
  std::vector<Element> embedding;  // base element -> element of usl
  CanonicalKey key;
};

struct ExtensionResult {
  std::vector<Extension> extensions;  // sorted by key
  bool truncated = false;
  std::size_t dropped = 0;
};

inline std::vector<std::string> default_names(const std::string& stem, std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= count; ++i) names.push_back(stem + std::to_string(i));
  return names;
}

namespace detail {

class ClosureSearch {
 public:
  /// `admissible(T, C)` may veto a choice cl(T) = C before it is propagated.
  using Filter = std::function<bool(Mask, Mask)>;
  /// Returns false to stop the search.
  using Visit = std::function<bool(const std::vector<Mask>&)>;

  ClosureSearch(unsigned k, Filter admissible) : k_(k), admissible_(std::move(admissible)) {
    if (k > kMaxGenerators) throw std::invalid_argument("too many generators for enumeration");
    const Mask count = Mask{1} << k;
    for (Mask t = 0; t < count; ++t) order_.push_back(t);
    std::stable_sort(order_.begin(), order_.end(),
                     [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
    closure_.assign(count, kUnset);
  }

  /// False when a visit stopped the search.
  bool run(const Visit& visit) { return step(0, visit); }

 private:
  static constexpr Mask kUnset = ~Mask{0};

  bool step(std::size_t idx, const Visit& visit) {
    if (idx == order_.size()) return visit(closure_);
    const Mask t = order_[idx];
    const Mask full = (Mask{1} << k_) - 1;
    const std::size_t decided = idx;

    Mask lower = t;
    for (std::size_t i = 0; i < decided; ++i) {
      const Mask u = order_[i];
      if ((u & ~t) == 0) lower |= closure_[u];
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t i = 0; i < decided; ++i) {
        const Mask u = order_[i];
        if ((u & ~lower) == 0 && (closure_[u] & ~lower) != 0) {
          lower |= closure_[u];
          grew = true;
        }
      }
    }
    Mask upper = full;
    for (std::size_t i = 0; i < decided; ++i) {
      const Mask u = order_[i];
      if ((t & ~closure_[u]) == 0) upper &= closure_[u];
    }
    if ((lower & ~upper) != 0) return true;

    const Mask free = upper & ~lower;
    // Submasks of `free` in increasing numeric order.
    std::vector<Mask> choices;
    for (Mask s = free;; s = (s - 1) & free) {
      choices.push_back(s);
      if (s == 0) break;
    }
    std::reverse(choices.begin(), choices.end());
    for (Mask s : choices) {
      const Mask c = lower | s;
      bool closed = true;
      for (std::size_t i = 0; i < decided && closed; ++i) {
        const Mask u = order_[i];
        if ((u & ~c) == 0 && (closure_[u] & ~c) != 0) closed = false;
      }
      if (!closed) continue;
      if (admissible_ && !admissible_(t, c)) continue;
      closure_[t] = c;
      const bool go_on = step(idx + 1, visit);
      closure_[t] = kUnset;
      if (!go_on) return false;
    }
    return true;
  }

  unsigned k_;
  Filter admissible_;
  std::vector<Mask> order_;
  std::vector<Mask> closure_;
};

struct Realized {
  FiniteUsl usl;
  std::vector<Mask> closed;        // closed set of each element
  std::map<Mask, Element> index;   // closed set -> element
};

inline std::vector<Mask> closed_sets(const std::vector<Mask>& closure) {
  std::vector<Mask> sets(closure.begin(), closure.end());
  std::sort(sets.begin(), sets.end(), [](Mask a, Mask b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

inline Realized realize(const std::vector<Mask>& closure, const std::vector<Mask>& sets) {
  Realized r;
  r.closed = sets;
  const std::size_t n = sets.size();
  for (Element e = 0; e < n; ++e) r.index[sets[e]] = e;
  UslTables t;
  t.size = n;
  t.leq.assign(n, std::vector<bool>(n, false));
  std::vector<std::vector<std::size_t>> join(n, std::vector<std::size_t>(n, 0));
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      t.leq[a][b] = (sets[a] & ~sets[b]) == 0;
      join[a][b] = r.index.at(closure[sets[a] | sets[b]]);
    }
  }
  t.join = std::move(join);
  r.usl = FiniteUsl::make(t);
  return r;
}

}  // namespace detail

/// Every semilattice join-generated by the named generators and 0, one per
/// labeled isomorphism class, sorted by canonical key.
inline EnumerationResult enumerate_generated(const std::vector<std::string>& names, std::size_t cap) {
  if (cap < 1) throw std::invalid_argument("carrier cap must be at least 1");
  const auto k = static_cast<unsigned>(names.size());
  EnumerationResult result;
  detail::ClosureSearch search(k, nullptr);
  std::map<CanonicalKey, Diagram> seen;
  search.run([&](const std::vector<Mask>& closure) {
    const auto sets = detail::closed_sets(closure);
    if (sets.size() > cap) {
      result.truncated = true;
      ++result.dropped;
      return true;
    }
    auto r = detail::realize(closure, sets);
    GeneratorValuation v;
    for (unsigned g = 0; g < k; ++g) v.add(names[g], r.index.at(closure[Mask{1} << g]));
    CanonicalKey key = canonicalize(r.usl, v);
    seen.try_emplace(key, Diagram{std::move(r.usl), std::move(v), key});
    return true;
  });
  for (auto& [key, d] : seen) result.diagrams.push_back(std::move(d));
  return result;
}

inline EnumerationResult enumerate_generated(std::size_t k, std::size_t cap) {
  return enumerate_generated(default_names("x", k), cap);
}

namespace detail {

struct ExtensionVisit {
  bool truncated = false;   // some extension exceeded the carrier cap
  std::size_t dropped = 0;
  bool stopped = false;     // the visitor ended the search
};

/// The closure operators of all end-extensions of (m, mv) by `j` new
/// generators, each passed once to `visit` (which returns false to stop).
/// Bits 0..k-1 of a closure mask are the base generators in valuation
/// order, the following j bits the new ones. Extensions larger than `cap`
/// are counted, not visited. New generators may land anywhere, including
/// inside the image of m.
template <class Visit>
ExtensionVisit visit_end_extensions(const FiniteUsl& m, const GeneratorValuation& mv, std::size_t j, std::size_t cap,
                                    Visit&& visit) {
  if (cap < 1) throw std::invalid_argument("carrier cap must be at least 1");
  if (!generates(m, mv)) throw std::invalid_argument("base valuation does not generate the base semilattice");
  const auto k = static_cast<unsigned>(mv.names.size());
  const auto total = static_cast<unsigned>(k + j);
  if (total > kMaxGenerators) throw std::invalid_argument("too many generators for enumeration");
  const Mask old_mask = (Mask{1} << k) - 1;

  // Closure operator of the base on its own generators.
  std::vector<Mask> base_closure(std::size_t{1} << k, 0);
  for (Mask t = 0; t <= old_mask; ++t) {
    Element top = 0;
    for (unsigned g = 0; g < k; ++g) {
      if (t & (Mask{1} << g)) top = m.join(top, mv.targets[g]);
    }
    Mask c = 0;
    for (unsigned g = 0; g < k; ++g) {
      if (m.leq(mv.targets[g], top)) c |= Mask{1} << g;
    }
    base_closure[t] = c;
  }

  ExtensionVisit out;
  const bool may_exceed = (std::size_t{1} << total) > cap;
  ClosureSearch search(total, [&](Mask t, Mask c) {
    if ((t & ~old_mask) != 0) return true;
    return (c & old_mask) == base_closure[t];
  });
  out.stopped = !search.run([&](const std::vector<Mask>& closure) {
    // End-extension: every closed set below the image of the base top is
    // generated by base generators alone.
    const Mask image_top = closure[old_mask];
    for (Mask d : closure) {
      if ((d & ~image_top) == 0 && closure[d & old_mask] != d) return true;
    }
    if (may_exceed && closed_sets(closure).size() > cap) {
      out.truncated = true;
      ++out.dropped;
      return true;
    }
    return static_cast<bool>(visit(closure));
  });
  return out;
}

}  // namespace detail

/// The end-extension a closure operator from visit_end_extensions describes.
inline Extension realize_extension(const FiniteUsl& m, const GeneratorValuation& mv,
                                   const std::vector<std::string>& new_names, const std::vector<Mask>& closure) {
  const auto k = static_cast<unsigned>(mv.names.size());
  const auto total = static_cast<unsigned>(k + new_names.size());
  auto r = detail::realize(closure, detail::closed_sets(closure));
  GeneratorValuation v;
  for (unsigned g = 0; g < total; ++g) {
    v.add(g < k ? mv.names[g] : new_names[g - k], r.index.at(closure[Mask{1} << g]));
  }
  std::vector<Element> embedding(m.size());
  for (Element e = 0; e < m.size(); ++e) {
    Mask below = 0;
    for (unsigned g = 0; g < k; ++g) {
      if (m.leq(mv.targets[g], e)) below |= Mask{1} << g;
    }
    embedding[e] = r.index.at(closure[below]);
  }
  // The key also pins the embedding: base elements are labeled by position.
  GeneratorValuation pinned = v;
  for (Element e = 0; e < m.size(); ++e) pinned.add("\x01" + std::to_string(e), embedding[e]);
  CanonicalKey key = canonicalize(r.usl, pinned);
  return Extension{std::move(r.usl), std::move(v), std::move(embedding), std::move(key)};
}

/// All end-extensions of (m, mv) generated by mv plus the new generators, one
/// per isomorphism class fixing every valuation and the embedding of m.
inline ExtensionResult enumerate_end_extensions(const FiniteUsl& m, const GeneratorValuation& mv,
                                                const std::vector<std::string>& new_names, std::size_t cap) {
  ExtensionResult result;
  std::map<CanonicalKey, Extension> seen;
  const auto visited = detail::visit_end_extensions(m, mv, new_names.size(), cap, [&](const std::vector<Mask>& closure) {
    auto ext = realize_extension(m, mv, new_names, closure);
    seen.try_emplace(ext.key, std::move(ext));
    return true;
  });
  result.truncated = visited.truncated;
  result.dropped = visited.dropped;
  for (auto& [key, ext] : seen) result.extensions.push_back(std::move(ext));
  return result;
}

inline ExtensionResult enumerate_end_extensions(const FiniteUsl& m, const GeneratorValuation& mv, std::size_t j,
                                                std::size_t cap) {
  return enumerate_end_extensions(m, mv, default_names("y", j), cap);
}

/// Every semilattice with at most max_size elements, up to isomorphism, by
/// exhaustive enumeration of order matrices. Test oracle only.
inline std::vector<FiniteUsl> brute_force_usls(std::size_t max_size) {
  if (max_size > 6) throw std::invalid_argument("brute force enumeration is limited to 6 elements");
  std::map<CanonicalKey, FiniteUsl> seen;
  for (std::size_t n = 1; n <= max_size; ++n) {
    // Free entries: leq[a][b] for distinct nonzero a, b.
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t a = 1; a < n; ++a) {
      for (std::size_t b = 1; b < n; ++b) {
        if (a != b) cells.emplace_back(a, b);
      }
    }
    const std::uint64_t total = std::uint64_t{1} << cells.size();
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      UslTables t;
      t.size = n;
      t.leq.assign(n, std::vector<bool>(n, false));
      for (std::size_t a = 0; a < n; ++a) {
        t.leq[a][a] = true;
        t.leq[0][a] = true;
      }
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (bits & (std::uint64_t{1} << i)) t.leq[cells[i].first][cells[i].second] = true;
      }
      if (!validate_usl(t)) continue;
      auto u = FiniteUsl::make(t);
      seen.try_emplace(canonicalize(u), std::move(u));
    }
  }
  std::vector<FiniteUsl> out;
  for (auto& [key, u] : seen) out.push_back(std::move(u));
  return out;
}

}  // namespace ksdeg::usl
