#pragma once

// Finite upper semilattices with least element 0 and total join.
//
// Elements are indices 0..size-1 and the least element is always index 0.
// Both relations are stored densely; carriers handled here are tiny.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ksdeg::usl {

using Element = std::size_t;

/// Raw tables as read from a file, before any checking.
struct UslTables {
  std::size_t size = 0;
  std::vector<std::vector<bool>> leq;
  std::optional<std::vector<std::vector<std::size_t>>> join;
};

struct UslCheck {
  enum class Status { valid, structural_error, axiom_violation };

  Status status = Status::valid;
  std::string axiom;               // empty when valid
  std::vector<Element> witness;    // element pair/triple for axiom violations
  std::string message;

  [[nodiscard]] bool ok() const { return status == Status::valid; }
  explicit operator bool() const { return ok(); }
};

namespace detail {

inline UslCheck structural(std::string message) {
  return {UslCheck::Status::structural_error, "shape", {}, std::move(message)};
}

inline UslCheck violation(std::string axiom, std::vector<Element> witness) {
  std::ostringstream out;
  out << axiom << " at element";
  if (witness.size() > 1) out << "s";
  for (std::size_t i = 0; i < witness.size(); ++i) out << (i ? ", " : " ") << witness[i];
  return {UslCheck::Status::axiom_violation, std::move(axiom), std::move(witness), out.str()};
}

}  // namespace detail

/// Checks shapes first, then the order axioms, then the join axioms, and
/// reports the first failure found in that order.
inline UslCheck validate_usl(const UslTables& t) {
  const std::size_t n = t.size;
  if (n < 1) return detail::structural("size must be at least 1");
  if (t.leq.size() != n) return detail::structural("leq must have size rows");
  for (std::size_t a = 0; a < n; ++a) {
    if (t.leq[a].size() != n) return detail::structural("leq row " + std::to_string(a) + " has wrong length");
  }
  if (t.join) {
    if (t.join->size() != n) return detail::structural("join must have size rows");
    for (std::size_t a = 0; a < n; ++a) {
      if ((*t.join)[a].size() != n) return detail::structural("join row " + std::to_string(a) + " has wrong length");
      for (std::size_t b = 0; b < n; ++b) {
        if ((*t.join)[a][b] >= n) {
          return detail::structural("join entry (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
        }
      }
    }
  }

  const auto& leq = t.leq;
  for (Element a = 0; a < n; ++a) {
    if (!leq[a][a]) return detail::violation("reflexivity", {a});
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = a + 1; b < n; ++b) {
      if (leq[a][b] && leq[b][a]) return detail::violation("antisymmetry", {a, b});
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (!leq[a][b]) continue;
      for (Element c = 0; c < n; ++c) {
        if (leq[b][c] && !leq[a][c]) return detail::violation("transitivity", {a, b, c});
      }
    }
  }
  for (Element e = 0; e < n; ++e) {
    if (!leq[0][e]) return detail::violation("zero is least", {e});
  }

  if (!t.join) {
    // Join is derived: every pair needs a least upper bound.
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        bool found = false;
        for (Element c = 0; c < n && !found; ++c) {
          if (!leq[a][c] || !leq[b][c]) continue;
          bool least = true;
          for (Element d = 0; d < n && least; ++d) {
            if (leq[a][d] && leq[b][d] && !leq[c][d]) least = false;
          }
          found = least;
        }
        if (!found) return detail::violation("join exists", {a, b});
      }
    }
    return {};
  }

  const auto& join = *t.join;
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      const Element j = join[a][b];
      if (!leq[a][j] || !leq[b][j]) return detail::violation("join is an upper bound", {a, b});
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      const Element j = join[a][b];
      for (Element c = 0; c < n; ++c) {
        if (leq[a][c] && leq[b][c] && !leq[j][c]) return detail::violation("join is least", {a, b, c});
      }
    }
  }
  return {};
}

class UslError : public std::invalid_argument {
 public:
  explicit UslError(const UslCheck& check)
      : std::invalid_argument("invalid upper semilattice: " + check.message), check_(check) {}
  [[nodiscard]] const UslCheck& check() const { return check_; }

 private:
  UslCheck check_;
};

/// A validated finite upper semilattice. Instances always satisfy the
/// semilattice axioms; construct them through `make` or `from_order`.
class FiniteUsl {
 public:
  /// The one-element semilattice {0}.
  FiniteUsl() : size_(1), leq_(1, 1), join_(1, 0) {}

  static FiniteUsl make(const UslTables& tables) {
    if (auto check = validate_usl(tables); !check) throw UslError(check);
    FiniteUsl u;
    u.size_ = tables.size;
    u.leq_.assign(u.size_ * u.size_, 0);
    u.join_.assign(u.size_ * u.size_, 0);
    for (Element a = 0; a < u.size_; ++a) {
      for (Element b = 0; b < u.size_; ++b) u.leq_[a * u.size_ + b] = tables.leq[a][b] ? 1 : 0;
    }
    if (tables.join) {
      for (Element a = 0; a < u.size_; ++a) {
        for (Element b = 0; b < u.size_; ++b) u.join_[a * u.size_ + b] = (*tables.join)[a][b];
      }
    } else {
      u.derive_join();
    }
    return u;
  }

  static FiniteUsl from_order(std::vector<std::vector<bool>> leq) {
    UslTables t;
    t.size = leq.size();
    t.leq = std::move(leq);
    return make(t);
  }

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] static constexpr Element zero() { return 0; }
  [[nodiscard]] bool leq(Element a, Element b) const { return leq_[a * size_ + b] != 0; }
  [[nodiscard]] Element join(Element a, Element b) const { return join_[a * size_ + b]; }

  [[nodiscard]] UslTables tables() const {
    UslTables t;
    t.size = size_;
    t.leq.assign(size_, std::vector<bool>(size_, false));
    std::vector<std::vector<std::size_t>> j(size_, std::vector<std::size_t>(size_, 0));
    for (Element a = 0; a < size_; ++a) {
      for (Element b = 0; b < size_; ++b) {
        t.leq[a][b] = leq(a, b);
        j[a][b] = join(a, b);
      }
    }
    t.join = std::move(j);
    return t;
  }

  /// Relabels elements: element e of *this becomes perm[e]. perm must fix 0.
  [[nodiscard]] FiniteUsl permuted(const std::vector<Element>& perm) const {
    if (perm.size() != size_ || perm[0] != 0) throw std::invalid_argument("permutation must fix zero");
    FiniteUsl u = *this;
    for (Element a = 0; a < size_; ++a) {
      for (Element b = 0; b < size_; ++b) {
        u.leq_[perm[a] * size_ + perm[b]] = leq_[a * size_ + b];
        u.join_[perm[a] * size_ + perm[b]] = perm[join_[a * size_ + b]];
      }
    }
    return u;
  }

  friend bool operator==(const FiniteUsl&, const FiniteUsl&) = default;

 private:
  void derive_join() {
    for (Element a = 0; a < size_; ++a) {
      for (Element b = 0; b < size_; ++b) {
        for (Element c = 0; c < size_; ++c) {
          if (!leq(a, c) || !leq(b, c)) continue;
          bool least = true;
          for (Element d = 0; d < size_ && least; ++d) {
            if (leq(a, d) && leq(b, d) && !leq(c, d)) least = false;
          }
          if (least) {
            join_[a * size_ + b] = c;
            break;
          }
        }
      }
    }
  }

  std::size_t size_;
  std::vector<std::uint8_t> leq_;
  std::vector<Element> join_;
};

/// Named generators and the elements they denote. Names keep their order.
struct GeneratorValuation {
  std::vector<std::string> names;
  std::vector<Element> targets;

  void add(std::string name, Element target) {
    names.push_back(std::move(name));
    targets.push_back(target);
  }

  [[nodiscard]] std::optional<Element> find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return targets[i];
    }
    return std::nullopt;
  }

  [[nodiscard]] std::map<std::string, Element> as_map() const {
    std::map<std::string, Element> m;
    for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = targets[i];
    return m;
  }

  friend bool operator==(const GeneratorValuation&, const GeneratorValuation&) = default;
};

/// Smallest sub-semilattice containing 0 and the targets, as a membership mask.
inline std::vector<bool> generated_by(const FiniteUsl& u, const std::vector<Element>& gens) {
  std::vector<bool> in(u.size(), false);
  std::vector<Element> members{0};
  in[0] = true;
  for (Element g : gens) {
    if (g >= u.size()) throw std::out_of_range("generator target out of range");
    const std::size_t before = members.size();
    for (std::size_t i = 0; i < before; ++i) {
      const Element j = u.join(members[i], g);
      if (!in[j]) {
        in[j] = true;
        members.push_back(j);
      }
    }
  }
  return in;
}

inline bool generates(const FiniteUsl& u, const GeneratorValuation& v) {
  if (v.names.size() != v.targets.size()) return false;
  for (Element t : v.targets) {
    if (t >= u.size()) return false;
  }
  const auto in = generated_by(u, v.targets);
  return std::all_of(in.begin(), in.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// Canonical form

struct CanonicalKey {
  std::vector<std::uint32_t> words;

  auto operator<=>(const CanonicalKey&) const = default;
  bool operator==(const CanonicalKey&) const = default;

  [[nodiscard]] std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (std::uint32_t w : words) {
      for (int shift = 28; shift >= 0; shift -= 4) s.push_back(digits[(w >> shift) & 0xF]);
    }
    return s;
  }
};

namespace detail {

// Colour refinement by the multisets of colours strictly below and strictly
// above each element. Colours are ranks of sorted signatures, so the result
// depends only on the isomorphism type of the coloured structure.
inline std::vector<std::uint32_t> refine(const FiniteUsl& u, std::vector<std::uint32_t> colour) {
  const std::size_t n = u.size();
  std::size_t classes = 0;
  while (true) {
    std::vector<std::vector<std::uint32_t>> sig(n);
    for (Element e = 0; e < n; ++e) {
      std::vector<std::uint32_t> below, above;
      for (Element f = 0; f < n; ++f) {
        if (f == e) continue;
        if (u.leq(f, e)) below.push_back(colour[f]);
        if (u.leq(e, f)) above.push_back(colour[f]);
      }
      std::sort(below.begin(), below.end());
      std::sort(above.begin(), above.end());
      auto& s = sig[e];
      s.push_back(colour[e]);
      s.push_back(static_cast<std::uint32_t>(below.size()));
      s.insert(s.end(), below.begin(), below.end());
      s.push_back(static_cast<std::uint32_t>(above.size()));
      s.insert(s.end(), above.begin(), above.end());
    }
    std::vector<std::vector<std::uint32_t>> distinct = sig;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (Element e = 0; e < n; ++e) {
      colour[e] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), sig[e]) - distinct.begin());
    }
    if (distinct.size() == classes) return colour;
    classes = distinct.size();
  }
}

struct Labels {
  std::vector<std::pair<std::string, std::uint32_t>> names;  // sorted by name
};

inline CanonicalKey encode(const FiniteUsl& u, const std::vector<Element>& order_of, const Labels& labels,
                           const std::vector<std::vector<std::size_t>>& named_at) {
  // order_of[e] = canonical position of element e
  const std::size_t n = u.size();
  std::vector<Element> at(n);
  for (Element e = 0; e < n; ++e) at[order_of[e]] = e;
  CanonicalKey key;
  key.words.push_back(static_cast<std::uint32_t>(n));
  key.words.push_back(static_cast<std::uint32_t>(labels.names.size()));
  for (std::size_t i = 0; i < labels.names.size(); ++i) {
    const auto& name = labels.names[i].first;
    key.words.push_back(static_cast<std::uint32_t>(name.size()));
    for (unsigned char c : name) key.words.push_back(c);
  }
  std::vector<std::uint32_t> pos(labels.names.size(), 0);
  for (Element e = 0; e < n; ++e) {
    for (std::size_t idx : named_at[e]) pos[idx] = static_cast<std::uint32_t>(order_of[e]);
  }
  key.words.insert(key.words.end(), pos.begin(), pos.end());
  std::uint32_t word = 0;
  int bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      word = (word << 1) | (u.leq(at[i], at[j]) ? 1u : 0u);
      if (++bits == 32) {
        key.words.push_back(word);
        word = 0;
        bits = 0;
      }
    }
  }
  if (bits) key.words.push_back(word << (32 - bits));
  return key;
}

inline void search_canonical(const FiniteUsl& u, const std::vector<std::uint32_t>& colour, const Labels& labels,
                             const std::vector<std::vector<std::size_t>>& named_at, std::optional<CanonicalKey>& best) {
  const std::size_t n = u.size();
  // Find the first non-singleton colour class.
  std::vector<std::size_t> count(n, 0);
  for (auto c : colour) ++count[c];
  std::uint32_t target = 0;
  bool discrete = true;
  for (std::uint32_t c = 0; c < n; ++c) {
    if (count[c] > 1) {
      target = c;
      discrete = false;
      break;
    }
  }
  if (discrete) {
    std::vector<Element> order_of(colour.begin(), colour.end());
    CanonicalKey key = encode(u, order_of, labels, named_at);
    if (!best || key < *best) best = std::move(key);
    return;
  }
  for (Element e = 0; e < n; ++e) {
    if (colour[e] != target) continue;
    // Individualize e: it keeps colour `target`, the rest of its class moves up.
    std::vector<std::uint32_t> c2(n);
    for (Element f = 0; f < n; ++f) c2[f] = 2 * colour[f] + ((colour[f] == target && f != e) ? 1u : 0u);
    search_canonical(u, refine(u, std::move(c2)), labels, named_at, best);
  }
}

}  // namespace detail

/// Canonical key: equal for two inputs exactly when an isomorphism maps one
/// onto the other (and one valuation onto the other, by name).
inline CanonicalKey canonicalize(const FiniteUsl& u, const GeneratorValuation* v = nullptr) {
  const std::size_t n = u.size();
  detail::Labels labels;
  std::vector<std::vector<std::size_t>> named_at(n);
  if (v) {
    if (v->names.size() != v->targets.size()) throw std::invalid_argument("valuation names and targets differ in length");
    for (std::size_t i = 0; i < v->names.size(); ++i) {
      if (v->targets[i] >= n) throw std::out_of_range("valuation target out of range");
      labels.names.emplace_back(v->names[i], 0);
    }
    std::sort(labels.names.begin(), labels.names.end());
    for (std::size_t i = 1; i < labels.names.size(); ++i) {
      if (labels.names[i].first == labels.names[i - 1].first) throw std::invalid_argument("duplicate valuation name");
    }
    for (std::size_t i = 0; i < v->names.size(); ++i) {
      const auto it = std::lower_bound(labels.names.begin(), labels.names.end(), std::make_pair(v->names[i], 0u));
      named_at[v->targets[i]].push_back(static_cast<std::size_t>(it - labels.names.begin()));
    }
    for (auto& list : named_at) std::sort(list.begin(), list.end());
  }
  // Initial colour: zero first, then by the sorted list of names at the element.
  std::vector<std::vector<std::size_t>> init(n);
  for (Element e = 0; e < n; ++e) {
    init[e].push_back(e == 0 ? 0 : 1);
    init[e].insert(init[e].end(), named_at[e].begin(), named_at[e].end());
  }
  auto distinct = init;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::uint32_t> colour(n);
  for (Element e = 0; e < n; ++e) {
    colour[e] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), init[e]) - distinct.begin());
  }
  std::optional<CanonicalKey> best;
  detail::search_canonical(u, detail::refine(u, std::move(colour)), labels, named_at, best);
  return *best;
}

inline CanonicalKey canonicalize(const FiniteUsl& u, const GeneratorValuation& v) { return canonicalize(u, &v); }

// ---------------------------------------------------------------------------
// Embeddings

struct UslEmbedding {
  FiniteUsl source;
  FiniteUsl dest;
  std::vector<Element> map;
};

enum class EmbeddingKind { not_embedding, embedding, end_extension_embedding };

inline const char* to_string(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::not_embedding: return "not_embedding";
    case EmbeddingKind::embedding: return "embedding";
    case EmbeddingKind::end_extension_embedding: return "end_extension_embedding";
  }
  return "?";
}

inline EmbeddingKind check_embedding(const FiniteUsl& source, const FiniteUsl& dest, const std::vector<Element>& map) {
  if (map.size() != source.size()) throw std::out_of_range("embedding map must cover every source element");
  for (Element e : map) {
    if (e >= dest.size()) throw std::out_of_range("embedding map target out of range");
  }
  if (map[0] != 0) return EmbeddingKind::not_embedding;
  std::vector<bool> image(dest.size(), false);
  for (Element a = 0; a < source.size(); ++a) {
    if (image[map[a]]) return EmbeddingKind::not_embedding;
    image[map[a]] = true;
  }
  for (Element a = 0; a < source.size(); ++a) {
    for (Element b = 0; b < source.size(); ++b) {
      if (source.leq(a, b) != dest.leq(map[a], map[b])) return EmbeddingKind::not_embedding;
      if (map[source.join(a, b)] != dest.join(map[a], map[b])) return EmbeddingKind::not_embedding;
    }
  }
  for (Element d = 0; d < dest.size(); ++d) {
    if (image[d]) continue;
    for (Element a = 0; a < source.size(); ++a) {
      if (dest.leq(d, map[a])) return EmbeddingKind::embedding;
    }
  }
  return EmbeddingKind::end_extension_embedding;
}

inline EmbeddingKind check_embedding(const UslEmbedding& e) { return check_embedding(e.source, e.dest, e.map); }

/// Common shapes used throughout tests and samples.
namespace shapes {

inline FiniteUsl chain(std::size_t n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) leq[a][b] = true;
  }
  return FiniteUsl::from_order(std::move(leq));
}

/// {0, a, b, top} with a, b incomparable.
inline FiniteUsl diamond() {
  return FiniteUsl::from_order({{true, true, true, true},
                                {false, true, false, true},
                                {false, false, true, true},
                                {false, false, false, true}});
}

}  // namespace shapes

}  // namespace ksdeg::usl
