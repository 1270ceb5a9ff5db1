#pragma once

// File formats and reports. Structured output is JSON with a fixed key
// order, so equal values render to identical bytes; every structured
// rendering has a parser that gives back an equal value.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ksdeg/decider.hpp"
#include "ksdeg/ksf/trees.hpp"
#include "ksdeg/usl.hpp"

namespace ksdeg::io {

using Json = nlohmann::ordered_json;

/// Input that parses as JSON but does not fit the expected shape.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing \"" + key + "\"");
  return *it;
}

inline std::uint64_t natural(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw SchemaError(where + ": expected a natural number");
  }
  return j.get<std::uint64_t>();
}

inline std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

inline bool flag(const Json& j, const std::string& where) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v == 0 || v == 1) return v == 1;
  }
  throw SchemaError(where + ": expected 0, 1, true or false");
}

inline std::string bits(const Json& j, const std::string& where) {
  auto s = text(j, where);
  if (!ksf::is_binary(s)) throw SchemaError(where + ": expected a string of 0s and 1s");
  return s;
}

}  // namespace detail

/// Parses JSON text, turning syntax errors into SchemaError.
inline Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Semilattices

struct UslFile {
  usl::FiniteUsl usl;
  usl::GeneratorValuation valuation;

  friend bool operator==(const UslFile&, const UslFile&) = default;
};

inline Json to_json(const usl::FiniteUsl& u, const usl::GeneratorValuation* v = nullptr) {
  Json leq = Json::array(), join = Json::array();
  for (usl::Element a = 0; a < u.size(); ++a) {
    Json lr = Json::array(), jr = Json::array();
    for (usl::Element b = 0; b < u.size(); ++b) {
      lr.push_back(u.leq(a, b) ? 1 : 0);
      jr.push_back(u.join(a, b));
    }
    leq.push_back(std::move(lr));
    join.push_back(std::move(jr));
  }
  Json out{{"size", u.size()}, {"leq", std::move(leq)}, {"join", std::move(join)}};
  Json val = Json::object();
  if (v) {
    for (std::size_t i = 0; i < v->names.size(); ++i) val[v->names[i]] = v->targets[i];
  }
  out["valuation"] = std::move(val);
  return out;
}

inline Json to_json(const UslFile& f) { return to_json(f.usl, &f.valuation); }

/// The raw tables of a USL file, unchecked beyond their JSON shape.
inline usl::UslTables tables_from_json(const Json& j, const std::string& where = "usl") {
  usl::UslTables t;
  t.size = detail::natural(detail::field(j, "size", where), where + ".size");
  const auto& leq = detail::field(j, "leq", where);
  if (!leq.is_array()) throw SchemaError(where + ".leq: expected an array of rows");
  for (const auto& row : leq) {
    if (!row.is_array()) throw SchemaError(where + ".leq: expected an array of rows");
    std::vector<bool> r;
    for (const auto& c : row) r.push_back(detail::flag(c, where + ".leq"));
    t.leq.push_back(std::move(r));
  }
  if (const auto it = j.find("join"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw SchemaError(where + ".join: expected an array of rows");
    std::vector<std::vector<std::size_t>> join;
    for (const auto& row : *it) {
      if (!row.is_array()) throw SchemaError(where + ".join: expected an array of rows");
      std::vector<std::size_t> r;
      for (const auto& c : row) r.push_back(detail::natural(c, where + ".join"));
      join.push_back(std::move(r));
    }
    t.join = std::move(join);
  }
  return t;
}

inline usl::GeneratorValuation valuation_from_json(const Json& j, std::size_t size, const std::string& where) {
  usl::GeneratorValuation v;
  if (j.is_null()) return v;
  if (!j.is_object()) throw SchemaError(where + ": expected an object of name: element");
  for (const auto& [name, target] : j.items()) {
    const auto e = detail::natural(target, where + "." + name);
    if (e >= size) throw SchemaError(where + "." + name + ": element out of range");
    v.add(name, e);
  }
  return v;
}

/// Reads a USL file; the semilattice axioms are checked (UslError).
inline UslFile usl_from_json(const Json& j, const std::string& where = "usl") {
  UslFile f{usl::FiniteUsl::make(tables_from_json(j, where)), {}};
  if (const auto it = j.find("valuation"); it != j.end()) f.valuation = valuation_from_json(*it, f.usl.size(), where + ".valuation");
  return f;
}

// ---------------------------------------------------------------------------
// Decider reports

struct VerdictReport {
  std::string sentence;
  std::string structure = "turing";
  decider::Verdict verdict;

  friend bool operator==(const VerdictReport&, const VerdictReport&) = default;
};

inline Json to_json(const VerdictReport& r) {
  const auto& v = r.verdict;
  Json out{{"sentence", r.sentence},
           {"structure", r.structure},
           {"truth", decider::to_string(v.truth)},
           {"caps", {{"max_vars", v.caps_used.max_vars}, {"max_size", v.caps_used.max_size}}},
           {"candidates", v.candidates},
           {"note", v.note}};
  out["witness"] = v.witness ? to_json(v.witness->m, &v.witness->valuation) : Json(nullptr);
  Json ces = Json::array();
  for (const auto& c : v.counterexamples) {
    ces.push_back({{"m", to_json(c.m, &c.m_valuation)}, {"n", to_json(c.n, &c.n_valuation)}, {"embedding", c.embedding}});
  }
  out["counterexamples"] = std::move(ces);
  return out;
}

inline VerdictReport verdict_report_from_json(const Json& j) {
  const std::string where = "report";
  VerdictReport r;
  r.sentence = detail::text(detail::field(j, "sentence", where), where + ".sentence");
  r.structure = detail::text(detail::field(j, "structure", where), where + ".structure");
  const auto truth = decider::truth_from_string(detail::text(detail::field(j, "truth", where), where + ".truth"));
  if (!truth) throw SchemaError(where + ".truth: expected true, false or undecided_at_cap");
  auto& v = r.verdict;
  v.truth = *truth;
  const auto& caps = detail::field(j, "caps", where);
  v.caps_used.max_vars = detail::natural(detail::field(caps, "max_vars", where + ".caps"), where + ".caps.max_vars");
  v.caps_used.max_size = detail::natural(detail::field(caps, "max_size", where + ".caps"), where + ".caps.max_size");
  v.candidates = detail::natural(detail::field(j, "candidates", where), where + ".candidates");
  v.note = detail::text(detail::field(j, "note", where), where + ".note");
  if (const auto& w = detail::field(j, "witness", where); !w.is_null()) {
    auto f = usl_from_json(w, where + ".witness");
    v.witness = decider::Witness{std::move(f.usl), std::move(f.valuation)};
  }
  const auto& ces = detail::field(j, "counterexamples", where);
  if (!ces.is_array()) throw SchemaError(where + ".counterexamples: expected an array");
  for (const auto& c : ces) {
    auto m = usl_from_json(detail::field(c, "m", where + ".counterexamples"), where + ".counterexamples.m");
    auto n = usl_from_json(detail::field(c, "n", where + ".counterexamples"), where + ".counterexamples.n");
    std::vector<usl::Element> emb;
    for (const auto& e : detail::field(c, "embedding", where + ".counterexamples")) {
      emb.push_back(detail::natural(e, where + ".counterexamples.embedding"));
    }
    v.counterexamples.push_back({std::move(m.usl), std::move(m.valuation), std::move(n.usl), std::move(n.valuation),
                                 std::move(emb)});
  }
  return r;
}

namespace detail {

inline std::string describe(const usl::FiniteUsl& u, const usl::GeneratorValuation& v) {
  std::ostringstream out;
  out << u.size() << " element" << (u.size() == 1 ? "" : "s");
  if (!v.names.empty()) {
    out << ", ";
    for (std::size_t i = 0; i < v.names.size(); ++i) out << (i ? " " : "") << v.names[i] << "=" << v.targets[i];
  }
  return out.str();
}

}  // namespace detail

inline std::string render_human(const VerdictReport& r) {
  const auto& v = r.verdict;
  std::ostringstream out;
  out << "sentence:  " << r.sentence << "\n";
  out << "structure: " << r.structure << "\n";
  out << "verdict:   " << decider::to_string(v.truth) << "\n";
  out << "caps:      max_vars=" << v.caps_used.max_vars << " max_size=" << v.caps_used.max_size << "\n";
  out << "candidates examined: " << v.candidates << "\n";
  if (!v.note.empty()) out << "note: " << v.note << "\n";
  if (v.witness) {
    out << "witness M (" << detail::describe(v.witness->m, v.witness->valuation) << "):\n";
    out << to_json(v.witness->m, &v.witness->valuation).dump() << "\n";
  }
  if (!v.counterexamples.empty()) {
    out << "counterexamples (one failing end-extension N per candidate M):\n";
    for (std::size_t i = 0; i < v.counterexamples.size(); ++i) {
      const auto& c = v.counterexamples[i];
      out << "  [" << i << "] M: " << detail::describe(c.m, c.m_valuation) << "\n";
      out << "      N: " << detail::describe(c.n, c.n_valuation) << "\n";
      out << "      M " << to_json(c.m, &c.m_valuation).dump() << "\n";
      out << "      N " << to_json(c.n, &c.n_valuation).dump() << "\n";
    }
  }
  return out.str();
}

/// The AST of a sentence, for debugging.
inline Json to_json(const formula::Term& t) {
  switch (t.kind) {
    case formula::Term::Kind::zero: return Json{{"zero", nullptr}};
    case formula::Term::Kind::var: return Json{{"var", t.name}};
    case formula::Term::Kind::join: return Json{{"join", {to_json(t.args[0]), to_json(t.args[1])}}};
  }
  return nullptr;
}

inline Json to_json(const formula::Formula& f) {
  using K = formula::Formula::Kind;
  switch (f.kind) {
    case K::leq: return Json{{"leq", {to_json(f.lhs), to_json(f.rhs)}}};
    case K::eq: return Json{{"eq", {to_json(f.lhs), to_json(f.rhs)}}};
    case K::negation: return Json{{"not", to_json(f.parts[0])}};
    case K::conjunction:
    case K::disjunction: {
      Json parts = Json::array();
      for (const auto& p : f.parts) parts.push_back(to_json(p));
      return Json{{f.kind == K::conjunction ? "and" : "or", std::move(parts)}};
    }
  }
  return nullptr;
}

inline Json to_json(const formula::Sigma2Sentence& s) {
  return Json{{"exists", s.exist_vars}, {"forall", s.univ_vars}, {"body", to_json(s.body)}};
}

// ---------------------------------------------------------------------------
// Forcing conditions

inline Json to_json(const ksf::Axiom& a) { return Json{{"x", a.x}, {"y", a.y}, {"sigma", a.sigma}}; }

inline Json to_json(const ksf::Real& r) { return Json{{"prefix", r.prefix()}, {"period", r.period()}}; }

inline Json to_json(const ksf::TuringFunctional& f) {
  Json out = Json::array();
  for (const auto& a : f.axioms()) out.push_back(to_json(a));
  return out;
}

inline Json to_json(const ksf::Condition& c) {
  Json reals = Json::array();
  for (const auto& r : c.reals) reals.push_back(to_json(r));
  return Json{{"phi", to_json(c.phi)}, {"reals", std::move(reals)}};
}

inline ksf::Axiom axiom_from_json(const Json& j, const std::string& where) {
  const auto y = detail::natural(detail::field(j, "y", where), where + ".y");
  if (y > 1) throw SchemaError(where + ".y: axiom output must be 0 or 1");
  return {detail::natural(detail::field(j, "x", where), where + ".x"), static_cast<int>(y),
          detail::bits(detail::field(j, "sigma", where), where + ".sigma")};
}

inline ksf::Real real_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return ksf::Real::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  const auto prefix = detail::bits(detail::field(j, "prefix", where), where + ".prefix");
  const auto period = detail::bits(detail::field(j, "period", where), where + ".period");
  if (period.empty()) throw SchemaError(where + ".period: must be nonempty");
  return {prefix, period};
}

/// Axioms are read as a set; duplicates collapse. Validity of the
/// functional is left to the caller.
inline ksf::TuringFunctional functional_from_json(const Json& j, const std::string& where = "phi") {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of axioms");
  ksf::TuringFunctional f;
  for (std::size_t i = 0; i < j.size(); ++i) f.insert(axiom_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return f;
}

/// A condition file; "reals" may be omitted. A bare array is read as a
/// functional with no reals.
inline ksf::Condition condition_from_json(const Json& j, const std::string& where = "condition") {
  if (j.is_array()) return {functional_from_json(j, where), {}};
  ksf::Condition c{functional_from_json(detail::field(j, "phi", where), where + ".phi"), {}};
  if (const auto it = j.find("reals"); it != j.end()) {
    if (!it->is_array()) throw SchemaError(where + ".reals: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      c.reals.insert(real_from_json((*it)[i], where + ".reals[" + std::to_string(i) + "]"));
    }
  }
  return c;
}

inline std::string render_human(const ksf::Condition& c) {
  std::ostringstream out;
  out << "phi = {";
  bool first = true;
  for (const auto& a : c.phi.axioms()) {
    out << (first ? "" : ", ") << ksf::to_string(a);
    first = false;
  }
  out << "}, reals = {";
  first = true;
  for (const auto& r : c.reals) {
    out << (first ? "" : ", ") << r.to_string();
    first = false;
  }
  out << "}";
  return out.str();
}

inline Json to_json(const ksf::SearchBounds& b) {
  return Json{{"max_new_axioms", b.max_new_axioms}, {"max_use_length", b.max_use_length},
              {"max_axiom_input", b.max_axiom_input}, {"max_new_reals", b.max_new_reals},
              {"max_steps", b.max_steps},           {"inputs", b.inputs},
              {"oracle_length", b.oracle_length}};
}

inline ksf::SearchBounds bounds_from_json(const Json& j, const std::string& where = "bounds") {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  ksf::SearchBounds b;
  for (const auto& [key, value] : j.items()) {
    const auto n = detail::natural(value, where + "." + key);
    if (key == "max_new_axioms") b.max_new_axioms = n;
    else if (key == "max_use_length") b.max_use_length = n;
    else if (key == "max_axiom_input") b.max_axiom_input = n;
    else if (key == "max_new_reals") b.max_new_reals = n;
    else if (key == "max_steps") b.max_steps = n;
    else if (key == "inputs") b.inputs = n;
    else if (key == "oracle_length") b.oracle_length = n;
    else throw SchemaError(where + ": unknown bound \"" + key + "\"");
  }
  return b;
}

// ---------------------------------------------------------------------------
// Splits, essentiality and frontiers

inline Json to_json(const ksf::Split& s) {
  return Json{{"p", to_json(s.p)}, {"q", to_json(s.q)}, {"x", s.x}, {"y1", s.y1}, {"y2", s.y2}};
}

inline ksf::Split split_from_json(const Json& j, const std::string& where = "split") {
  return {condition_from_json(detail::field(j, "p", where), where + ".p"),
          condition_from_json(detail::field(j, "q", where), where + ".q"),
          detail::natural(detail::field(j, "x", where), where + ".x"),
          detail::natural(detail::field(j, "y1", where), where + ".y1"),
          detail::natural(detail::field(j, "y2", where), where + ".y2")};
}

/// A split search result: a split, or none up to the bounds.
inline Json split_report(const std::optional<ksf::Split>& s, const ksf::SearchBounds& b) {
  return Json{{"result", s ? "split" : "no split up to bounds"}, {"bounds", to_json(b)},
              {"split", s ? to_json(*s) : Json(nullptr)}};
}

inline std::string render_split_human(const std::optional<ksf::Split>& s, const ksf::SearchBounds& b) {
  std::ostringstream out;
  if (!s) {
    out << "no split up to bounds " << to_json(b).dump() << "\n";
    return out.str();
  }
  out << "split at x=" << s->x << ": " << s->y1 << " vs " << s->y2 << "\n";
  out << "  p: " << render_human(s->p) << "\n";
  out << "  q: " << render_human(s->q) << "\n";
  return out.str();
}

inline Json to_json(const ksf::EssentialityVerdict& v) {
  Json out{{"verdict", v.refuted ? "refuted" : "essential up to bounds"}, {"bounds", to_json(v.bounds)}};
  if (v.refuted) {
    const auto& r = *v.refuted;
    if (r.split) {
      out["refutation"] = Json{{"split", to_json(*r.split)}};
    } else {
      out["refutation"] = Json{{"condition", to_json(r.condition)}, {"family", r.family}, {"value", r.value}};
    }
  } else {
    out["refutation"] = nullptr;
  }
  return out;
}

inline ksf::EssentialityVerdict essentiality_from_json(const Json& j, const std::string& where = "essentiality") {
  ksf::EssentialityVerdict v;
  v.bounds = bounds_from_json(detail::field(j, "bounds", where), where + ".bounds");
  const auto kind = detail::text(detail::field(j, "verdict", where), where + ".verdict");
  if (kind == "essential up to bounds") return v;
  if (kind != "refuted") throw SchemaError(where + ".verdict: expected \"refuted\" or \"essential up to bounds\"");
  const auto& r = detail::field(j, "refutation", where);
  ksf::Refutation out;
  if (const auto it = r.find("split"); r.is_object() && it != r.end()) {
    out.split = split_from_json(*it, where + ".refutation.split");
  } else {
    out.condition = condition_from_json(detail::field(r, "condition", where + ".refutation"), where + ".refutation.condition");
    out.family = detail::natural(detail::field(r, "family", where + ".refutation"), where + ".refutation.family");
    out.value = detail::text(detail::field(r, "value", where + ".refutation"), where + ".refutation.value");
  }
  v.refuted = std::move(out);
  return v;
}

inline std::string render_human(const ksf::EssentialityVerdict& v) {
  std::ostringstream out;
  if (!v.refuted) {
    out << "essential up to bounds " << to_json(v.bounds).dump() << "\n";
    return out.str();
  }
  const auto& r = *v.refuted;
  if (r.split) {
    out << "refuted by an avoiding split\n" << render_split_human(r.split, v.bounds);
  } else {
    out << "refuted by condition " << render_human(r.condition) << "\n";
    out << "  forces the negation of conjunct " << r.family;
    if (!r.value.empty()) out << " at " << r.value;
    out << "\n";
  }
  return out.str();
}

inline Json frontier_to_json(const std::vector<ksf::StringVector>& frontier, std::size_t k, std::size_t depth,
                             const ksf::SearchBounds& b) {
  return Json{{"k", k}, {"depth", depth}, {"bounds", to_json(b)}, {"survivors", frontier}};
}

inline std::vector<ksf::StringVector> frontier_from_json(const Json& j, const std::string& where = "frontier") {
  std::vector<ksf::StringVector> out;
  const auto& s = detail::field(j, "survivors", where);
  if (!s.is_array()) throw SchemaError(where + ".survivors: expected an array");
  for (const auto& v : s) {
    if (!v.is_array()) throw SchemaError(where + ".survivors: expected arrays of strings");
    ksf::StringVector vec;
    for (const auto& c : v) vec.push_back(detail::bits(c, where + ".survivors"));
    out.push_back(std::move(vec));
  }
  return out;
}

inline std::string render_frontier_human(const std::vector<ksf::StringVector>& frontier, std::size_t k,
                                         std::size_t depth, const ksf::SearchBounds& b) {
  std::ostringstream out;
  out << frontier.size() << " of " << (std::uint64_t{1} << (k * depth)) << " vectors at depth " << depth
      << " survive, essential up to bounds " << to_json(b).dump() << "\n";
  for (const auto& v : frontier) {
    out << "  (";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << '"' << v[i] << '"';
    out << ")\n";
  }
  return out.str();
}

}  // namespace ksdeg::io
