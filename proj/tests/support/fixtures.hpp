#pragma once

// Loaders and checkers for the committed fixtures.

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ksdeg/decider.hpp"
#include "ksdeg/io.hpp"
#include "ksdeg/ksf/trees.hpp"

#ifndef KSDEG_FIXTURES
#error "KSDEG_FIXTURES must name the fixture directory"
#endif

namespace ksdeg::testing {

inline io::Json load_fixture(const std::string& name) {
  const std::string path = std::string(KSDEG_FIXTURES) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return io::parse_json(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Hand-enumerated Sigma-2 verdicts

namespace detail {

inline usl::CanonicalKey pinned_key(const usl::FiniteUsl& n, const usl::GeneratorValuation& v,
                                    const std::vector<usl::Element>& embedding) {
  auto pinned = v;
  for (usl::Element e = 0; e < embedding.size(); ++e) pinned.add("\x01" + std::to_string(e), embedding[e]);
  return usl::canonicalize(n, pinned);
}

// The listed N is an end-extension of M along `embedding`, agrees with M on
// the existential variables, and gives `expected` for the body.
inline std::string check_extension(const formula::Sigma2Sentence& s, const io::UslFile& m, const io::UslFile& n,
                                   const std::vector<usl::Element>& embedding, bool expected) {
  if (usl::check_embedding(m.usl, n.usl, embedding) != usl::EmbeddingKind::end_extension_embedding) {
    return "not an end-extension embedding";
  }
  if (!usl::generates(n.usl, n.valuation)) return "valuation does not generate N";
  for (const auto& x : s.exist_vars) {
    if (n.valuation.find(x) != embedding[*m.valuation.find(x)]) return "N moves " + x;
  }
  if (formula::eval_formula(s.body, n.usl, n.valuation.as_map()) != expected) return "body has the wrong value in N";
  return {};
}

}  // namespace detail

/// Checks every hand-enumerated sentence against the decider. Returns one
/// message per disagreement.
inline std::vector<std::string> check_hand_fixtures() {
  std::vector<std::string> problems;
  const auto doc = load_fixture("sigma2_hand.json");
  for (const auto& entry : doc.at("sentences")) {
    const std::string name = entry.at("name");
    auto problem = [&](const std::string& what) { problems.push_back(name + ": " + what); };
    const auto s = formula::parse_sentence(entry.at("sentence"));
    const auto v = decider::decide(s);
    const bool expected = entry.at("expected") == "true";
    if (v.truth != (expected ? decider::Truth::holds : decider::Truth::fails)) {
      problem(std::string("decider says ") + decider::to_string(v.truth));
      continue;
    }
    if (expected) {
      const auto m = io::usl_from_json(entry.at("witness"), "witness");
      if (usl::canonicalize(m.usl, m.valuation) != usl::canonicalize(v.witness->m, v.witness->valuation)) {
        problem("decider found a different witness");
      }
      const auto listed = entry.at("extensions");
      const auto all = usl::enumerate_end_extensions(m.usl, m.valuation, s.univ_vars, v.caps_used.max_size);
      if (listed.size() != all.extensions.size()) {
        problem("lists " + std::to_string(listed.size()) + " extensions, enumeration finds " +
                std::to_string(all.extensions.size()));
      }
      std::set<usl::CanonicalKey> enumerated;
      for (const auto& e : all.extensions) enumerated.insert(e.key);
      for (const auto& x : listed) {
        const auto n = io::usl_from_json(x.at("n"), "n");
        const auto emb = x.at("embedding").get<std::vector<usl::Element>>();
        if (auto why = detail::check_extension(s, m, n, emb, true); !why.empty()) problem(why);
        if (!enumerated.count(detail::pinned_key(n.usl, n.valuation, emb))) problem("an extension is not enumerated");
      }
    } else {
      const auto listed = entry.at("candidates");
      std::set<usl::CanonicalKey> mine, theirs;
      for (const auto& c : v.counterexamples) mine.insert(usl::canonicalize(c.m, c.m_valuation));
      for (const auto& x : listed) {
        const auto m = io::usl_from_json(x.at("m"), "m");
        const auto n = io::usl_from_json(x.at("n"), "n");
        const auto emb = x.at("embedding").get<std::vector<usl::Element>>();
        theirs.insert(usl::canonicalize(m.usl, m.valuation));
        if (auto why = detail::check_extension(s, m, n, emb, false); !why.empty()) problem(why);
      }
      if (mine != theirs) problem("candidate sets differ");
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Essential-tree fixtures

struct EssentialFixture {
  std::string name;
  ksf::TuringFunctional phi;
  ksf::EssentialTarget target;
  std::map<std::string, ksf::Real> env;
  ksf::Mode mode;
  ksf::ToyMachine machine;
  std::vector<ksf::StringVector> chain;   // witnesses
  ksf::BinaryString period;
  ksf::StringVector tau;                  // refutations
};

inline EssentialFixture essential_fixture(const io::Json& j) {
  EssentialFixture f;
  f.name = j.at("name");
  f.phi = io::functional_from_json(j.at("phi"));
  if (const auto it = j.find("split"); it != j.end()) {
    f.machine = ksf::ToyMachine();
    const std::string program = it->at("program");
    const auto n = std::stoull(program.substr(program.rfind(':') + 1));
    f.machine.add(ksf::programs::read_bit(n));
    f.target = ksf::SplitTarget{0, ksf::Real::parse(it->at("C").get<std::string>())};
  } else {
    ksf::ConjunctTarget t;
    for (const auto& fam : j.at("families")) t.families.push_back(ksf::parse_family(fam));
    f.target = t;
  }
  if (const auto it = j.find("reals"); it != j.end()) {
    for (const auto& [k, v] : it->items()) f.env.emplace(k, io::real_from_json(v, k));
  }
  if (const auto it = j.find("mode"); it != j.end()) {
    f.mode = ksf::Mode::restricted(ksf::Real::parse(it->at("A").get<std::string>()),
                                   ksf::Real::parse(it->at("B").get<std::string>()));
  }
  if (const auto it = j.find("chain"); it != j.end()) f.chain = it->get<std::vector<ksf::StringVector>>();
  if (const auto it = j.find("period"); it != j.end()) f.period = it->get<std::string>();
  if (const auto it = j.find("tau"); it != j.end()) f.tau = it->get<ksf::StringVector>();
  return f;
}

inline std::vector<EssentialFixture> essential_fixtures(const char* group) {
  std::vector<EssentialFixture> out;
  const auto doc = load_fixture("essential.json");
  for (const auto& j : doc.at(group)) out.push_back(essential_fixture(j));
  return out;
}

/// Witness direction: every vector of the chain survives, and the reals of
/// the chain force every instance of the conjuncts.
inline std::string check_witness(const EssentialFixture& f, const ksf::SearchBounds& b = {}) {
  for (const auto& tau : f.chain) {
    const auto v = ksf::essential_up_to(tau, f.phi, f.target, b, f.mode, f.machine, f.env);
    if (!v.essential_up_to_bounds()) return "a truncation of the chain is refuted";
  }
  const auto reals = ksf::path_reals(f.chain, f.period, f.mode);
  const ksf::Condition c{f.phi, {reals.begin(), reals.end()}};
  const ksf::ForcingContext ctx{&f.machine, f.env};
  for (const auto& inst : ksf::instances(std::get<ksf::ConjunctTarget>(f.target).families, f.env)) {
    if (!ksf::forces_qf(c, inst.sentence, f.mode, ctx)) return "the path does not force instance " + inst.value;
  }
  return {};
}

/// Refutation direction: the vector is refuted and the refutation
/// re-verifies on its own.
inline std::string check_refutation(const EssentialFixture& f, const ksf::SearchBounds& b = {}) {
  const auto v = ksf::essential_up_to(f.tau, f.phi, f.target, b, f.mode, f.machine, f.env);
  if (!v.refuted) return "not refuted within the bounds";
  return ksf::verify_refutation(f.tau, f.phi, f.target, b, f.mode, f.machine, *v.refuted, f.env);
}

}  // namespace ksdeg::testing
