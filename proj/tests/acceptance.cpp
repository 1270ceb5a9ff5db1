// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "ksdeg/decider.hpp"
#include "ksdeg/ksf/trees.hpp"
#include "support/fixtures.hpp"
#include "support/properties.hpp"

using namespace ksdeg;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const auto bodies = testing::small_bodies(300, 1);
  std::size_t sentences = 0, mismatches = 0;
  std::string first;
  for (const auto& body : bodies) {
    // Bodies without y are also asked as one-variable sentences.
    const bool one_var = body.find('y') == std::string::npos;
    for (const bool existential : {true, false}) {
      const std::string prefix = one_var ? (existential ? "E x. " : "A x. ") : (existential ? "E x y. " : "A x y. ");
      const auto s = formula::parse_sentence(prefix + body);
      const std::vector<std::string> vars = one_var ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
      const bool expected = testing::brute_force_truth(s.body, vars, existential);
      const auto got = decider::decide(s).truth;
      ++sentences;
      if (got != (expected ? decider::Truth::holds : decider::Truth::fails)) {
        if (mismatches++ == 0) first = formula::to_string(s);
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && sentences >= 300 && secs <= 300;
  o.detail = std::to_string(sentences) + " sentences, " + std::to_string(mismatches) + " mismatches, " + fmt_seconds(secs);
  if (!first.empty()) o.detail += ", first: " + first;
  return o;
}

Outcome curated_suite() {
  const auto t0 = Clock::now();
  struct Case {
    const char* text;
    decider::Truth truth;
  };
  const Case cases[] = {
      {"E x y. !(x<=y) & !(y<=x)", decider::Truth::holds},
      {"E x. A y. y<=x", decider::Truth::fails},
      {"E x. !(x<=0) & A y. (!(y<=x) | y=x | y<=0)", decider::Truth::holds},
      {"E x. !(x<=0) & A y. (x<=y | y<=x)", decider::Truth::fails},
  };
  std::vector<std::string> problems;
  for (const auto& c : cases) {
    const auto s = formula::parse_sentence(c.text);
    const auto v = decider::decide(s);
    if (v.truth != c.truth) problems.push_back(std::string(c.text) + " gave " + decider::to_string(v.truth));
    if (auto why = decider::verify_verdict(s, v); !why.empty()) problems.push_back(std::string(c.text) + ": " + why);
  }
  for (auto& p : testing::check_hand_fixtures()) problems.push_back(std::move(p));
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = problems.empty() && secs <= 10;
  o.detail = "4 sentences with hand fixtures, " + fmt_seconds(secs);
  if (!problems.empty()) o.detail += ", first problem: " + problems.front();
  return o;
}

Outcome enumeration_counts() {
  const auto one = usl::enumerate_generated(1, 33);
  const auto two = usl::enumerate_generated(2, 33);
  std::set<usl::CanonicalKey> k1, k2;
  for (const auto& d : one.diagrams) k1.insert(d.key);
  for (const auto& d : two.diagrams) k2.insert(d.key);
  const auto brute4 = usl::brute_force_usls(4).size();
  Outcome o;
  o.pass = one.diagrams.size() == 2 && two.diagrams.size() == 7 && k1 == testing::brute_force_diagrams(1) &&
           k2 == testing::brute_force_diagrams(2) && brute4 == 5;
  o.detail = "k=1: " + std::to_string(one.diagrams.size()) + ", k=2: " + std::to_string(two.diagrams.size()) +
             ", brute_force_usls(4): " + std::to_string(brute4);
  return o;
}

Outcome qf_forcing_lemma() {
  const auto t0 = Clock::now();
  std::size_t nones_p = 0, nones_q = 0;
  const auto p = testing::qf_forcing_agrees(400, 200, false, &nones_p);
  const auto q = testing::qf_forcing_agrees(401, 200, true, &nones_q);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = p.ok() && q.ok() && secs <= 600;
  o.detail = "P: " + std::to_string(p.cases) + " cases (" + std::to_string(nones_p) + " none), Q: " +
             std::to_string(q.cases) + " cases (" + std::to_string(nones_q) + " none), " + fmt_seconds(secs);
  if (!p.ok()) o.detail += ", P failure: " + p.first_failure;
  if (!q.ok()) o.detail += ", Q failure: " + q.first_failure;
  return o;
}

Outcome kernel_invariants() {
  constexpr std::size_t n = 10000;
  const std::pair<const char*, testing::PropertyResult> results[] = {
      {"partial order", testing::extends_is_partial_order(500, n)},
      {"extension preserves forcing", testing::extension_preserves_forcing(501, n)},
      {"consistency", testing::forcing_is_consistent(502, n)},
      {"oracle refinement", testing::generic_oracle_refines(503, n)},
      {"Q avoids A", testing::q_mode_avoids_a(504, n)},
  };
  Outcome o{true, {}};
  for (const auto& [name, r] : results) {
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += std::string(name) + " " + std::to_string(r.cases - std::min(r.cases, r.failures)) + "/" +
                std::to_string(r.cases);
    if (!r.ok() || r.cases < n) {
      o.pass = false;
      o.detail += " (" + r.first_failure + ")";
    }
  }
  return o;
}

Outcome essential_trees() {
  std::vector<std::string> problems;
  const auto witnesses = testing::essential_fixtures("witnesses");
  const auto refutations = testing::essential_fixtures("refutations");
  for (const auto& f : witnesses) {
    if (auto why = testing::check_witness(f); !why.empty()) problems.push_back(f.name + ": " + why);
  }
  for (const auto& f : refutations) {
    if (auto why = testing::check_refutation(f); !why.empty()) problems.push_back(f.name + ": " + why);
  }
  Outcome o;
  o.pass = problems.empty() && witnesses.size() == 5 && refutations.size() == 5;
  o.detail = std::to_string(witnesses.size()) + " witness and " + std::to_string(refutations.size()) +
             " refutation fixtures";
  if (!problems.empty()) o.detail += ", first problem: " + problems.front();
  return o;
}

Outcome split_detection() {
  const ksf::SplitTarget t{0, ksf::Real("", "0")};
  ksf::ToyMachine reader;
  reader.add(ksf::programs::read_bit(2 * ksf::encode({0, 1, "1"}) + 1));
  const ksf::SearchBounds b;
  const auto s = ksf::find_split({}, t, b, ksf::Mode::full(), reader);
  const bool found = s && ksf::verify_split({}, t, b, ksf::Mode::full(), reader, *s).empty();

  ksf::ToyMachine constant;
  constant.add(ksf::programs::constant(0));
  std::size_t bound_sets = 0;
  bool never = true;
  for (std::size_t axioms = 0; axioms <= 2; ++axioms) {
    for (std::size_t len = 0; len <= 3; ++len) {
      for (std::uint64_t inputs = 1; inputs <= 3; ++inputs) {
        ksf::SearchBounds cb;
        cb.max_new_axioms = axioms;
        cb.max_use_length = len;
        cb.inputs = inputs;
        ++bound_sets;
        never = never && !ksf::find_split({}, t, cb, ksf::Mode::full(), constant);
      }
    }
  }
  const bool exhausted = !ksf::find_split({{0, 1, "111"}}, t, b, ksf::Mode::full(), reader);
  Outcome o;
  o.pass = found && never && exhausted;
  o.detail = std::string("bit-reading program ") + (found ? "split and re-verified" : "no verified split") +
             ", constant program " + (never ? "no split" : "SPLIT") + " over " + std::to_string(bound_sets) +
             " bound sets, exhausted bounds " + (exhausted ? "no split" : "SPLIT");
  return o;
}

Outcome codec_round_trips() {
  std::size_t decodable = 0, bad = 0;
  for (ksf::Code n = 1; n <= 100000; ++n) {
    const auto d = ksf::decode(n);
    if (!d.is_axiom()) continue;
    ++decodable;
    if (ksf::encode(*d.axiom) != n) ++bad;
  }
  std::mt19937_64 rng(800);
  for (int i = 0; i < 10000; ++i) {
    const ksf::Axiom a{rng() % 20000, static_cast<int>(rng() % 2), testing::random_bits(rng, rng() % 24)};
    if (ksf::decode(ksf::encode(a)).axiom != a) ++bad;
  }
  const bool examples = ksf::encode({0, 1, "1"}) == 13 && !ksf::decode(631).is_axiom() &&
                        ksf::codec::strcode("00") == 3;
  Outcome o;
  o.pass = bad == 0 && examples;
  o.detail = std::to_string(decodable) + " decodable naturals up to 100000 and 10000 random axioms, " +
             std::to_string(bad) + " mismatches";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"sigma1/pi1 oracle equivalence", oracle_equivalence},
      {"curated sigma2 suite", curated_suite},
      {"enumeration counts", enumeration_counts},
      {"quantifier-free forcing lemma", qf_forcing_lemma},
      {"forcing kernel invariants", kernel_invariants},
      {"essential tree correspondence", essential_trees},
      {"split detection", split_detection},
      {"axiom codec", codec_round_trips},
  };
  int failed = 0;
  int i = 0;
  for (const auto& [name, run] : criteria) {
    ++i;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i << "] " << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
