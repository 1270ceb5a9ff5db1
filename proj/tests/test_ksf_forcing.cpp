#include "ksdeg/ksf/forcing.hpp"

#include "gtest/gtest.h"
#include "support/properties.hpp"

using namespace ksdeg::ksf;

namespace {

const Code kOne = encode({0, 1, "1"});  // 13

ForcingContext plain() { return {}; }

}  // namespace

TEST(Language, ParsesToCnf) {
  const auto f = parse_forcing("gen(\"01\") & (!bit(3) | eq(1,1))");
  ASSERT_EQ(f.clauses.size(), 2u);
  EXPECT_EQ(f.clauses[1].size(), 2u);
  EXPECT_FALSE(f.clauses[1][0].positive);
  EXPECT_EQ(parse_forcing("in(0,1,\"1\")").clauses[0][0].atom, Atom::in_generic(kOne));
}

TEST(Language, NegationDistributes) {
  const auto f = parse_forcing("!(bit(1) & (bit(2) | !bit(3)))");
  EXPECT_EQ(f, parse_forcing("!bit(1) | (!bit(2) & bit(3))"));
}

TEST(Language, Errors) {
  EXPECT_THROW(parse_forcing("gen(\"012\")"), LanguageError);
  EXPECT_THROW(parse_forcing("in(0,2,\"1\")"), LanguageError);
  EXPECT_THROW(parse_forcing("foo(1)"), LanguageError);
  EXPECT_THROW(parse_forcing("bit(1) &"), LanguageError);
}

TEST(Language, Families) {
  const auto f = parse_family("forall u in prefixes(S, 2): !in(0,1,u)");
  EXPECT_EQ(f.domain, Family::Domain::prefixes);
  EXPECT_EQ(f.real, "S");
  EXPECT_EQ(parse_family(to_string(f)), f);
  const auto inst = instances({f}, {{"S", Real("", "1")}});
  ASSERT_EQ(inst.size(), 3u);
  EXPECT_EQ(inst[2].value, "\"11\"");
  EXPECT_EQ(inst[1].sentence, parse_forcing("!in(0,1,\"1\")"));
  EXPECT_EQ(instances({parse_family("forall n < 4: !bit(n)")}, {}).size(), 4u);
  EXPECT_EQ(instances({parse_family("forall s in strings(2): !gen(s)")}, {}).size(), 7u);
  EXPECT_THROW(parse_family("forall u in nowhere: bit(1)"), LanguageError);
  EXPECT_THROW(instances({f}, {}), std::invalid_argument);
}

TEST(ForcesQf, Examples) {
  const Condition empty;
  EXPECT_TRUE(forces_qf(empty, parse_forcing("eq(3,3)"), Mode::full(), plain()));
  EXPECT_FALSE(forces_qf(empty, parse_forcing("eq(3,4)"), Mode::full(), plain()));
  const std::string one_at_13 = std::string(13, '0') + "1";
  EXPECT_FALSE(forces_qf(empty, parse_forcing("gen(\"" + one_at_13 + "\")"), Mode::full(), plain()));
  const Condition blocked{{}, {Real("1", "0")}};
  EXPECT_TRUE(forces_qf(blocked, parse_forcing("!bit(13)"), Mode::full(), plain()));
  EXPECT_FALSE(forces_qf(empty, parse_forcing("!bit(13)"), Mode::full(), plain()));
}

TEST(ForcesQf, NonAxiomPositionsAreZero) {
  EXPECT_TRUE(forces_qf(Condition{}, parse_forcing("!bit(16)"), Mode::full(), plain()));
  EXPECT_FALSE(forces_qf(Condition{}, parse_forcing("bit(16)"), Mode::full(), plain()));
}

TEST(ForcesQf, DisjunctionOfGenericLiterals) {
  // Every extension either adds <0,1,"1"> or can block it.
  EXPECT_FALSE(forces_qf(Condition{}, parse_forcing("bit(13) | bit(4)"), Mode::full(), plain()));
  EXPECT_TRUE(forces_qf(Condition{}, parse_forcing("bit(13) | !bit(13)"), Mode::full(), plain()));
  EXPECT_TRUE(forces_qf(Condition{{{0, 1, "1"}}, {}}, parse_forcing("bit(13) | bit(4)"), Mode::full(), plain()));
}

TEST(ForcesQf, ParameterReals) {
  const ForcingContext ctx{nullptr, {{"S", Real("", "1")}}};
  EXPECT_TRUE(forces_qf(Condition{}, parse_forcing("pre(S, \"11\")"), Mode::full(), ctx));
  EXPECT_FALSE(forces_qf(Condition{}, parse_forcing("pre(S, \"10\")"), Mode::full(), ctx));
  EXPECT_THROW(forces_qf(Condition{}, parse_forcing("pre(R, \"1\")"), Mode::full(), ctx), std::invalid_argument);
}

TEST(ForcesQf, RestrictedBlockingThroughB) {
  const auto q = Mode::restricted(Real("", "1"), Real("", "0"));
  EXPECT_TRUE(forces_qf(Condition{}, parse_forcing("!bit(13)"), q, plain()));
  EXPECT_FALSE(forces_qf(Condition{}, parse_forcing("!bit(13)"), Mode::restricted(Real("", "1"), Real("", "1")), plain()));
}

TEST(DecideQfForcing, FalseFixedAtom) {
  EXPECT_FALSE(decide_qf_forcing({}, parse_forcing("eq(1,2)"), Mode::full(), plain()));
}

TEST(DecideQfForcing, NegatedMissingAxiomIsBlocked) {
  const auto psi = parse_forcing("!gen(\"" + std::string(13, '0') + "1\")");
  const auto w = decide_qf_forcing({}, psi, Mode::full(), plain());
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, (std::set<Real>{Real("1", "0")}));
  EXPECT_TRUE(forces_qf(Condition{{}, *w}, psi, Mode::full(), plain()));
  EXPECT_FALSE(forces_qf(Condition{}, psi, Mode::full(), plain()));
}

TEST(DecideQfForcing, AllZeroPrefixBlocksEveryAxiomPosition) {
  constexpr std::size_t L = 24;
  const auto psi = parse_forcing("gen(\"" + std::string(L, '0') + "\")");
  const auto w = decide_qf_forcing({}, psi, Mode::full(), plain());
  ASSERT_TRUE(w);
  for (Code n = 0; n < L; ++n) {
    const auto d = decode(n);
    if (!d.axiom) continue;
    EXPECT_TRUE(std::any_of(w->begin(), w->end(), [&](const Real& r) { return r.has_prefix(d.axiom->sigma); })) << n;
  }
  EXPECT_TRUE(forces_qf(Condition{{}, *w}, psi, Mode::full(), plain()));
}

TEST(DecideQfForcing, DisagreeingFunctionalCannotForcePrefix) {
  EXPECT_FALSE(decide_qf_forcing({{0, 1, "1"}}, parse_forcing("gen(\"" + std::string(14, '0') + "\")"), Mode::full(),
                                 plain()));
}

TEST(DecideQfForcing, AgreesWithOraclesInP) {
  const auto r = ksdeg::testing::qf_forcing_agrees(31, 60, false);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(DecideQfForcing, AgreesWithOraclesInQ) {
  const auto r = ksdeg::testing::qf_forcing_agrees(32, 60, true);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(GenericOracle, EmptyCondition) {
  const auto s = generic_oracle(Condition{}, 40);
  for (Code n = 0; n < 40; ++n) EXPECT_EQ(s[n], decode(n).is_axiom() ? '?' : '0') << n;
}

TEST(GenericOracle, SingleAxiom) {
  const auto s = generic_oracle(Condition{{{0, 1, "1"}}, {}}, 64);
  EXPECT_EQ(s.find('1'), kOne);
  EXPECT_EQ(s.rfind('1'), kOne);
}

TEST(GenericOracle, BlockingRealZeroesItsAxioms) {
  const auto s = generic_oracle(Condition{{}, {Real("", "1")}}, 200);
  for (Code n = 0; n < 200; ++n) {
    const auto d = decode(n);
    if (d.axiom && Real("", "1").has_prefix(d.axiom->sigma)) {
      EXPECT_EQ(s[n], '0') << n;
    }
  }
}

TEST(GenericOracle, JoinInterleaves) {
  const auto s = joined_oracle(Condition{{{0, 1, "1"}}, {}}, Real("", "10"), 30);
  EXPECT_EQ(s[0], '1');
  EXPECT_EQ(s[2], '0');
  EXPECT_EQ(s[27], '1');
  EXPECT_EQ(s[1], '0');  // position 0 codes nothing
}

TEST(LocalComputation, ReadsTheGenericBit) {
  ToyMachine tm;
  const auto e = tm.add(programs::read_bit(2 * kOne + 1));
  const Real c("", "0");
  EXPECT_EQ(local_computation(Condition{{{0, 1, "1"}}, {}}, tm, e, 0, 64, 64, c), 1u);
  EXPECT_EQ(local_computation(Condition{{}, {Real("", "1")}}, tm, e, 0, 64, 64, c), 0u);
  EXPECT_EQ(local_computation(Condition{}, tm, e, 0, 64, 64, c), std::nullopt);
  EXPECT_EQ(local_computation(Condition{{{0, 1, "1"}}, {}}, tm, e, 0, 64, 20, c), std::nullopt);
  EXPECT_EQ(local_computation(Condition{{{0, 1, "1"}}, {}}, tm, e, 0, 2, 64, c), std::nullopt);
}

TEST(ToyMachine, Programs) {
  const auto p = Program::parse(
      "# doubles the input\n"
      "set r1 0\n"
      "loop:\n"
      "jz r0 done\n"
      "addi r1 2\n"
      "set r2 1\n"
      "sub r0 r2\n"
      "jmp loop\n"
      "done:\n"
      "halt r1\n");
  ToyMachine tm({p});
  EXPECT_EQ(tm.eval(0, 5, 1000, ""), 10u);
  EXPECT_EQ(tm.eval(0, 5, 10, ""), std::nullopt);
  EXPECT_EQ(tm.eval(1, 5, 1000, ""), std::nullopt);
  EXPECT_THROW(Program::parse("jmp nowhere\n"), ProgramError);
  EXPECT_THROW(Program::parse("frob r1\n"), ProgramError);
}

TEST(Invariants, ExtendsIsAPartialOrder) {
  const auto r = ksdeg::testing::extends_is_partial_order(1, 400);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Invariants, ExtensionPreservesForcing) {
  const auto r = ksdeg::testing::extension_preserves_forcing(2, 400);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Invariants, NoConditionForcesBothSides) {
  const auto r = ksdeg::testing::forcing_is_consistent(3, 400);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Invariants, GenericOracleRefines) {
  const auto r = ksdeg::testing::generic_oracle_refines(4, 400);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Invariants, RestrictedForcingAvoidsA) {
  const auto r = ksdeg::testing::q_mode_avoids_a(5, 400);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}
