#include "ksdeg/ksf/trees.hpp"

#include "gtest/gtest.h"
#include "support/fixtures.hpp"

using namespace ksdeg::ksf;

namespace {

const Code kOne = encode({0, 1, "1"});

ConjunctTarget ones_target() { return {{parse_family("forall u in prefixes(S, 3): !in(0,1,u)")}}; }

const std::map<std::string, Real> kOnes{{"S", Real("", "1")}};

}  // namespace

TEST(BoundedExtensions, CountsAndOrder) {
  SearchBounds b;
  b.max_use_length = 1;
  b.max_axiom_input = 0;
  const auto all = bounded_extensions(Condition{}, Mode::full(), b, [](const Axiom&) { return true; });
  // The empty extension plus one axiom <0, y, s> for |s| <= 1.
  EXPECT_EQ(all.size(), 7u);
  EXPECT_TRUE(all.front().empty());
  for (const auto& f : all) EXPECT_TRUE(validate_functional(f).ok());
}

TEST(Split, BitReadingProgramSplits) {
  ToyMachine tm;
  tm.add(programs::read_bit(2 * kOne + 1));
  const SplitTarget t{0, Real("", "0")};
  const SearchBounds b;
  const auto s = find_split({}, t, b, Mode::full(), tm);
  ASSERT_TRUE(s);
  EXPECT_EQ(verify_split({}, t, b, Mode::full(), tm, *s), "");
  EXPECT_NE(s->y1, s->y2);
  EXPECT_EQ(s->x, 0u);
  const auto& adds = s->y1 == 1 ? s->p : s->q;
  const auto& blocks = s->y1 == 1 ? s->q : s->p;
  EXPECT_TRUE(adds.phi.contains({0, 1, "1"}));
  EXPECT_FALSE(blocks.phi.contains({0, 1, "1"}));
}

TEST(Split, ConstantProgramNeverSplits) {
  ToyMachine tm;
  tm.add(programs::constant(0));
  for (std::size_t axioms = 0; axioms <= 2; ++axioms) {
    for (std::size_t len = 0; len <= 3; ++len) {
      SearchBounds b;
      b.max_new_axioms = axioms;
      b.max_use_length = len;
      EXPECT_FALSE(find_split({}, {0, Real("", "0")}, b, Mode::full(), tm));
    }
  }
}

TEST(Split, ExhaustedBoundsFindNothing) {
  ToyMachine tm;
  tm.add(programs::read_bit(2 * kOne + 1));
  EXPECT_FALSE(find_split({{0, 1, "111"}}, {0, Real("", "0")}, SearchBounds{}, Mode::full(), tm));
}

TEST(Split, TamperedSplitFailsVerification) {
  ToyMachine tm;
  tm.add(programs::read_bit(2 * kOne + 1));
  const SplitTarget t{0, Real("", "0")};
  auto s = *find_split({}, t, SearchBounds{}, Mode::full(), tm);
  std::swap(s.y1, s.y2);
  EXPECT_NE(verify_split({}, t, SearchBounds{}, Mode::full(), tm, s), "");
}

TEST(Essential, PrefixOfTheWitnessSurvives) {
  const ToyMachine tm;
  for (std::size_t l = 0; l <= 3; ++l) {
    const auto v = essential_up_to({std::string(l, '1')}, {}, ones_target(), {}, Mode::full(), tm, kOnes);
    EXPECT_TRUE(v.essential_up_to_bounds()) << l;
  }
}

TEST(Essential, OffPathVectorIsRefuted) {
  const ToyMachine tm;
  const auto v = essential_up_to({"0"}, {}, ones_target(), {}, Mode::full(), tm, kOnes);
  ASSERT_TRUE(v.refuted);
  EXPECT_EQ(v.refuted->condition.phi, (TuringFunctional{{0, 1, "1"}}));
  EXPECT_EQ(verify_refutation({"0"}, {}, ones_target(), {}, Mode::full(), tm, *v.refuted, kOnes), "");
}

TEST(Essential, EmptyStringsSurviveAnyBound) {
  const ToyMachine tm;
  for (std::size_t len = 0; len <= 4; ++len) {
    SearchBounds b;
    b.max_use_length = len;
    EXPECT_TRUE(essential_up_to({"", ""}, {}, ones_target(), b, Mode::full(), tm, kOnes).essential_up_to_bounds());
  }
}

TEST(Essential, MalformedVector) {
  const ToyMachine tm;
  EXPECT_THROW(essential_up_to({"0", "11"}, {}, ones_target(), {}, Mode::full(), tm, kOnes), std::invalid_argument);
}

TEST(Essential, ForgedRefutationIsRejected) {
  const ToyMachine tm;
  Refutation r;
  r.condition = Condition{{{0, 1, "0"}}, {}};
  r.family = 0;
  r.value = "\"0\"";
  EXPECT_NE(verify_refutation({"0"}, {}, ones_target(), {}, Mode::full(), tm, r, kOnes), "");
}

TEST(Tree, FrontierOfT) {
  const ToyMachine tm;
  const auto f = tree_frontier({}, ones_target(), 1, 3, {}, Mode::full(), tm, kOnes);
  EXPECT_EQ(f, (std::vector<StringVector>{{"111"}}));
}

TEST(Tree, FrontiersAreDownwardConsistent) {
  const ToyMachine tm;
  const auto upper = tree_frontier({}, ones_target(), 1, 2, {}, Mode::full(), tm, kOnes);
  for (const auto& v : tree_frontier({}, ones_target(), 1, 3, {}, Mode::full(), tm, kOnes)) {
    EXPECT_NE(std::find(upper.begin(), upper.end(), StringVector{v[0].substr(0, 2)}), upper.end());
  }
}

TEST(Tree, FrontierOfUForAConstantProgram) {
  ToyMachine tm;
  tm.add(programs::constant(0));
  const auto f = tree_frontier({}, SplitTarget{0, Real("", "0")}, 1, 2, {}, Mode::full(), tm);
  EXPECT_EQ(f.size(), 4u);
}

TEST(Tree, PathReals) {
  const auto reals = path_reals({{"1"}, {"11"}, {"111"}}, "1");
  EXPECT_EQ(reals, (std::vector<Real>{Real("", "1")}));
  const Condition c{{}, {reals.begin(), reals.end()}};
  const ToyMachine tm;
  for (const auto& i : instances(ones_target().families, kOnes)) {
    EXPECT_TRUE(forces_qf(c, i.sentence, Mode::full(), {&tm, kOnes})) << i.value;
  }
}

TEST(Tree, PathRealsRejectsBadChains) {
  EXPECT_THROW(path_reals({}, "0"), std::invalid_argument);
  EXPECT_THROW(path_reals({{"1"}, {"01"}}, "0"), std::invalid_argument);
  EXPECT_THROW(path_reals({{"11"}, {"1"}}, "0"), std::invalid_argument);
  EXPECT_THROW(path_reals({{"1"}, {"11", "00"}}, "0"), std::invalid_argument);
  EXPECT_THROW(path_reals({{"1"}, {"11"}}, "1", Mode::restricted(Real("", "1"), Real("", "0"))), std::invalid_argument);
}

TEST(Fixtures, WitnessesSurviveAndForce) {
  const auto fixtures = ksdeg::testing::essential_fixtures("witnesses");
  ASSERT_EQ(fixtures.size(), 5u);
  for (const auto& f : fixtures) EXPECT_EQ(ksdeg::testing::check_witness(f), "") << f.name;
}

TEST(Fixtures, RefutationsReverify) {
  const auto fixtures = ksdeg::testing::essential_fixtures("refutations");
  ASSERT_EQ(fixtures.size(), 5u);
  for (const auto& f : fixtures) EXPECT_EQ(ksdeg::testing::check_refutation(f), "") << f.name;
}

TEST(Essential, CoveringPairSurvives) {
  // Every nonempty use is compatible with "0" or with "1".
  const ToyMachine tm;
  const ConjunctTarget t{{parse_family("forall u in prefixes(S, 3): !in(0,1,u)"),
                          parse_family("forall u in prefixes(R, 3): !in(0,0,u)")}};
  const std::map<std::string, Real> env{{"S", Real("", "1")}, {"R", Real("", "0")}};
  EXPECT_TRUE(essential_up_to({"0", "1"}, {}, t, {}, Mode::full(), tm, env).essential_up_to_bounds());
}
