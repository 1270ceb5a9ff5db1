#include "ksdeg/formula.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "ksdeg/usl_enumerate.hpp"
#include "support/oracles.hpp"

using namespace ksdeg;
using namespace ksdeg::formula;

TEST(Parse, MinimalDegreeSentence) {
  auto s = parse_sentence("E x. A y. !(y<=x) | y=x | y<=0");
  EXPECT_EQ(s.exist_vars, std::vector<std::string>{"x"});
  EXPECT_EQ(s.univ_vars, std::vector<std::string>{"y"});
  ASSERT_EQ(s.body.kind, Formula::Kind::disjunction);
  EXPECT_EQ(s.body.parts.size(), 3u);
}

TEST(Parse, UniversalOnly) {
  auto s = parse_sentence("A y. 0<=y");
  EXPECT_TRUE(s.exist_vars.empty());
  EXPECT_EQ(s.univ_vars, std::vector<std::string>{"y"});
  EXPECT_EQ(s.body, Formula::leq(Term::zero(), Term::var("y")));
}

TEST(Parse, UndeclaredVariable) {
  try {
    parse_sentence("E x. x<=z");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("undeclared variable 'z'"), std::string::npos);
  }
}

TEST(Parse, DuplicatedVariable) {
  EXPECT_THROW(parse_sentence("E x. A x. x<=x"), ParseError);
  EXPECT_THROW(parse_sentence("E x x. x<=x"), ParseError);
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  try {
    parse_sentence("E x. x<= & x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 9u);
  }
}

TEST(Parse, Precedence) {
  // ! binds tighter than &, which binds tighter than |.
  auto f = parse_body("!x<=y & y<=x | x=y");
  ASSERT_EQ(f.kind, Formula::Kind::disjunction);
  ASSERT_EQ(f.parts[0].kind, Formula::Kind::conjunction);
  EXPECT_EQ(f.parts[0].parts[0].kind, Formula::Kind::negation);
}

TEST(Parse, JoinIsAssociativeInSyntax) {
  auto a = parse_body("x+y+z<=0");
  auto b = parse_body("(x+y)+z<=0");
  EXPECT_EQ(a, b);
}

TEST(Parse, TrailingUniversalBlock) {
  auto s = parse_sentence("E x. !(x<=0) & A y. (!(y<=x) | y=x | y<=0)");
  EXPECT_EQ(s.univ_vars, std::vector<std::string>{"y"});
  ASSERT_EQ(s.body.kind, Formula::Kind::conjunction);
  EXPECT_THROW(parse_sentence("E x. y<=x & A y. y<=x"), ParseError);
  EXPECT_THROW(parse_sentence("E x. A z. x<=z & A y. y<=x"), ParseError);
}

TEST(Print, RoundTripsOnCorpus) {
  for (const auto& body : ksdeg::testing::small_bodies(200, 3)) {
    auto f = parse_body(body);
    EXPECT_EQ(parse_body(to_string(f)), f) << body;
  }
  for (const char* text : {"E x y. !(x<=y) & !(y<=x)", "A u v. u+(v+0) = (u+v)", "E a. !!(a<=0) | (a=0 & 0<=a)"}) {
    auto s = parse_sentence(text);
    EXPECT_EQ(parse_sentence(to_string(s)), s) << text;
  }
}

TEST(Normalize, EqualityUnderNegation) {
  EXPECT_EQ(to_string(normalize_body(parse_body("!(x=y)"))), "!(x <= y) | !(y <= x)");
}

TEST(Normalize, DoubleNegation) { EXPECT_EQ(normalize_body(parse_body("!!(x<=y)")), parse_body("x<=y")); }

TEST(Normalize, DeMorgan) {
  EXPECT_EQ(to_string(normalize_body(parse_body("!(a<=b & c<=d)"))), "!(a <= b) | !(c <= d)");
}

TEST(Normalize, OutputIsNormal) {
  for (const auto& body : ksdeg::testing::small_bodies(200, 5)) EXPECT_TRUE(is_normalized(normalize_body(parse_body(body))));
}

TEST(Normalize, PreservesTruthOnSmallModels) {
  const auto usls = usl::brute_force_usls(4);
  for (const auto& body : ksdeg::testing::small_bodies(150, 9)) {
    const auto f = parse_body(body);
    const auto g = normalize_body(f);
    for (const auto& u : usls) {
      for (usl::Element x = 0; x < u.size(); ++x) {
        for (usl::Element y = 0; y < u.size(); ++y) {
          const Assignment a{{"x", x}, {"y", y}};
          ASSERT_EQ(eval_formula(f, u, a), eval_formula(g, u, a)) << body;
        }
      }
    }
  }
}

TEST(Eval, DiamondIncomparable) {
  const Assignment a{{"x", 1}, {"y", 2}};
  EXPECT_FALSE(eval_formula(parse_body("x<=y"), usl::shapes::diamond(), a));
}

TEST(Eval, JoinCommutes) {
  for (const auto& u : usl::brute_force_usls(5)) {
    for (usl::Element x = 0; x < u.size(); ++x) {
      for (usl::Element y = 0; y < u.size(); ++y) {
        EXPECT_TRUE(eval_formula(parse_body("x+y = y+x"), u, {{"x", x}, {"y", y}}));
      }
    }
  }
}

TEST(Eval, ThreeChain) {
  EXPECT_TRUE(eval_formula(parse_body("x<=y & !(y<=x)"), usl::shapes::chain(3), {{"x", 1}, {"y", 2}}));
}

TEST(Eval, UnassignedVariable) {
  EXPECT_THROW(eval_formula(parse_body("x<=y"), usl::shapes::chain(2), {{"x", 1}}), EvalError);
}

TEST(Eval, InvariantUnderIsomorphism) {
  std::mt19937_64 rng(4);
  const auto bodies = ksdeg::testing::small_bodies(60, 13);
  for (const auto& u : usl::brute_force_usls(5)) {
    std::vector<usl::Element> perm(u.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    const auto w = u.permuted(perm);
    for (const auto& body : bodies) {
      const auto f = parse_body(body);
      for (usl::Element x = 0; x < u.size(); ++x) {
        for (usl::Element y = 0; y < u.size(); ++y) {
          ASSERT_EQ(eval_formula(f, u, {{"x", x}, {"y", y}}), eval_formula(f, w, {{"x", perm[x]}, {"y", perm[y]}}));
        }
      }
    }
  }
}

TEST(Rename, RenamesEveryOccurrence) {
  auto s = parse_sentence("E x. A y. y<=x+y");
  auto r = rename(s, {{"x", "a"}, {"y", "b"}});
  EXPECT_EQ(to_string(r), "E a. A b. b <= a + b");
}
