#include <gtest/gtest.h>

#include <regex>

#include "random_program.h"
#include "sshom/mutgen.h"
#include "test_support.h"

namespace sshom {
namespace {

using testing::fixtureSource;
using testing::ids;

TEST(Generate, ArithmeticSiteYieldsFourAor) {
  Program p = parse("fn g(a: int, b: int) -> int { return a + b; }");
  MutantCatalog c = generateMutants(p);
  ASSERT_EQ(c.size(), 4u);
  std::vector<BinaryOp> seen;
  for (const Fom& f : c.mutants) {
    EXPECT_EQ(f.kind, OperatorKind::AOR);
    EXPECT_EQ(f.original, BinaryOp::Add);
    seen.push_back(f.replacement);
  }
  EXPECT_EQ(seen, (std::vector<BinaryOp>{BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                         BinaryOp::Mod}));
}

TEST(Generate, GuardsFunctionYieldsFifteenRor) {
  MutantCatalog c = generateMutants(parse(fixtureSource("guards.mut")));
  ASSERT_EQ(c.size(), 15u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c.mutants[i].kind, OperatorKind::ROR);
    EXPECT_EQ(index(c.mutants[i].id), i);
    EXPECT_EQ(c.mutants[i].location.ordinal, static_cast<int>(i / 5));
  }
  EXPECT_EQ(c.mutants[0].replacement, BinaryOp::Ne);
  EXPECT_EQ(c.mutants[9].original, BinaryOp::Lt);
  EXPECT_EQ(c.mutants[9].replacement, BinaryOp::Ge);
}

TEST(Generate, NoMutableExpressionsGivesEmptyCatalog) {
  Program p = parse("fn g(a: int) -> int { return -a; }\ntest T { assert g(1) == -1; }");
  EXPECT_EQ(generateMutants(p).size(), 0u);
}

TEST(Generate, LogicalAndBooleanEqualityAreSwapsOnly) {
  Program p = parse("fn g(a: bool, b: bool) -> bool { return (a && b) == a; }");
  MutantCatalog c = generateMutants(p);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.mutants[0].kind, OperatorKind::LCR);
  EXPECT_EQ(c.mutants[0].replacement, BinaryOp::Or);
  EXPECT_EQ(c.mutants[1].kind, OperatorKind::ROR);
  EXPECT_EQ(c.mutants[1].replacement, BinaryOp::Ne);
}

TEST(Generate, IsAPureFunctionOfTheSource) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::string src = testing::randomProgram(seed);
    MutantCatalog a = generateMutants(parse(src));
    MutantCatalog b = generateMutants(parse(src));
    EXPECT_EQ(a.digest(), b.digest());
  }
}

TEST(Filter, RenumbersDensely) {
  MutantCatalog full = generateMutants(parse(fixtureSource("guards.mut")));
  MutantCatalog c = filterCatalog(full, ids({9, 0}));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(index(c.mutants[1].id), 1u);
  EXPECT_EQ(c.mutants[1].original, BinaryOp::Lt);
  EXPECT_EQ(c.programDigest, full.programDigest);
  EXPECT_THROW(filterCatalog(full, ids({15})), UnknownMutant);
}

TEST(Weave, GuardsEqualityBecomesFiveDeepNest) {
  Program p = parse(fixtureSource("guards.mut"));
  MetaProgram m = weave(p, generateMutants(p));
  ASSERT_EQ(m.choices.size(), 3u);
  EXPECT_EQ(m.choices[0], ids({0, 1, 2, 3, 4}));
  std::string text = renderMeta(m);
  EXPECT_NE(text.find("(m1 ? a != 1 : (m2 ? a < 1 : (m3 ? a > 1 : (m4 ? a <= 1 : (m5 ? a >= 1 : "
                      "a == 1)))))"),
            std::string::npos)
      << text;
}

TEST(Weave, EmptyCatalogIsIdentity) {
  Program p = parse(fixtureSource("guards.mut"));
  MutantCatalog empty;
  empty.programDigest = p.sourceDigest;
  MetaProgram m = weave(p, empty);
  for (const TestCase& t : p.tests) EXPECT_EQ(run(instantiate(m, {}), t), run(p, t));
  EXPECT_EQ(render(instantiate(m, {})), render(p));
}

TEST(Weave, ForeignCatalogIsDigestMismatch) {
  Program p = parse(fixtureSource("guards.mut"));
  Program q = parse("fn g(a: int) -> int { return a + 1; }");
  EXPECT_THROW(weave(p, generateMutants(q)), DigestMismatch);
}

TEST(Weave, ExclusiveGroupsAreSameLocationMutants) {
  Program p = parse(fixtureSource("guards.mut"));
  MetaProgram m = weave(p, generateMutants(p));
  auto groups = m.exclusiveGroups();
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[1], ids({5, 6, 7, 8, 9}));
  EXPECT_TRUE(m.conflictFree(ids({0, 9, 14})));
  EXPECT_FALSE(m.conflictFree(ids({5, 9})));
}

TEST(Instantiate, EmptySelectionIsOriginal) {
  auto s = testing::guardPair();
  EXPECT_EQ(render(instantiate(s->meta, {})), render(s->program));
}

TEST(Instantiate, FirstMutantNegatesEquality) {
  auto s = testing::guardPair();
  std::string src = fixtureSource("guards.mut");
  src.replace(src.find("a == 1"), 6, "a != 1");
  EXPECT_EQ(render(instantiate(s->meta, ids({0}))), render(parse(src)));
}

TEST(Instantiate, SameLocationPairConflicts) {
  Program p = parse(fixtureSource("guards.mut"));
  MetaProgram m = weave(p, generateMutants(p));
  EXPECT_THROW(instantiate(m, ids({0, 1})), ConflictingSelection);
  EXPECT_THROW(m.overridesFor(ids({6, 9})), ConflictingSelection);
}

TEST(Instantiate, RoundTripPreservesEveryOutcome) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Program p = parse(testing::randomProgram(seed));
    MetaProgram m = weave(p, generateMutants(p));
    Program same = instantiate(m, {});
    for (const TestCase& t : p.tests)
      EXPECT_EQ(run(same, t, testing::kRandomStepBound), run(p, t, testing::kRandomStepBound));
  }
}

// Rendering a single-mutant program changes exactly one operator token
// (parentheses aside, since precedence may change).
TEST(Instantiate, SingleMutantDiffersByOneToken) {
  std::regex lexeme(R"(==|!=|<=|>=|&&|\|\||[-+*/%<>=!(){};,:]|\w+)");
  auto tokens = [&](const std::string& s) {
    std::vector<std::string> out;
    for (auto it = std::sregex_iterator(s.begin(), s.end(), lexeme); it != std::sregex_iterator();
         ++it)
      if (it->str() != "(" && it->str() != ")") out.push_back(it->str());
    return out;
  };
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Program p = parse(testing::randomProgram(seed));
    MetaProgram m = weave(p, generateMutants(p));
    std::vector<std::string> base = tokens(render(p));
    for (const Fom& f : m.catalog.mutants) {
      std::vector<std::string> mut = tokens(render(instantiate(m, {f.id})));
      ASSERT_EQ(mut.size(), base.size());
      int diffs = 0;
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i] != mut[i]) {
          ++diffs;
          EXPECT_EQ(base[i], token(f.original));
          EXPECT_EQ(mut[i], token(f.replacement));
        }
      }
      EXPECT_EQ(diffs, 1) << mutantName(f.id);
    }
  }
}

TEST(Overrides, MatchInstantiation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Program p = parse(testing::randomProgram(seed));
    MetaProgram m = weave(p, generateMutants(p));
    for (const Fom& f : m.catalog.mutants) {
      SiteOverrides ov = m.overridesFor({f.id});
      RunOptions o;
      o.stepBound = testing::kRandomStepBound;
      o.overrides = &ov;
      Program inst = instantiate(m, {f.id});
      for (const TestCase& t : p.tests)
        EXPECT_EQ(run(p, t, o), run(inst, inst.test(t.id), testing::kRandomStepBound));
    }
  }
}

}  // namespace
}  // namespace sshom
