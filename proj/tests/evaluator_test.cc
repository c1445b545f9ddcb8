#include <gtest/gtest.h>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "sshom/evaluator.h"
#include "sshom/varex.h"
#include "test_support.h"

namespace sshom {
namespace {

using testing::ids;

TEST(Foms, GuardsKillSets) {
  auto s = testing::guardPair();
  FomResults r = evaluateFoms(s->meta, s->program.tests);
  EXPECT_EQ(r.killSets.at(mutantAt(0)), (TestSet{"T1", "T2"}));
  EXPECT_EQ(r.killSets.at(mutantAt(1)), (TestSet{"T1", "T3"}));
  EXPECT_EQ(r.reachMap.at(mutantAt(1)), (TestSet{"T1", "T3"}));
  EXPECT_TRUE(r.killed(mutantAt(0)));
}

TEST(Candidate, GuardsPairKilledOnlyByT1) {
  auto s = testing::guardPair();
  FomResults r = evaluateFoms(s->meta, s->program.tests);
  EXPECT_EQ(evaluateCandidate(s->meta, ids({0, 1}), s->program.tests, r), (TestSet{"T1"}));
}

TEST(Candidate, RejectsConflictsAndSingletons) {
  auto s = testing::subjectFromSource(testing::fixtureSource("guards.mut"));
  Evaluator ev(s->meta, s->program.tests);
  EXPECT_THROW(ev.evaluate(ids({0, 1})), ConflictingSelection);
  FomResults r = ev.evaluateFoms();
  EXPECT_THROW(evaluateCandidate(s->meta, ids({0}), s->program.tests, r), Error);
}

TEST(Classify, Examples) {
  TestSet ab = {"A", "B"}, a = {"A"};
  EXPECT_EQ(classify({"T1"}, {{"T1", "T2"}, {"T1", "T3"}}).kind, VerdictKind::SSHOM);
  EXPECT_EQ(classify(a, {ab, ab}).kind, VerdictKind::StrictSSHOM);
  EXPECT_EQ(classify(ab, {ab, ab}).kind, VerdictKind::SSHOM);
  EXPECT_EQ(classify({"C"}, {ab, ab}).kind, VerdictKind::NonSSHOM);
  EXPECT_EQ(classify({}, {ab, ab}).kind, VerdictKind::NotKilled);
  EXPECT_EQ(classify(a, {ab, {}}).kind, VerdictKind::NonSSHOM);
  EXPECT_EQ(classify(a, {ab, ab}).killSet, a);
  EXPECT_EQ(verdictName(VerdictKind::StrictSSHOM), "StrictSSHOM");
}

TEST(Fitness, Examples) {
  TestSet ab = {"A", "B"};
  EXPECT_EQ(fitness({"A"}, {ab, ab}).value, Rational(1, 2));
  EXPECT_TRUE(fitness({"A"}, {ab, ab}).isStrict());
  EXPECT_EQ(fitness(ab, {ab, ab}).value, Rational(1));
  EXPECT_TRUE(fitness(ab, {ab, ab}).isSshom());
  EXPECT_FALSE(fitness(ab, {ab, ab}).isStrict());
  EXPECT_EQ(fitness({"C"}, {ab, ab}), Fitness::discard());
  EXPECT_EQ(fitness({"A"}, {ab, {}}), Fitness::discard());
  Fitness unkilled = fitness({}, {ab, ab});
  EXPECT_FALSE(unkilled.sentinel);
  EXPECT_EQ(unkilled.value.numerator(), 0);
  EXPECT_FALSE(unkilled.isSshom());
}

TEST(Fitness, AgreesWithClassify) {
  std::vector<TestSet> pool = {{}, {"A"}, {"B"}, {"A", "B"}, {"A", "B", "C"}, {"C"}};
  for (const TestSet& h : pool)
    for (const TestSet& x : pool)
      for (const TestSet& y : pool) {
        Verdict v = classify(h, {x, y});
        Fitness f = fitness(h, {x, y});
        EXPECT_EQ(v.isSshom(), f.isSshom());
        EXPECT_EQ(v.kind == VerdictKind::StrictSSHOM, f.isStrict());
      }
}

TEST(CommonKills, Intersection) {
  EXPECT_EQ(commonKills({{"A", "B"}, {"B", "C"}}), (TestSet{"B"}));
  EXPECT_TRUE(commonKills({{"A"}, {"B"}}).empty());
}

// Kill sets measured by running agree with the failure conditions.
TEST(Evaluator, AgreesWithFailureConditions) {
  auto s = testing::subjectFromSource(testing::fixtureSource("triangle.mut"));
  KillReport r = vrunSuite(s->meta, s->program.tests);
  Evaluator ev(s->meta, s->program.tests);
  FomResults foms = ev.evaluateFoms();
  for (const auto& [m, kills] : r.fomKills()) EXPECT_EQ(foms.killSets.at(m), kills);
  boost::random::mt19937_64 rng(17);
  std::size_t n = s->catalog.size();
  for (int round = 0; round < 300; ++round) {
    MutantSet h;
    std::size_t order = boost::random::uniform_int_distribution<std::size_t>(2, 5)(rng);
    while (h.size() < order) {
      MutantId m = mutantAt(boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
      MutantSet next = h;
      next.push_back(m);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.size() > h.size() && s->meta.conflictFree(next)) h = next;
    }
    EXPECT_EQ(ev.evaluate(h), r.killSetOf(h));
  }
}

TEST(Evaluator, SkipsTestsThatReachNoSelectedLocation) {
  auto s = testing::subjectFromSource(testing::fixtureSource("triangle.mut"));
  Evaluator ev(s->meta, s->program.tests);
  FomResults foms = ev.evaluateFoms();
  MutantSet unreached;
  for (const Fom& f : s->catalog.mutants) {
    if (foms.reachMap.at(f.id).empty() && unreached.size() < 2 &&
        (unreached.empty() || s->meta.conflictFree({unreached[0], f.id})))
      unreached.push_back(f.id);
  }
  ASSERT_EQ(unreached.size(), 2u);
  std::uint64_t before = ev.executions();
  EXPECT_TRUE(ev.evaluate(unreached).empty());
  EXPECT_EQ(ev.executions(), before);
}

TEST(Evaluator, ParallelBatchKeepsOrder) {
  auto s = testing::subjectFromSource(testing::fixtureSource("triangle.mut"));
  Evaluator ev(s->meta, s->program.tests);
  std::vector<MutantSet> batch;
  for (std::uint32_t i = 0; i + 40 < s->catalog.size(); i += 3) {
    MutantSet h = ids({i, i + 40});
    if (s->meta.conflictFree(h)) batch.push_back(h);
  }
  std::vector<TestSet> seq = ev.evaluateAll(batch, 1);
  std::vector<TestSet> par = ev.evaluateAll(batch, 3);
  EXPECT_EQ(seq, par);
  for (std::size_t i = 0; i < batch.size(); ++i) EXPECT_EQ(seq[i], ev.evaluate(batch[i]));
}

}  // namespace
}  // namespace sshom
