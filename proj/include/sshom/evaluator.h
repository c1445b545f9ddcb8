#ifndef SSHOM_EVALUATOR_H_
#define SSHOM_EVALUATOR_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/rational.hpp>

#include "sshom/mutgen.h"
#include "sshom/toylang.h"

namespace sshom {

struct FomResults {
  std::map<MutantId, TestSet> killSets;
  std::map<MutantId, TestSet> reachMap;  // tests covering the mutant's location
  std::uint64_t evaluations = 0;         // test executions consumed

  bool killed(MutantId m) const { return !killSets.at(m).empty(); }
};

// Concrete evaluation of selections against a test suite. Each test's
// baseline run on the unmutated program supplies coverage; a test only runs
// against a selection when it reaches one of the selected locations, and
// otherwise contributes its baseline outcome.
class Evaluator {
 public:
  Evaluator(const MetaProgram& meta, std::vector<TestCase> tests,
            std::uint64_t stepBound = kDefaultStepBound);

  const MetaProgram& meta() const { return meta_; }
  const std::vector<TestCase>& tests() const { return tests_; }
  std::uint64_t stepBound() const { return stepBound_; }
  // Test executions so far, baseline runs excluded.
  std::uint64_t executions() const { return executions_; }

  FomResults evaluateFoms();
  // Kill set T_h of a conflict-free selection; throws ConflictingSelection.
  // Safe to call from several threads.
  TestSet evaluate(const MutantSet& selection);
  // Evaluates selections on up to `jobs` threads; results keep input order.
  std::vector<TestSet> evaluateAll(const std::vector<MutantSet>& selections, int jobs);

 private:
  const MetaProgram& meta_;
  std::vector<TestCase> tests_;
  std::uint64_t stepBound_;
  std::vector<std::vector<bool>> reaches_;  // [test][site]
  std::vector<bool> baselineKilled_;
  std::atomic<std::uint64_t> executions_{0};
};

FomResults evaluateFoms(const MetaProgram& meta, const std::vector<TestCase>& tests,
                        std::uint64_t stepBound = kDefaultStepBound);

// Requires at least two constituents, each killed at least once.
TestSet evaluateCandidate(const MetaProgram& meta, const MutantSet& candidate,
                          const std::vector<TestCase>& tests, const FomResults& fomResults,
                          std::uint64_t stepBound = kDefaultStepBound);

enum class VerdictKind { NonSSHOM, SSHOM, StrictSSHOM, NotKilled };

std::string_view verdictName(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::NotKilled;
  TestSet killSet;

  bool isSshom() const { return kind == VerdictKind::SSHOM || kind == VerdictKind::StrictSSHOM; }
};

Verdict classify(const TestSet& hom, const std::vector<TestSet>& constituentKills);

using Rational = boost::rational<std::int64_t>;

// |T_h| / |intersection of T_i|, or the discard sentinel when the
// intersection is empty or does not contain T_h.
struct Fitness {
  bool sentinel = false;
  Rational value{0};

  static Fitness discard() { return Fitness{true, Rational(0)}; }
  bool isSshom() const { return !sentinel && value.numerator() > 0 && value <= Rational(1); }
  bool isStrict() const { return !sentinel && value.numerator() > 0 && value < Rational(1); }
  friend bool operator==(const Fitness&, const Fitness&) = default;
};

Fitness fitness(const TestSet& hom, const std::vector<TestSet>& constituentKills);

// Intersection of the constituents' kill sets.
TestSet commonKills(const std::vector<TestSet>& constituentKills);

}  // namespace sshom

#endif  // SSHOM_EVALUATOR_H_
