#ifndef SSHOM_SEARCH_H_
#define SSHOM_SEARCH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sshom/evaluator.h"
#include "sshom/sshomsat.h"

namespace sshom {

struct TimelineEntry {
  SshomRecord record;
  std::uint64_t evaluations = 0;  // candidate evaluations so far, this one included
  std::int64_t wallMillis = 0;    // 0 unless wall-clock recording is on

  friend bool operator==(const TimelineEntry&, const TimelineEntry&) = default;
};

struct Timeline {
  std::string strategy;
  std::vector<TimelineEntry> entries;
  std::uint64_t totalEvaluations = 0;  // candidate evaluations
  std::uint64_t fomExecutions = 0;     // test executions spent on first-order mutants
  bool budgetExhausted = false;

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

// Limits on candidate evaluations; unset means unbounded.
struct Budget {
  std::optional<std::uint64_t> evaluations;
  std::optional<double> seconds;
};

struct SearchOptions {
  std::uint64_t stepBound = kDefaultStepBound;
  bool recordWallClock = false;
  int jobs = 1;
};

struct PriorityWeights {
  Rational w1{5};
  Rational w2{1};
  Rational w3{15};
};

struct Bounds {
  std::size_t maxOrder = 6;
  std::size_t maxFunctions = 4;
  std::size_t maxUnits = 3;
  Budget perBatch;
};

struct GeneticParams {
  std::size_t population = 64;
  std::size_t tournament = 2;
  double crossoverRate = 0.9;
  double mutationRate = 0.2;
  std::size_t elitism = 2;
  std::size_t maxOrder = 6;
  // Stop after this many consecutive generations without a new candidate.
  std::size_t stallGenerations = 50;
};

Timeline bruteForce(const MetaProgram& meta, const std::vector<TestCase>& tests,
                    const Budget& budget, std::size_t maxOrder, const SearchOptions& options = {});

Timeline geneticSearch(const MetaProgram& meta, const std::vector<TestCase>& tests,
                       const Budget& budget, const GeneticParams& params, std::uint64_t seed,
                       const SearchOptions& options = {});

// w1 * order + w2 * testDiff - w3 * isN1, where testDiff counts the tests that
// kill a proper non-empty subset of the constituents and isN1 says whether
// the candidate is a known SSHOM plus one more mutant.
Rational penalty(const MutantSet& candidate, const FomResults& fomResults,
                 const std::set<MutantSet>& knownSshoms, const PriorityWeights& weights);

// Conflict-free subsets of `foms` with 2..maxOrder members spanning at most
// maxFunctions functions and maxUnits units, ordered by (size, ids). When
// `leader` is given, only subsets whose lowest-id member satisfies it.
std::vector<MutantSet> enumerateCandidates(std::span<const Fom> foms, const Bounds& bounds,
                                           const std::function<bool(const Fom&)>& leader = {});

enum class Batching {
  PerUnit,  // one unit at a time; a candidate goes to its lowest-id constituent's unit
  None,     // the whole program as one batch
};

Timeline prioritizedSearch(const MetaProgram& meta, const std::vector<TestCase>& tests,
                           const PriorityWeights& weights, const Bounds& bounds,
                           const Budget& budget, Batching batching = Batching::PerUnit,
                           const SearchOptions& options = {});

}  // namespace sshom

#endif  // SSHOM_SEARCH_H_
