#ifndef SSHOM_VAREX_H_
#define SSHOM_VAREX_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sshom/formula.h"
#include "sshom/mutgen.h"
#include "sshom/toylang.h"

namespace sshom {

// One alternative of a conditional value.
struct CondEntry {
  Formula cond;
  std::int64_t value = 0;
};

// Alternatives with pairwise disjoint conditions and pairwise distinct
// values; the conditions together cover the context the value was computed in.
using ConditionalValue = std::vector<CondEntry>;

struct VarexOptions {
  std::uint64_t stepBound = kDefaultStepBound;
  std::size_t partitionLimit = 4096;
  // Re-check partition disjointness/coverage at every join (slow).
  bool checkInvariants = false;
};

// Raised when one conditional value grows past the partition limit.
class PartitionExplosion : public Error {
 public:
  PartitionExplosion(const std::string& what, std::vector<std::string> hotLocations);
  const std::vector<std::string>& hotLocations() const { return hot_; }

 private:
  std::vector<std::string> hot_;
};

// At most one mutant per location: the conjunction of pairwise exclusions
// over the metaprogram's exclusive groups.
Formula validityConstraint(FormulaStore& store, const std::vector<std::vector<MutantId>>& groups);

// Failure condition of `test`: true exactly for the conflict-free selections
// under which the test fails an assert, hits a runtime error, or exceeds the
// step bound.
Formula vrun(FormulaStore& store, const MetaProgram& meta, const TestCase& test,
             const VarexOptions& options = {});

struct KillReport {
  std::shared_ptr<FormulaStore> store;
  std::string universeDigest;
  std::size_t universeSize = 0;
  std::vector<std::vector<MutantId>> exclusiveGroups;
  std::vector<std::pair<std::string, Formula>> perTest;  // in suite order

  const Formula& condition(const std::string& testId) const;
  Formula validity() const { return validityConstraint(*store, exclusiveGroups); }
  // Derived on every call from the failure conditions: T_m for each mutant.
  std::map<MutantId, TestSet> fomKills() const;
  // Tests whose failure condition holds at exactly `selection`.
  TestSet killSetOf(const MutantSet& selection) const;
};

KillReport vrunSuite(const MetaProgram& meta, const std::vector<TestCase>& tests,
                     const VarexOptions& options = {}, int jobs = 1);

// Brute-force reference for vrun: instantiates and runs every conflict-free
// selection and assembles the truth table. Throws OracleLimitExceeded when
// the catalog is larger than `limit`.
Formula oracleFailureCondition(FormulaStore& store, const MetaProgram& meta, const TestCase& test,
                               std::uint64_t stepBound = kDefaultStepBound,
                               std::size_t limit = 14);

}  // namespace sshom

#endif  // SSHOM_VAREX_H_
