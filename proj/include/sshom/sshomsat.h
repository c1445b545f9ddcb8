#ifndef SSHOM_SSHOMSAT_H_
#define SSHOM_SSHOMSAT_H_

#include <cstddef>
#include <vector>

#include "sshom/formula.h"
#include "sshom/varex.h"

namespace sshom {

// A higher-order mutant that strongly subsumes its constituents.
struct SshomRecord {
  MutantSet mutants;  // at least two, ascending
  bool strict = false;
  TestSet killSet;  // T_h
  std::size_t discoveryIndex = 0;

  friend bool operator==(const SshomRecord&, const SshomRecord&) = default;
};

// Models are exactly the selections h (|h| >= 2, conflict-free) that fail some
// test and fail no test outside the kill set of any constituent:
//   (OR_t f_t) & AND_t (f_t -> AND_{m : !f_t({m})} !m) & atLeast2 & valid
Formula buildSshomFormula(const KillReport& report);

// buildSshomFormula conjoined with "some test kills every constituent but
// not h":  OR_t (!f_t & AND_{m : !f_t({m})} !m)
Formula buildStrictFormula(const KillReport& report);

// One record per model, in enumeration order. In the non-strict list each
// record's `strict` flag says whether it also satisfies the strict formula.
std::vector<SshomRecord> enumerateSSHOMs(
    const KillReport& report, bool strict,
    EnumerationStrategy strategy = EnumerationStrategy::DecisionDiagram);

}  // namespace sshom

#endif  // SSHOM_SSHOMSAT_H_
