#include "sshom/sshomsat.h"

#include <algorithm>

namespace sshom {

namespace {

// For test t: the conjunction of !m over every mutant that t does not kill
// on its own.
Formula onlyKilledBy(const KillReport& report, const Formula& ft) {
  FormulaStore& s = *report.store;
  Formula f = s.mkTrue();
  for (std::size_t i = 0; i < report.universeSize; ++i) {
    if (!evalSingleton(ft, mutantAt(i))) f &= !s.mkVar(mutantAt(i));
  }
  return f;
}

std::vector<MutantId> universeOf(const KillReport& report) {
  std::vector<MutantId> vars;
  for (std::size_t i = 0; i < report.universeSize; ++i) vars.push_back(mutantAt(i));
  return vars;
}

}  // namespace

Formula buildSshomFormula(const KillReport& report) {
  if (report.perTest.empty()) throw Error("kill report has no tests");
  FormulaStore& s = *report.store;
  Formula failsSome = s.mkFalse();
  Formula subsumed = s.mkTrue();
  for (const auto& [id, ft] : report.perTest) {
    failsSome |= ft;
    subsumed &= implies(ft, onlyKilledBy(report, ft));
  }
  if (report.universeSize < 2) return s.mkFalse();
  std::vector<MutantId> vars = universeOf(report);
  return failsSome & subsumed & atLeastK(s, vars, 2) & report.validity();
}

Formula buildStrictFormula(const KillReport& report) {
  FormulaStore& s = *report.store;
  Formula witness = s.mkFalse();
  for (const auto& [id, ft] : report.perTest) witness |= (!ft) & onlyKilledBy(report, ft);
  return buildSshomFormula(report) & witness;
}

std::vector<SshomRecord> enumerateSSHOMs(const KillReport& report, bool strict,
                                         EnumerationStrategy strategy) {
  Formula strictFormula = buildStrictFormula(report);
  Formula target = strict ? strictFormula : buildSshomFormula(report);
  std::vector<SshomRecord> out;
  ModelStream models = enumerateModels(target, strategy);
  while (auto a = models.next()) {
    SshomRecord r;
    r.mutants = a->selected();
    r.strict = strict || evaluate(strictFormula, *a);
    for (const auto& [id, ft] : report.perTest) {
      if (evaluate(ft, *a)) r.killSet.insert(id);
    }
    r.discoveryIndex = out.size();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sshom
