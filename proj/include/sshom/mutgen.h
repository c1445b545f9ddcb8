#ifndef SSHOM_MUTGEN_H_
#define SSHOM_MUTGEN_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sshom/common.h"
#include "sshom/toylang.h"

namespace sshom {

enum class OperatorKind { AOR, ROR, LCR };

std::string_view kindName(OperatorKind k);
OperatorKind kindFromName(std::string_view name);

// First-order mutant.
struct Fom {
  MutantId id{};
  OperatorKind kind = OperatorKind::AOR;
  Location location;
  BinaryOp original = BinaryOp::Add;
  BinaryOp replacement = BinaryOp::Add;
};

struct MutantCatalog {
  std::vector<Fom> mutants;
  std::string programDigest;

  std::size_t size() const { return mutants.size(); }
  const Fom& at(MutantId m) const;
  // Digest over the program digest and every entry; carried by all
  // cross-stage artifacts.
  std::string digest() const;
};

// AOR: 4 replacements per arithmetic operator; ROR: 5 per integer
// comparison, 1 (== <-> !=) per boolean equality; LCR: && <-> ||.
MutantCatalog generateMutants(const Program& program);

// Keeps the listed mutants (ids of `catalog`) and renumbers them densely in
// their original order. Throws UnknownMutant for ids outside the catalog.
MutantCatalog filterCatalog(const MutantCatalog& catalog, std::span<const MutantId> keep);

struct MetaProgram {
  Program base;
  MutantCatalog catalog;
  // Per program site, the guarding mutants in nesting order (outermost
  // first, ascending id).
  std::vector<std::vector<MutantId>> choices;
  std::vector<int> siteOf;  // mutant index -> program site

  // Groups of two or more mutants sharing a location; at most one member of
  // each group may be selected.
  std::vector<std::vector<MutantId>> exclusiveGroups() const;
  bool conflictFree(const MutantSet& selection) const;
  // Operator overrides realizing `selection`; throws ConflictingSelection.
  SiteOverrides overridesFor(const MutantSet& selection) const;
};

// Throws DigestMismatch if the catalog was not generated from `program`.
MetaProgram weave(const Program& program, const MutantCatalog& catalog);

// Concrete program with exactly the selected replacements applied.
Program instantiate(const MetaProgram& meta, const MutantSet& selection);

// Metaprogram source with every guarded site shown as a ternary nest,
// e.g. `(m1 ? a != 1 : (m2 ? a < 1 : a == 1))`.
std::string renderMeta(const MetaProgram& meta);

}  // namespace sshom

#endif  // SSHOM_MUTGEN_H_
