#ifndef SSHOM_ANALYSIS_H_
#define SSHOM_ANALYSIS_H_

#include <cstddef>
#include <map>
#include <string_view>
#include <vector>

#include "sshom/mutgen.h"
#include "sshom/sshomsat.h"

namespace sshom {

// count out of `of`; not applicable when `of` is zero.
struct Rate {
  std::size_t count = 0;
  std::size_t of = 0;

  bool applicable() const { return of > 0; }
  double percent() const { return applicable() ? 100.0 * static_cast<double>(count) / static_cast<double>(of) : 0.0; }
  friend bool operator==(const Rate&, const Rate&) = default;
};

// Span of a record's constituents: one function (M), several functions of
// one unit (C), two units (TwoC), more than two units (Star).
enum class Proximity { M, C, TwoC, Star };

std::string_view proximityName(Proximity p);

struct CharacteristicsReport {
  std::size_t records = 0;
  std::map<std::size_t, std::size_t> orderHistogram;
  Rate equalFail;
  Rate nPlusOne;
  std::map<Proximity, std::size_t> proximity;  // every class present

  friend bool operator==(const CharacteristicsReport&, const CharacteristicsReport&) = default;
};

std::map<std::size_t, std::size_t> orderHistogram(const std::vector<SshomRecord>& records);

// Records whose constituents all share one kill set.
Rate equalFailRate(const std::vector<SshomRecord>& records,
                   const std::map<MutantId, TestSet>& fomKills);

// Among records of order > 2, those equal to another record plus one mutant.
Rate nPlusOneRate(const std::vector<SshomRecord>& records);

// Throws UnknownMutant for ids outside the catalog.
Proximity proximityOf(const MutantSet& mutants, const MutantCatalog& catalog);
std::map<Proximity, std::size_t> proximityDistribution(const std::vector<SshomRecord>& records,
                                                       const MutantCatalog& catalog);

CharacteristicsReport analyze(const std::vector<SshomRecord>& records,
                              const std::map<MutantId, TestSet>& fomKills,
                              const MutantCatalog& catalog);

}  // namespace sshom

#endif  // SSHOM_ANALYSIS_H_
