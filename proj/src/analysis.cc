#include "sshom/analysis.h"

#include <algorithm>
#include <set>

namespace sshom {

std::string_view proximityName(Proximity p) {
  switch (p) {
    case Proximity::M: return "M";
    case Proximity::C: return "C";
    case Proximity::TwoC: return "2C";
    case Proximity::Star: return "*";
  }
  return "?";
}

std::map<std::size_t, std::size_t> orderHistogram(const std::vector<SshomRecord>& records) {
  std::map<std::size_t, std::size_t> h;
  for (const SshomRecord& r : records) ++h[r.mutants.size()];
  return h;
}

Rate equalFailRate(const std::vector<SshomRecord>& records,
                   const std::map<MutantId, TestSet>& fomKills) {
  Rate rate;
  rate.of = records.size();
  for (const SshomRecord& r : records) {
    if (r.mutants.empty()) continue;
    auto killsOf = [&](MutantId m) -> const TestSet& {
      auto it = fomKills.find(m);
      if (it == fomKills.end()) throw UnknownMutant("no kill data for " + mutantName(m));
      return it->second;
    };
    const TestSet& first = killsOf(r.mutants.front());
    rate.count += std::all_of(r.mutants.begin(), r.mutants.end(),
                              [&](MutantId m) { return killsOf(m) == first; });
  }
  return rate;
}

Rate nPlusOneRate(const std::vector<SshomRecord>& records) {
  std::set<MutantSet> sets;
  for (const SshomRecord& r : records) sets.insert(r.mutants);
  Rate rate;
  for (const SshomRecord& r : records) {
    if (r.mutants.size() <= 2) continue;
    ++rate.of;
    for (std::size_t i = 0; i < r.mutants.size(); ++i) {
      MutantSet smaller = r.mutants;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
      if (sets.count(smaller)) {
        ++rate.count;
        break;
      }
    }
  }
  return rate;
}

Proximity proximityOf(const MutantSet& mutants, const MutantCatalog& catalog) {
  std::set<std::string> units;
  std::set<std::pair<std::string, std::string>> functions;
  for (MutantId m : mutants) {
    const Location& l = catalog.at(m).location;
    units.insert(l.unitName);
    functions.emplace(l.unitName, l.functionName);
  }
  if (units.size() > 2) return Proximity::Star;
  if (units.size() == 2) return Proximity::TwoC;
  return functions.size() > 1 ? Proximity::C : Proximity::M;
}

std::map<Proximity, std::size_t> proximityDistribution(const std::vector<SshomRecord>& records,
                                                       const MutantCatalog& catalog) {
  std::map<Proximity, std::size_t> d{
      {Proximity::M, 0}, {Proximity::C, 0}, {Proximity::TwoC, 0}, {Proximity::Star, 0}};
  for (const SshomRecord& r : records) ++d[proximityOf(r.mutants, catalog)];
  return d;
}

CharacteristicsReport analyze(const std::vector<SshomRecord>& records,
                              const std::map<MutantId, TestSet>& fomKills,
                              const MutantCatalog& catalog) {
  CharacteristicsReport c;
  c.records = records.size();
  c.orderHistogram = orderHistogram(records);
  c.equalFail = equalFailRate(records, fomKills);
  c.nPlusOne = nPlusOneRate(records);
  c.proximity = proximityDistribution(records, catalog);
  return c;
}

}  // namespace sshom
