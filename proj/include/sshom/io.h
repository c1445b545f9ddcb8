#ifndef SSHOM_IO_H_
#define SSHOM_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sshom/analysis.h"
#include "sshom/search.h"
#include "sshom/sshomsat.h"
#include "sshom/varex.h"

namespace sshom {

// Malformed artifact file (bad JSON or missing fields).
class FormatError : public Error {
 public:
  using Error::Error;
};

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& content);
nlohmann::json parseJson(const std::string& text);

nlohmann::json catalogToJson(const MutantCatalog& catalog);
// Throws DigestMismatch when the stored digest does not match the entries.
MutantCatalog catalogFromJson(const nlohmann::json& j);

nlohmann::json killReportToJson(const KillReport& report);
KillReport killReportFromJson(const nlohmann::json& j);

struct SshomSet {
  std::string universeDigest;
  bool strict = false;
  std::vector<SshomRecord> records;
};

nlohmann::json sshomSetToJson(const SshomSet& set);
SshomSet sshomSetFromJson(const nlohmann::json& j);

nlohmann::json timelineToJson(const Timeline& timeline, const std::string& universeDigest);
// Rows `evaluations,wall_ms,mutants,strict`; mutants space-separated names.
std::string timelineToCsv(const Timeline& timeline);

nlohmann::json characteristicsToJson(const CharacteristicsReport& report,
                                     const std::string& universeDigest);
// Rows `class,count`, one per proximity class.
std::string characteristicsToCsv(const CharacteristicsReport& report);

}  // namespace sshom

#endif  // SSHOM_IO_H_
