#ifndef SSHOM_CLI_H_
#define SSHOM_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sshom/search.h"

namespace sshom {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 2,        // bad flags, unreadable or malformed input
  kExitResource = 3,     // partition explosion and similar aborts
  kExitConsistency = 4,  // artifacts from different sources
};

struct RunConfig {
  std::string programPath;
  std::string mutantFilter;   // comma-separated ids (0-based) or names (m1, m2, ...)
  std::string mutantExclude;  // same syntax; removed after filtering
  std::uint64_t stepBound = kDefaultStepBound;
  std::size_t partitionLimit = 4096;
  int jobs = 1;
  bool strict = false;
  std::string solver = "dd";  // dd | sat
  std::string strategy;       // bf | gen | pri
  std::optional<std::uint64_t> budgetEvaluations;
  std::optional<double> budgetSeconds;
  std::string w1 = "5", w2 = "1", w3 = "15";
  Bounds bounds;
  std::string batching = "unit";  // unit | none
  std::optional<std::uint64_t> seed;
  GeneticParams genetic;
  bool wallClock = false;
  std::string outputDir = "out";
  std::string catalogPath, killsPath, sshomsPath;
  bool dumpMeta = false;
};

// Parses `args` (without the program name) and runs one subcommand:
// generate, varex, enumerate, search or analyze. Returns an ExitCode.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sshom

#endif  // SSHOM_CLI_H_
