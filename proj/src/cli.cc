#include "sshom/cli.h"

#include <cctype>
#include <chrono>
#include <fstream>
#include <filesystem>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "sshom/analysis.h"
#include "sshom/io.h"
#include "sshom/sshomsat.h"
#include "sshom/varex.h"

namespace sshom {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

std::string jsonText(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// "3,m2, 7" -> ids 3, 1, 7. Names are 1-based, bare numbers are ids.
std::vector<MutantId> parseIdList(const std::string& list, std::size_t universe) {
  std::vector<MutantId> ids;
  std::string token;
  auto flush = [&] {
    std::string t;
    for (char ch : token) {
      if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    }
    token.clear();
    if (t.empty()) return;
    bool name = t[0] == 'm';
    std::string digits = name ? t.substr(1) : t;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("bad mutant '" + t + "' (use an id like 9 or a name like m10)");
    unsigned long v = std::stoul(digits);
    if (name && v == 0) throw UsageError("mutant names start at m1");
    std::size_t id = name ? v - 1 : v;
    if (id >= universe)
      throw UsageError("mutant '" + t + "' is not in the catalog of " + std::to_string(universe));
    ids.push_back(mutantAt(id));
  };
  for (char ch : list) {
    if (ch == ',') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return ids;
}

Rational parseRational(const std::string& text, const char* what) {
  try {
    std::size_t slash = text.find('/');
    std::int64_t num = std::stoll(text.substr(0, slash));
    std::int64_t den = slash == std::string::npos ? 1 : std::stoll(text.substr(slash + 1));
    Rational r(num, den);
    if (r < 0) throw UsageError(std::string(what) + " must be non-negative");
    return r;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError(std::string("bad rational for ") + what + ": '" + text + "'");
  }
}

struct Loaded {
  Program program;
  MutantCatalog catalog;
  MetaProgram meta;
};

Loaded load(const RunConfig& c, bool needTests) {
  if (c.programPath.empty()) throw UsageError("a program file is required");
  Loaded l;
  l.program = parse(readFile(c.programPath));
  if (needTests && l.program.tests.empty()) throw UsageError("the program has no tests");
  if (!c.catalogPath.empty()) {
    l.catalog = catalogFromJson(parseJson(readFile(c.catalogPath)));
  } else {
    MutantCatalog full = generateMutants(l.program);
    std::vector<MutantId> keep;
    if (c.mutantFilter.empty()) {
      for (const Fom& f : full.mutants) keep.push_back(f.id);
    } else {
      keep = parseIdList(c.mutantFilter, full.size());
    }
    if (!c.mutantExclude.empty()) {
      std::vector<MutantId> drop = parseIdList(c.mutantExclude, full.size());
      std::erase_if(keep, [&](MutantId m) { return std::find(drop.begin(), drop.end(), m) != drop.end(); });
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    l.catalog = c.mutantFilter.empty() && c.mutantExclude.empty() ? full : filterCatalog(full, keep);
  }
  l.meta = weave(l.program, l.catalog);
  return l;
}

std::filesystem::path outDir(const RunConfig& c) {
  std::filesystem::path dir(c.outputDir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + c.outputDir + "'");
  return dir;
}

std::string records(const std::vector<SshomRecord>& rs) {
  std::string s;
  for (const SshomRecord& r : rs) {
    s += "{";
    for (std::size_t i = 0; i < r.mutants.size(); ++i) s += (i ? "," : "") + mutantName(r.mutants[i]);
    s += "} kills {";
    std::size_t i = 0;
    for (const std::string& t : r.killSet) s += (i++ ? "," : "") + t;
    s += r.strict ? "} strict\n" : "}\n";
  }
  return s;
}

int cmdGenerate(const RunConfig& c, std::ostream& out) {
  Loaded l = load(c, false);
  auto dir = outDir(c);
  writeFile((dir / "catalog.json").string(), jsonText(catalogToJson(l.catalog)));
  if (c.dumpMeta) writeFile((dir / "metaprogram.mut").string(), renderMeta(l.meta));
  out << l.catalog.size() << " mutants, digest " << l.catalog.digest() << "\n";
  return kExitOk;
}

int cmdVarex(const RunConfig& c, std::ostream& out) {
  Loaded l = load(c, true);
  VarexOptions o;
  o.stepBound = c.stepBound;
  o.partitionLimit = c.partitionLimit;
  KillReport report = vrunSuite(l.meta, l.program.tests, o, c.jobs);
  auto dir = outDir(c);
  writeFile((dir / "catalog.json").string(), jsonText(catalogToJson(l.catalog)));
  writeFile((dir / "kills.json").string(), jsonText(killReportToJson(report)));
  Formula valid = report.validity();
  for (const auto& [id, f] : report.perTest) out << id << ": " << toInfix(f, valid) << "\n";
  return kExitOk;
}

int cmdEnumerate(const RunConfig& c, std::ostream& out) {
  if (c.killsPath.empty()) throw UsageError("--kills is required");
  KillReport report = killReportFromJson(parseJson(readFile(c.killsPath)));
  if (!c.catalogPath.empty()) {
    MutantCatalog catalog = catalogFromJson(parseJson(readFile(c.catalogPath)));
    if (catalog.digest() != report.universeDigest)
      throw ConsistencyError("kill report was computed for a different catalog");
  }
  if (report.perTest.empty()) throw UsageError("kill report has no tests");
  EnumerationStrategy strategy;
  if (c.solver == "dd") {
    strategy = EnumerationStrategy::DecisionDiagram;
  } else if (c.solver == "sat") {
    strategy = EnumerationStrategy::SolveAndBlock;
  } else {
    throw UsageError("--solver must be dd or sat");
  }
  SshomSet set{report.universeDigest, c.strict, enumerateSSHOMs(report, c.strict, strategy)};
  auto dir = outDir(c);
  writeFile((dir / (c.strict ? "sshoms-strict.json" : "sshoms.json")).string(),
            jsonText(sshomSetToJson(set)));
  out << set.records.size() << (c.strict ? " strict-SSHOMs\n" : " SSHOMs\n") << records(set.records);
  return kExitOk;
}

int cmdSearch(const RunConfig& c, std::ostream& out) {
  if (c.strategy != "bf" && c.strategy != "gen" && c.strategy != "pri")
    throw UsageError("--strategy must be bf, gen or pri");
  if (c.strategy == "gen" && !c.seed) throw UsageError("strategy gen requires --seed");
  Loaded l = load(c, true);
  Budget budget{c.budgetEvaluations, c.budgetSeconds};
  SearchOptions o;
  o.stepBound = c.stepBound;
  o.recordWallClock = c.wallClock;
  o.jobs = c.jobs;
  Timeline t;
  if (c.strategy == "bf") {
    t = bruteForce(l.meta, l.program.tests, budget, c.bounds.maxOrder, o);
  } else if (c.strategy == "gen") {
    t = geneticSearch(l.meta, l.program.tests, budget, c.genetic, *c.seed, o);
  } else {
    PriorityWeights w{parseRational(c.w1, "w1"), parseRational(c.w2, "w2"), parseRational(c.w3, "w3")};
    if (c.batching != "unit" && c.batching != "none") throw UsageError("--batching must be unit or none");
    t = prioritizedSearch(l.meta, l.program.tests, w, c.bounds, budget,
                          c.batching == "unit" ? Batching::PerUnit : Batching::None, o);
  }
  auto dir = outDir(c);
  std::string stem = "timeline-" + c.strategy;
  writeFile((dir / (stem + ".csv")).string(), timelineToCsv(t));
  writeFile((dir / (stem + ".json")).string(), jsonText(timelineToJson(t, l.catalog.digest())));
  std::size_t strict = 0;
  for (const TimelineEntry& e : t.entries) strict += e.record.strict;
  out << t.entries.size() << " SSHOMs (" << strict << " strict) in " << t.totalEvaluations
      << " candidate evaluations" << (t.budgetExhausted ? ", budget exhausted\n" : "\n");
  return kExitOk;
}

int cmdAnalyze(const RunConfig& c, std::ostream& out) {
  if (c.sshomsPath.empty() || c.catalogPath.empty() || c.killsPath.empty())
    throw UsageError("--sshoms, --catalog and --kills are required");
  SshomSet set = sshomSetFromJson(parseJson(readFile(c.sshomsPath)));
  MutantCatalog catalog = catalogFromJson(parseJson(readFile(c.catalogPath)));
  KillReport report = killReportFromJson(parseJson(readFile(c.killsPath)));
  if (set.universeDigest != catalog.digest() || report.universeDigest != catalog.digest())
    throw ConsistencyError("SSHOM set, catalog and kill report come from different catalogs");
  CharacteristicsReport ch;
  try {
    ch = analyze(set.records, report.fomKills(), catalog);
  } catch (const UnknownMutant& e) {
    throw ConsistencyError(e.what());
  }
  auto dir = outDir(c);
  nlohmann::json j = characteristicsToJson(ch, catalog.digest());
  writeFile((dir / "characteristics.json").string(), jsonText(j));
  writeFile((dir / "characteristics.csv").string(), characteristicsToCsv(ch));
  out << j.dump(2) << "\n";
  return kExitOk;
}

void sidecar(const RunConfig& c, const std::string& command, std::int64_t ms) {
  std::error_code ec;
  if (!std::filesystem::is_directory(c.outputDir, ec)) return;
  std::ofstream log(std::filesystem::path(c.outputDir) / "run.log", std::ios::app);
  log << command << " wall_ms=" << ms << "\n";
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Higher-order mutant laboratory"};
  app.set_config("--config", "", "Key/value config file; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--program", c.programPath, "Source file (.mut)");
  app.add_option("--mutants", c.mutantFilter, "Keep only these mutants (ids or names)");
  app.add_option("--exclude", c.mutantExclude, "Drop these mutants (ids or names)");
  app.add_option("--catalog", c.catalogPath, "Catalog JSON");
  app.add_option("--kills", c.killsPath, "Kill report JSON");
  app.add_option("--sshoms", c.sshomsPath, "SSHOM set JSON");
  app.add_option("--out", c.outputDir, "Output directory");
  app.add_option("--step-bound", c.stepBound, "Statement budget per test run")->check(CLI::PositiveNumber);
  app.add_option("--partition-limit", c.partitionLimit, "Max alternatives per conditional value")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", c.jobs, "Parallel workers")->check(CLI::PositiveNumber);
  app.add_flag("--strict", c.strict, "Enumerate strict SSHOMs only");
  app.add_option("--solver", c.solver, "Model enumeration: dd or sat");
  app.add_option("--strategy", c.strategy, "Search strategy: bf, gen or pri");
  app.add_option("--budget", c.budgetEvaluations, "Candidate-evaluation budget");
  app.add_option("--seconds", c.budgetSeconds, "Wall-clock budget");
  app.add_option("--seed", c.seed, "Random seed (gen)");
  app.add_option("--w1", c.w1, "Order weight");
  app.add_option("--w2", c.w2, "Test-difference weight");
  app.add_option("--w3", c.w3, "N+1 bonus weight");
  app.add_option("--max-order", c.bounds.maxOrder, "Largest candidate order");
  app.add_option("--max-functions", c.bounds.maxFunctions, "Functions a candidate may span");
  app.add_option("--max-units", c.bounds.maxUnits, "Units a candidate may span");
  app.add_option("--batch-budget", c.bounds.perBatch.evaluations, "Candidate evaluations per batch");
  app.add_option("--batch-seconds", c.bounds.perBatch.seconds, "Seconds per batch");
  app.add_option("--batching", c.batching, "pri batches: unit or none");
  app.add_option("--population", c.genetic.population, "Genetic population size");
  app.add_option("--tournament", c.genetic.tournament, "Tournament size");
  app.add_option("--crossover", c.genetic.crossoverRate, "Crossover rate");
  app.add_option("--mutation", c.genetic.mutationRate, "Mutation rate");
  app.add_option("--elitism", c.genetic.elitism, "Elite individuals kept");
  app.add_option("--stall", c.genetic.stallGenerations, "Generations without news before stopping");
  app.add_flag("--wall-clock", c.wallClock, "Record wall_ms in timelines (breaks byte-reproducibility)");
  app.add_flag("--meta", c.dumpMeta, "Also write the metaprogram source (generate)");

  std::string positional;
  auto* generate = app.add_subcommand("generate", "Write the mutant catalog");
  auto* varex = app.add_subcommand("varex", "Compute failure conditions by variational execution");
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate all (strict) SSHOMs from a kill report");
  auto* search = app.add_subcommand("search", "Run bf, gen or pri search");
  auto* analyzeCmd = app.add_subcommand("analyze", "Characteristics of an SSHOM set");
  for (CLI::App* sub : {generate, varex, search}) sub->add_option("program", positional, "Source file (.mut)");
  (void)enumerate;
  (void)analyzeCmd;

  std::vector<std::string> argvStore{"sshom"};
  argvStore.insert(argvStore.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argvStore) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!positional.empty()) c.programPath = positional;

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (name == "generate") code = cmdGenerate(c, out);
    if (name == "varex") code = cmdVarex(c, out);
    if (name == "enumerate") code = cmdEnumerate(c, out);
    if (name == "search") code = cmdSearch(c, out);
    if (name == "analyze") code = cmdAnalyze(c, out);
  } catch (const PartitionExplosion& e) {
    err << "error: " << e.what() << "\nhot locations:\n";
    for (const std::string& h : e.hotLocations()) err << "  " << h << "\n";
    err << "exclude mutants at these locations with --exclude\n";
    return kExitResource;
  } catch (const OracleLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const DigestMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConsistency;
  } catch (const SyntaxError& e) {
    err << c.programPath << ":" << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  sidecar(c, name, ms.count());
  return code;
}

}  // namespace sshom
