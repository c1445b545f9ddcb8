// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli_support.h"
#include "oracles.h"
#include "random_program.h"
#include "sshom/analysis.h"
#include "sshom/io.h"
#include "sshom/search.h"
#include "sshom/sshomsat.h"
#include "test_support.h"

namespace sshom {
namespace {

using testing::cli;
using testing::fixturePath;
using testing::ids;
using testing::TempDir;

constexpr std::size_t kCorpusSize = 100;
constexpr std::size_t kCorpusMutants = 12;
constexpr std::uint64_t kBudget = 2000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed check; the first few are reported.
  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || failures < 3) detail << " [" << what << "]";
    pass = false;
    ++failures;
  }
  int failures = 0;
};

std::string names(const MutantSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + mutantName(s[i]);
  return out + "}";
}

std::vector<SshomRecord> records(const Timeline& t) {
  std::vector<SshomRecord> out;
  for (const TimelineEntry& e : t.entries) out.push_back(e.record);
  return testing::canonical(out);
}

std::size_t strictCount(const Timeline& t) {
  std::size_t n = 0;
  for (const TimelineEntry& e : t.entries) n += e.record.strict;
  return n;
}

bool contains(const std::vector<SshomRecord>& sorted, const SshomRecord& r) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), r,
                             [](const SshomRecord& a, const SshomRecord& b) { return a.mutants < b.mutants; });
  return it != sorted.end() && it->mutants == r.mutants && it->killSet == r.killSet &&
         it->strict == r.strict;
}

// Shared triangle data: subject, kill report and ground truth.
struct Triangle {
  std::unique_ptr<testing::Subject> s = testing::subjectFromSource(testing::fixtureSource("triangle.mut"));
  KillReport report = vrunSuite(s->meta, s->program.tests);
  std::vector<SshomRecord> truth = testing::canonical(enumerateSSHOMs(report, false));

  bool inBounds(const MutantSet& m, const Bounds& b) const {
    std::set<std::string> fns, units;
    for (MutantId id : m) {
      const Location& l = s->catalog.at(id).location;
      fns.insert(l.unitName + "." + l.functionName);
      units.insert(l.unitName);
    }
    return m.size() <= b.maxOrder && fns.size() <= b.maxFunctions && units.size() <= b.maxUnits;
  }
};

Triangle& triangle() {
  static Triangle t;
  return t;
}

Budget evaluations(std::uint64_t n) {
  Budget b;
  b.evaluations = n;
  return b;
}

// 1. The guard pair: conditions, SSHOM set and strict set through the CLI.
void guardPair(Outcome& o) {
  TempDir d;
  std::vector<std::string> base = {"--mutants", "m1,m10", "--out", d.path().string()};
  std::vector<std::string> varex = {"varex", fixturePath("guards.mut")};
  varex.insert(varex.end(), base.begin(), base.end());
  auto v = cli(varex);
  o.check(v.code == kExitOk, "varex exit " + std::to_string(v.code));
  if (v.code != kExitOk) return;
  KillReport r = killReportFromJson(parseJson(readFile(d / "kills.json")));
  FormulaStore& st = *r.store;
  Formula m1 = st.mkVar(mutantAt(0)), m2 = st.mkVar(mutantAt(1));
  o.check(r.condition("T1") == (m1 | m2), "T1 condition");
  o.check(r.condition("T2") == (m1 & !m2), "T2 condition");
  o.check(r.condition("T3") == (!m1 & m2), "T3 condition");
  auto e = cli({"enumerate", "--kills", d / "kills.json", "--out", d.path().string()});
  auto es = cli({"enumerate", "--kills", d / "kills.json", "--strict", "--out", d.path().string()});
  o.check(e.code == kExitOk && es.code == kExitOk, "enumerate exit");
  SshomSet all = sshomSetFromJson(parseJson(readFile(d / "sshoms.json")));
  SshomSet strict = sshomSetFromJson(parseJson(readFile(d / "sshoms-strict.json")));
  o.check(all.records.size() == 1 && all.records[0].mutants == ids({0, 1}) &&
              all.records[0].killSet == TestSet{"T1"},
          "SSHOM set");
  o.check(strict.records.empty(), "strict set not empty");
  o.detail << " conditions m1|m2, m1&!m2, !m1&m2; SSHOMs {{m1,m2}} kill {T1}; strict none";
}

// 2. vrun against the brute-force oracle on the random corpus.
void vrunOracle(Outcome& o) {
  VarexOptions vo;
  vo.stepBound = testing::kRandomStepBound;
  std::size_t tests = 0, maxMutants = 0;
  for (std::uint64_t seed = 0; seed < kCorpusSize; ++seed) {
    auto s = testing::subjectFromSource(testing::randomProgram(seed, kCorpusMutants));
    maxMutants = std::max(maxMutants, s->catalog.size());
    FormulaStore st(s->catalog.size());
    for (const TestCase& t : s->program.tests) {
      ++tests;
      o.check(vrun(st, s->meta, t, vo) ==
                  oracleFailureCondition(st, s->meta, t, testing::kRandomStepBound),
              "seed " + std::to_string(seed) + " test " + t.id);
    }
  }
  o.detail << " " << kCorpusSize << " programs, " << tests << " tests, at most " << maxMutants
           << " mutants, " << o.failures << " mismatches";
}

// 3. enumerateSSHOMs against classification of every conflict-free subset.
void enumerationOracle(Outcome& o) {
  VarexOptions vo;
  vo.stepBound = testing::kRandomStepBound;
  std::size_t found = 0, strictFound = 0;
  for (std::uint64_t seed = 0; seed < kCorpusSize; ++seed) {
    auto s = testing::subjectFromSource(testing::randomProgram(seed, kCorpusMutants));
    KillReport r = vrunSuite(s->meta, s->program.tests, vo);
    for (bool strict : {false, true}) {
      auto got = testing::canonical(enumerateSSHOMs(r, strict));
      auto want = testing::bruteForceSshoms(s->meta, s->program.tests, strict, 12,
                                            testing::kRandomStepBound);
      o.check(got == want, "seed " + std::to_string(seed) + (strict ? " strict" : ""));
      (strict ? strictFound : found) += want.size();
    }
  }
  o.detail << " " << found << " SSHOMs and " << strictFound << " strict-SSHOMs over "
           << kCorpusSize << " programs, " << o.failures << " mismatches";
}

// 4. Strict records are non-strict records with a proper kill subset,
// re-measured by running the mutants.
void strictContainment(Outcome& o) {
  struct Fixture {
    std::string name;
    std::unique_ptr<testing::Subject> s;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({"guards(m1,m10)", testing::guardPair()});
  for (const char* f : {"guards.mut", "triangle.mut", "analysis.mut"})
    fixtures.push_back({f, testing::subjectFromSource(testing::fixtureSource(f))});
  std::size_t strictTotal = 0;
  for (const Fixture& f : fixtures) {
    KillReport r = vrunSuite(f.s->meta, f.s->program.tests);
    auto all = testing::canonical(enumerateSSHOMs(r, false));
    auto strict = testing::canonical(enumerateSSHOMs(r, true));
    Evaluator ev(f.s->meta, f.s->program.tests);
    FomResults foms = ev.evaluateFoms();
    for (const SshomRecord& x : strict) {
      ++strictTotal;
      o.check(contains(all, x), f.name + " " + names(x.mutants) + " missing from non-strict set");
      std::vector<TestSet> parts;
      for (MutantId m : x.mutants) parts.push_back(foms.killSets.at(m));
      TestSet common = commonKills(parts);
      TestSet hom = ev.evaluate(x.mutants);
      bool proper = hom.size() < common.size() &&
                    std::includes(common.begin(), common.end(), hom.begin(), hom.end()) && !hom.empty();
      o.check(proper && hom == x.killSet, f.name + " " + names(x.mutants) + " not a proper subset");
    }
  }
  o.detail << " " << fixtures.size() << " fixtures, " << strictTotal << " strict records re-checked";
}

// Re-verifies every entry of a timeline by running it.
void soundTimeline(Outcome& o, const Timeline& t, const MetaProgram& meta,
                   const std::vector<TestCase>& tests, std::size_t& checked) {
  Evaluator ev(meta, tests);
  FomResults foms = ev.evaluateFoms();
  for (const TimelineEntry& e : t.entries) {
    ++checked;
    std::vector<TestSet> parts;
    for (MutantId m : e.record.mutants) parts.push_back(foms.killSets.at(m));
    Verdict v = classify(ev.evaluate(e.record.mutants), parts);
    o.check(v.isSshom() && v.killSet == e.record.killSet &&
                (v.kind == VerdictKind::StrictSSHOM) == e.record.strict,
            t.strategy + " " + names(e.record.mutants));
  }
}

// 5. Precision of every search strategy.
void soundness(Outcome& o) {
  Triangle& tri = triangle();
  const MetaProgram& meta = tri.s->meta;
  const std::vector<TestCase>& tests = tri.s->program.tests;
  std::size_t checked = 0;
  Budget b = evaluations(kBudget);
  soundTimeline(o, bruteForce(meta, tests, b, 6), meta, tests, checked);
  soundTimeline(o, prioritizedSearch(meta, tests, PriorityWeights{}, Bounds{}, b), meta, tests, checked);
  soundTimeline(o, prioritizedSearch(meta, tests, PriorityWeights{}, Bounds{}, b, Batching::None),
                meta, tests, checked);
  for (std::uint64_t seed : {1, 2, 3})
    soundTimeline(o, geneticSearch(meta, tests, b, GeneticParams{}, seed), meta, tests, checked);
  auto g = testing::guardPair();
  soundTimeline(o, bruteForce(g->meta, g->program.tests, {}, 6), g->meta, g->program.tests, checked);
  soundTimeline(o, prioritizedSearch(g->meta, g->program.tests, PriorityWeights{}, Bounds{}, {}),
                g->meta, g->program.tests, checked);
  o.detail << " " << checked << " timeline entries re-verified";
}

// 6. Unbounded prioritized search recovers the in-bounds ground truth.
void groundTruth(Outcome& o) {
  Triangle& tri = triangle();
  Bounds b;  // order <= 6, <= 4 functions, <= 3 units
  std::vector<SshomRecord> want;
  for (const SshomRecord& r : tri.truth)
    if (tri.inBounds(r.mutants, b)) want.push_back(r);
  Timeline t = prioritizedSearch(tri.s->meta, tri.s->program.tests, PriorityWeights{}, b, {});
  std::vector<SshomRecord> got = records(t);
  o.check(got == want, "found " + std::to_string(got.size()) + " of " + std::to_string(want.size()));
  o.check(tri.s->catalog.size() >= 100, "fixture has fewer than 100 mutants");
  o.detail << " " << tri.s->catalog.size() << " FOMs, ground truth " << tri.truth.size()
           << " SSHOMs (" << want.size() << " in bounds), pri found " << got.size() << " in "
           << t.totalEvaluations << " evaluations";
}

// 7. At a fixed budget, prioritized search finds at least as many strict
// SSHOMs as brute force; genetic finds stay inside the ground truth.
void effectiveness(Outcome& o) {
  Triangle& tri = triangle();
  const MetaProgram& meta = tri.s->meta;
  const std::vector<TestCase>& tests = tri.s->program.tests;
  Budget b = evaluations(kBudget);
  Timeline bf = bruteForce(meta, tests, b, 6);
  // Small subject: the whole program is one batch.
  Timeline pri = prioritizedSearch(meta, tests, PriorityWeights{}, Bounds{}, b, Batching::None);
  o.check(strictCount(pri) >= strictCount(bf), "pri strict below bf strict");
  std::size_t genFound = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    Timeline gen = geneticSearch(meta, tests, b, GeneticParams{}, seed);
    for (const SshomRecord& r : records(gen)) {
      ++genFound;
      o.check(contains(tri.truth, r), "gen seed " + std::to_string(seed) + " " + names(r.mutants));
    }
  }
  o.detail << " strict finds at " << kBudget << " evaluations: pri " << strictCount(pri) << ", bf "
           << strictCount(bf) << " (all finds: pri " << pri.entries.size() << ", bf "
           << bf.entries.size() << "); gen " << genFound << " finds over 3 seeds, all in ground truth";
}

// 8. Timelines serialize identically across runs.
void determinism(Outcome& o) {
  TempDir a, b;
  std::size_t files = 0;
  for (const TempDir* d : {&a, &b}) {
    for (const char* strategy : {"bf", "pri"}) {
      auto r = cli({"search", fixturePath("triangle.mut"), "--strategy", strategy, "--budget",
                    std::to_string(kBudget), "--out", d->path().string()});
      o.check(r.code == kExitOk, std::string(strategy) + " exit");
    }
    for (const char* seed : {"1", "2", "3"}) {
      std::string dir = d->path().string() + "/seed" + seed;
      auto r = cli({"search", fixturePath("triangle.mut"), "--strategy", "gen", "--seed", seed,
                    "--budget", std::to_string(kBudget), "--out", dir});
      o.check(r.code == kExitOk, std::string("gen exit seed ") + seed);
    }
  }
  std::vector<std::string> paths = {"timeline-bf.csv", "timeline-bf.json", "timeline-pri.csv",
                                    "timeline-pri.json"};
  for (const char* seed : {"1", "2", "3"}) {
    paths.push_back(std::string("seed") + seed + "/timeline-gen.csv");
    paths.push_back(std::string("seed") + seed + "/timeline-gen.json");
  }
  for (const std::string& p : paths) {
    ++files;
    o.check(readFile(a / p) == readFile(b / p), p + " differs");
  }
  o.detail << " " << files << " timeline files byte-identical across two runs";
}

// 9. Penalty worked examples with default weights.
void penalties(Outcome& o) {
  auto g = testing::guardPair();
  FomResults kills = evaluateFoms(g->meta, g->program.tests);
  Rational pair = penalty(ids({0, 1}), kills, {}, PriorityWeights{});
  // A third mutant killed by T1 alone, on top of the known pair.
  kills.killSets[mutantAt(2)] = {"T1"};
  Rational triple = penalty(ids({0, 1, 2}), kills, {ids({0, 1})}, PriorityWeights{});
  // Two mutants sharing one kill set.
  kills.killSets[mutantAt(3)] = kills.killSets.at(mutantAt(0));
  Rational equal = penalty(ids({0, 3}), kills, {}, PriorityWeights{});
  o.check(pair == Rational(12), "pair");
  o.check(triple == Rational(2), "N+1 triple");
  o.check(equal == Rational(10), "equal kill sets");
  o.detail << " " << pair.numerator() << ", " << triple.numerator() << ", " << equal.numerator();
}

// 10. Characteristics through the analyze command.
void characteristics(Outcome& o) {
  TempDir d;
  auto v = cli({"varex", fixturePath("analysis.mut"), "--out", d.path().string()});
  o.check(v.code == kExitOk, "varex exit");
  TempDir g;
  auto gv = cli({"varex", fixturePath("guards.mut"), "--mutants", "m1,m10", "--out", g.path().string()});
  o.check(gv.code == kExitOk, "guards varex exit");
  if (!o.pass) return;
  auto analyzeSet = [&](const TempDir& dir, std::vector<MutantSet> sets) {
    MutantCatalog c = catalogFromJson(parseJson(readFile(dir / "catalog.json")));
    SshomSet set{c.digest(), false, {}};
    for (MutantSet& m : sets) set.records.push_back({std::move(m), false, {"T"}, set.records.size()});
    writeFile(dir / "set.json", sshomSetToJson(set).dump());
    auto r = cli({"analyze", "--sshoms", dir / "set.json", "--catalog", dir / "catalog.json",
                  "--kills", dir / "kills.json", "--out", dir.path().string()});
    o.check(r.code == kExitOk, "analyze exit " + std::to_string(r.code));
    return parseJson(readFile(dir / "characteristics.json"));
  };
  using nlohmann::json;
  auto pct = [](const json& rate) { return rate.is_object() ? rate["percent"].get<double>() : -1.0; };
  // m1, m5 in a.f; m9 in a.g; m13 in b.h; m17 in c.k.
  json hist = analyzeSet(d, {ids({0, 4}), ids({0, 8}), ids({0, 4, 8})});
  o.check(hist["orderHistogram"] == json({{"2", 2}, {"3", 1}}), "order histogram");
  json guard = analyzeSet(g, {ids({0, 1})});
  o.check(pct(guard["equalFailRate"]) == 0.0, "equal-fail 0%");
  o.check(guard["nPlusOneRate"] == "NotApplicable", "guard pair N+1 not applicable");
  o.check(guard["proximity"]["M"] == 1, "guard pair proximity");
  json equal = analyzeSet(d, {ids({0, 4})});
  o.check(pct(equal["equalFailRate"]) == 100.0, "equal-fail 100%");
  json n1 = analyzeSet(d, {ids({0, 4}), ids({0, 4, 8})});
  o.check(pct(n1["nPlusOneRate"]) == 100.0, "N+1 100%");
  json lone = analyzeSet(d, {ids({0, 12, 16})});
  o.check(pct(lone["nPlusOneRate"]) == 0.0, "N+1 0%");
  json pairs = analyzeSet(d, {ids({0, 4}), ids({8, 12})});
  o.check(pairs["nPlusOneRate"] == "NotApplicable", "N+1 not applicable");
  json prox = analyzeSet(d, {ids({0, 4}), ids({0, 8}), ids({0, 12}), ids({0, 12, 16})});
  o.check(prox["proximity"] == json({{"M", 1}, {"C", 1}, {"2C", 1}, {"*", 1}}), "proximity classes");
  json empty = analyzeSet(d, {});
  o.check(empty["records"] == 0 && empty["equalFailRate"] == "NotApplicable", "empty set");
  o.detail << " histogram {2:2,3:1}; equal-fail 0%/100%; N+1 100%/0%/NotApplicable;"
              " proximity M/C/2C/*";
}

struct Criterion {
  int number;
  const char* title;
  double limitSeconds;  // 0 means no runtime limit
  std::function<void(Outcome&)> run;
};

}  // namespace
}  // namespace sshom

int main() {
  using namespace sshom;
  std::vector<Criterion> criteria = {
      {1, "guard pair conditions and SSHOM sets", 1, guardPair},
      {2, "vrun matches the brute-force oracle", 300, vrunOracle},
      {3, "SSHOM enumeration matches subset classification", 600, enumerationOracle},
      {4, "strict-SSHOMs are contained and proper", 0, strictContainment},
      {5, "search results re-verify", 0, soundness},
      {6, "unbounded prioritized search recovers the ground truth", 600, groundTruth},
      {7, "prioritization effectiveness at a fixed budget", 0, effectiveness},
      {8, "timelines are deterministic", 0, determinism},
      {9, "penalty worked examples", 0, penalties},
      {10, "characteristics of constructed SSHOM sets", 0, characteristics},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limitSeconds > 0) o.check(secs < c.limitSeconds, "over the time limit");
    all = all && o.pass;
    std::printf("criterion %2d %s: %s (%.2f s)%s\n", c.number, o.pass ? "PASS" : "FAIL", c.title,
                secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
