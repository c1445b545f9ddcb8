#include <gtest/gtest.h>

#include "cli_support.h"
#include "sshom/io.h"
#include "test_support.h"

namespace sshom {
namespace {

using testing::cli;
using testing::fixturePath;
using testing::TempDir;

// guards.mut restricted to m1 (`a == 1` -> `!=`) and m10 (`a < b` -> `>=`).
std::vector<std::string> guardArgs(const std::string& cmd, const TempDir& dir) {
  return {cmd, fixturePath("guards.mut"), "--mutants", "m1,m10", "--out", dir.path().string()};
}

TEST(Cli, GenerateWritesCatalog) {
  TempDir d;
  auto r = cli({"generate", fixturePath("guards.mut"), "--out", d.path().string(), "--meta"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("15 mutants, digest ", 0), 0u) << r.out;
  EXPECT_EQ(catalogFromJson(parseJson(readFile(d / "catalog.json"))).size(), 15u);
  EXPECT_NE(readFile(d / "metaprogram.mut").find("m15 ?"), std::string::npos);
}

TEST(Cli, VarexPrintsGuardsConditions) {
  TempDir d;
  auto r = cli(guardArgs("varex", d));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "T1: m1 | m2\nT2: m1 & !m2\nT3: !m1 & m2\n");
  KillReport k = killReportFromJson(parseJson(readFile(d / "kills.json")));
  EXPECT_EQ(k.universeSize, 2u);
}

TEST(Cli, EnumerateGuards) {
  TempDir d;
  ASSERT_EQ(cli(guardArgs("varex", d)).code, kExitOk);
  auto r = cli({"enumerate", "--kills", d / "kills.json", "--catalog", d / "catalog.json", "--out",
                d.path().string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "1 SSHOMs\n{m1,m2} kills {T1}\n");
  auto s = cli({"enumerate", "--kills", d / "kills.json", "--strict", "--solver", "sat", "--out",
                d.path().string()});
  EXPECT_EQ(s.code, kExitOk) << s.err;
  EXPECT_EQ(s.out, "0 strict-SSHOMs\n");
  EXPECT_TRUE(sshomSetFromJson(parseJson(readFile(d / "sshoms-strict.json"))).records.empty());
}

TEST(Cli, SearchGuards) {
  TempDir d;
  for (const char* strategy : {"bf", "pri"}) {
    std::vector<std::string> args = guardArgs("search", d);
    args.insert(args.end(), {"--strategy", strategy});
    auto r = cli(args);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out, "1 SSHOMs (0 strict) in 1 candidate evaluations\n");
    EXPECT_EQ(readFile(d / ("timeline-" + std::string(strategy) + ".csv")),
              "evaluations,wall_ms,mutants,strict\n1,0,m1 m2,false\n");
  }
}

TEST(Cli, SearchTimelinesAreReproducible) {
  TempDir a, b;
  for (const TempDir* d : {&a, &b}) {
    for (const char* strategy : {"bf", "pri", "gen"}) {
      auto r = cli({"search", fixturePath("triangle.mut"), "--strategy", strategy, "--budget", "300",
                    "--seed", "5", "--out", d->path().string()});
      ASSERT_EQ(r.code, kExitOk) << r.err;
    }
  }
  for (const char* stem : {"timeline-bf", "timeline-pri", "timeline-gen"}) {
    EXPECT_EQ(readFile(a / (std::string(stem) + ".csv")), readFile(b / (std::string(stem) + ".csv")));
    EXPECT_EQ(readFile(a / (std::string(stem) + ".json")), readFile(b / (std::string(stem) + ".json")));
  }
}

TEST(Cli, AnalyzeGuardsGroundTruth) {
  TempDir d;
  ASSERT_EQ(cli(guardArgs("varex", d)).code, kExitOk);
  ASSERT_EQ(cli({"enumerate", "--kills", d / "kills.json", "--out", d.path().string()}).code, kExitOk);
  auto r = cli({"analyze", "--sshoms", d / "sshoms.json", "--catalog", d / "catalog.json", "--kills",
                d / "kills.json", "--out", d.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  nlohmann::json j = parseJson(readFile(d / "characteristics.json"));
  EXPECT_EQ(j["orderHistogram"], nlohmann::json({{"2", 1}}));
  EXPECT_EQ(j["equalFailRate"]["percent"], 0.0);
  EXPECT_EQ(j["nPlusOneRate"], "NotApplicable");
  EXPECT_EQ(j["proximity"]["M"], 1);
  EXPECT_EQ(readFile(d / "characteristics.csv"), "class,count\nM,1\nC,0\n2C,0\n*,0\n");
}

// Writes an SSHOM set file for the current catalog in `d`.
void writeSet(const TempDir& d, std::vector<SshomRecord> records, const std::string& name) {
  MutantCatalog c = catalogFromJson(parseJson(readFile(d / "catalog.json")));
  SshomSet set{c.digest(), false, std::move(records)};
  writeFile(d / name, sshomSetToJson(set).dump());
}

TEST(Cli, AnalyzeEmptySet) {
  TempDir d;
  ASSERT_EQ(cli(guardArgs("varex", d)).code, kExitOk);
  writeSet(d, {}, "empty.json");
  auto r = cli({"analyze", "--sshoms", d / "empty.json", "--catalog", d / "catalog.json", "--kills",
                d / "kills.json", "--out", d.path().string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  nlohmann::json j = parseJson(readFile(d / "characteristics.json"));
  EXPECT_EQ(j["records"], 0);
  EXPECT_TRUE(j["orderHistogram"].empty());
  EXPECT_EQ(j["equalFailRate"], "NotApplicable");
  EXPECT_EQ(j["nPlusOneRate"], "NotApplicable");
  for (const auto& [k, v] : j["proximity"].items()) EXPECT_EQ(v, 0) << k;
}

TEST(Cli, AnalyzeUnknownMutantIsConsistencyError) {
  TempDir d;
  ASSERT_EQ(cli(guardArgs("varex", d)).code, kExitOk);
  writeSet(d, {{{mutantAt(0), mutantAt(7)}, false, {"T1"}, 0}}, "bad.json");
  auto r = cli({"analyze", "--sshoms", d / "bad.json", "--catalog", d / "catalog.json", "--kills",
                d / "kills.json", "--out", d.path().string()});
  EXPECT_EQ(r.code, kExitConsistency);
}

TEST(Cli, MixedArtifactsAreConsistencyErrors) {
  TempDir a, b;
  ASSERT_EQ(cli(guardArgs("varex", a)).code, kExitOk);
  ASSERT_EQ(cli({"varex", fixturePath("guards.mut"), "--out", b.path().string()}).code, kExitOk);
  auto r = cli({"enumerate", "--kills", a / "kills.json", "--catalog", b / "catalog.json", "--out",
                a.path().string()});
  EXPECT_EQ(r.code, kExitConsistency);
  // A catalog whose program has changed since it was generated.
  auto stale = cli({"search", fixturePath("triangle.mut"), "--catalog", b / "catalog.json",
                    "--strategy", "bf", "--out", a.path().string()});
  EXPECT_EQ(stale.code, kExitConsistency) << stale.err;
}

TEST(Cli, ExplosionIsResourceAbort) {
  TempDir d;
  auto r = cli({"varex", fixturePath("explosion.mut"), "--out", d.path().string()});
  EXPECT_EQ(r.code, kExitResource);
  EXPECT_NE(r.err.find("hot locations"), std::string::npos);
  EXPECT_NE(r.err.find("blowup.mix#"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  TempDir d;
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"varex", "--no-such-flag"}).code, kExitUsage);
  EXPECT_EQ(cli({"varex", d / "missing.mut", "--out", d.path().string()}).code, kExitUsage);
  EXPECT_EQ(cli({"search", fixturePath("guards.mut"), "--strategy", "dfs"}).code, kExitUsage);
  EXPECT_EQ(cli({"search", fixturePath("guards.mut"), "--strategy", "gen"}).code, kExitUsage);
  EXPECT_EQ(cli({"enumerate", "--out", d.path().string()}).code, kExitUsage);
  writeFile(d / "broken.mut", "fn f( -> int {");
  auto r = cli({"varex", d / "broken.mut", "--out", d.path().string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("broken.mut:"), std::string::npos) << r.err;
  writeFile(d / "kills.json", "{\"universeDigest\": 3}");
  EXPECT_EQ(cli({"enumerate", "--kills", d / "kills.json"}).code, kExitUsage);
}

TEST(Cli, ExcludeDropsMutants) {
  TempDir d;
  auto r = cli({"generate", fixturePath("guards.mut"), "--exclude", "m1,2", "--out", d.path().string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("13 mutants", 0), 0u);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  TempDir d;
  writeFile(d / "run.toml", "mutants = \"m1,m10\"\nout = \"" + d.path().string() + "\"\n");
  auto r = cli({"varex", fixturePath("guards.mut"), "--config", d / "run.toml"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "T1: m1 | m2\nT2: m1 & !m2\nT3: !m1 & m2\n");
  auto o = cli({"varex", fixturePath("guards.mut"), "--config", d / "run.toml", "--mutants", "m1"});
  EXPECT_EQ(o.out, "T1: m1\nT2: m1\nT3: false\n");
}

}  // namespace
}  // namespace sshom
