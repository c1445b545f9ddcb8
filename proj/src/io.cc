#include "sshom/io.h"

#include <fstream>
#include <sstream>

namespace sshom {

using nlohmann::json;

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

json idsToJson(const MutantSet& s) {
  json a = json::array();
  for (MutantId m : s) a.push_back(index(m));
  return a;
}

MutantSet idsFromJson(const json& a) {
  MutantSet s;
  for (const json& v : a) s.push_back(mutantAt(v.get<std::uint32_t>()));
  std::sort(s.begin(), s.end());
  return s;
}

json testsToJson(const TestSet& t) { return json(std::vector<std::string>(t.begin(), t.end())); }

TestSet testsFromJson(const json& a) {
  TestSet t;
  for (const json& v : a) t.insert(v.get<std::string>());
  return t;
}

json rateToJson(const Rate& r) {
  if (!r.applicable()) return "NotApplicable";
  return json{{"percent", r.percent()}, {"count", r.count}, {"of", r.of}};
}

}  // namespace

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

json parseJson(const std::string& text) {
  return guarded("invalid JSON", [&] { return json::parse(text); });
}

json catalogToJson(const MutantCatalog& catalog) {
  json mutants = json::array();
  for (const Fom& f : catalog.mutants) {
    mutants.push_back({{"id", index(f.id)},
                       {"name", mutantName(f.id)},
                       {"kind", kindName(f.kind)},
                       {"unit", f.location.unitName},
                       {"function", f.location.functionName},
                       {"ordinal", f.location.ordinal},
                       {"original", token(f.original)},
                       {"replacement", token(f.replacement)}});
  }
  return {{"programDigest", catalog.programDigest}, {"digest", catalog.digest()}, {"mutants", mutants}};
}

MutantCatalog catalogFromJson(const json& j) {
  MutantCatalog c = guarded("catalog", [&] {
    MutantCatalog c;
    c.programDigest = j.at("programDigest").get<std::string>();
    for (const json& m : j.at("mutants")) {
      Fom f;
      f.id = mutantAt(m.at("id").get<std::uint32_t>());
      if (index(f.id) != c.mutants.size()) throw FormatError("catalog ids must be dense and ordered");
      f.kind = kindFromName(m.at("kind").get<std::string>());
      f.location.unitName = m.at("unit").get<std::string>();
      f.location.functionName = m.at("function").get<std::string>();
      f.location.ordinal = m.at("ordinal").get<int>();
      auto op = [&](const char* key) {
        auto o = binaryOpFromToken(m.at(key).get<std::string>());
        if (!o) throw FormatError(std::string("catalog: bad operator in '") + key + "'");
        return *o;
      };
      f.original = op("original");
      f.replacement = op("replacement");
      c.mutants.push_back(f);
    }
    return c;
  });
  if (j.contains("digest") && j["digest"] != c.digest())
    throw DigestMismatch("catalog digest does not match its entries");
  return c;
}

json killReportToJson(const KillReport& report) {
  // Conditions are written modulo the validity constraint, which the reader
  // conjoins back in from exclusiveGroups.
  json tests = json::array();
  Formula valid = report.validity();
  for (const auto& [id, f] : report.perTest)
    tests.push_back({{"id", id}, {"failureCondition", toInfix(f, valid)}});
  json groups = json::array();
  for (const auto& g : report.exclusiveGroups) groups.push_back(idsToJson(MutantSet(g.begin(), g.end())));
  return {{"universeDigest", report.universeDigest},
          {"universeSize", report.universeSize},
          {"exclusiveGroups", groups},
          {"tests", tests}};
}

KillReport killReportFromJson(const json& j) {
  return guarded("kill report", [&] {
    KillReport r;
    r.universeDigest = j.at("universeDigest").get<std::string>();
    r.universeSize = j.at("universeSize").get<std::size_t>();
    r.store = std::make_shared<FormulaStore>(r.universeSize);
    if (j.contains("exclusiveGroups")) {
      for (const json& g : j["exclusiveGroups"]) {
        MutantSet s = idsFromJson(g);
        for (MutantId m : s) {
          if (index(m) >= r.universeSize) throw FormatError("kill report: group member outside the universe");
        }
        r.exclusiveGroups.emplace_back(s.begin(), s.end());
      }
    }
    Formula valid = r.validity();
    for (const json& t : j.at("tests")) {
      std::string text = t.at("failureCondition").get<std::string>();
      Formula f;
      try {
        f = parseInfix(*r.store, text) & valid;
      } catch (const Error& e) {
        throw FormatError("kill report: " + std::string(e.what()));
      }
      r.perTest.emplace_back(t.at("id").get<std::string>(), f);
    }
    return r;
  });
}

json sshomSetToJson(const SshomSet& set) {
  json records = json::array();
  for (const SshomRecord& r : set.records) {
    json names = json::array();
    for (MutantId m : r.mutants) names.push_back(mutantName(m));
    records.push_back({{"mutants", idsToJson(r.mutants)},
                       {"names", names},
                       {"strict", r.strict},
                       {"killSet", testsToJson(r.killSet)},
                       {"discoveryIndex", r.discoveryIndex}});
  }
  return {{"universeDigest", set.universeDigest}, {"strict", set.strict}, {"records", records}};
}

SshomSet sshomSetFromJson(const json& j) {
  return guarded("SSHOM set", [&] {
    SshomSet s;
    s.universeDigest = j.at("universeDigest").get<std::string>();
    s.strict = j.value("strict", false);
    for (const json& r : j.at("records")) {
      SshomRecord rec;
      rec.mutants = idsFromJson(r.at("mutants"));
      rec.strict = r.at("strict").get<bool>();
      rec.killSet = testsFromJson(r.at("killSet"));
      rec.discoveryIndex = r.value("discoveryIndex", s.records.size());
      s.records.push_back(std::move(rec));
    }
    return s;
  });
}

json timelineToJson(const Timeline& t, const std::string& universeDigest) {
  json entries = json::array();
  for (const TimelineEntry& e : t.entries) {
    entries.push_back({{"evaluations", e.evaluations},
                       {"wall_ms", e.wallMillis},
                       {"mutants", idsToJson(e.record.mutants)},
                       {"strict", e.record.strict},
                       {"killSet", testsToJson(e.record.killSet)},
                       {"discoveryIndex", e.record.discoveryIndex}});
  }
  return {{"universeDigest", universeDigest},
          {"strategy", t.strategy},
          {"totalEvaluations", t.totalEvaluations},
          {"fomExecutions", t.fomExecutions},
          {"budgetExhausted", t.budgetExhausted},
          {"entries", entries}};
}

std::string timelineToCsv(const Timeline& t) {
  std::string out = "evaluations,wall_ms,mutants,strict\n";
  for (const TimelineEntry& e : t.entries) {
    out += std::to_string(e.evaluations) + "," + std::to_string(e.wallMillis) + ",";
    for (std::size_t i = 0; i < e.record.mutants.size(); ++i) {
      if (i) out += " ";
      out += mutantName(e.record.mutants[i]);
    }
    out += e.record.strict ? ",true\n" : ",false\n";
  }
  return out;
}

json characteristicsToJson(const CharacteristicsReport& c, const std::string& universeDigest) {
  json order = json::object();
  for (const auto& [k, n] : c.orderHistogram) order[std::to_string(k)] = n;
  json proximity = json::object();
  for (const auto& [p, n] : c.proximity) proximity[std::string(proximityName(p))] = n;
  return {{"universeDigest", universeDigest},
          {"records", c.records},
          {"orderHistogram", order},
          {"equalFailRate", rateToJson(c.equalFail)},
          {"nPlusOneRate", rateToJson(c.nPlusOne)},
          {"proximity", proximity}};
}

std::string characteristicsToCsv(const CharacteristicsReport& c) {
  std::string out = "class,count\n";
  for (const auto& [p, n] : c.proximity) out += std::string(proximityName(p)) + "," + std::to_string(n) + "\n";
  return out;
}

}  // namespace sshom
