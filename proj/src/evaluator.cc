#include "sshom/evaluator.h"

#include <algorithm>
#include <exception>
#include <iterator>
#include <mutex>
#include <thread>

namespace sshom {

Evaluator::Evaluator(const MetaProgram& meta, std::vector<TestCase> tests, std::uint64_t stepBound)
    : meta_(meta), tests_(std::move(tests)), stepBound_(stepBound) {
  if (stepBound_ == 0) throw Error("step bound must be positive");
  for (const TestCase& t : tests_) {
    std::vector<bool> covered(meta_.base.sites.size(), false);
    RunOptions o;
    o.stepBound = stepBound_;
    o.coveredSites = &covered;
    baselineKilled_.push_back(run(meta_.base, t, o).killed());
    reaches_.push_back(std::move(covered));
  }
}

TestSet Evaluator::evaluate(const MutantSet& selection) {
  SiteOverrides overrides = meta_.overridesFor(selection);
  TestSet kills;
  RunOptions o;
  o.stepBound = stepBound_;
  o.overrides = &overrides;
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    bool reached = std::any_of(overrides.begin(), overrides.end(),
                               [&](const auto& so) { return reaches_[i][so.first]; });
    bool killed = baselineKilled_[i];
    if (reached) {
      ++executions_;
      killed = run(meta_.base, tests_[i], o).killed();
    }
    if (killed) kills.insert(tests_[i].id);
  }
  return kills;
}

std::vector<TestSet> Evaluator::evaluateAll(const std::vector<MutantSet>& selections, int jobs) {
  std::vector<TestSet> out(selections.size());
  std::size_t workers = std::min<std::size_t>(std::max(1, jobs), selections.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < selections.size(); ++i) out[i] = evaluate(selections[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < selections.size(); i = next++) {
        try {
          out[i] = evaluate(selections[i]);
        } catch (...) {
          std::lock_guard lock(failureMutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

FomResults Evaluator::evaluateFoms() {
  FomResults r;
  std::uint64_t before = executions_;
  for (const Fom& m : meta_.catalog.mutants) {
    int site = meta_.siteOf[index(m.id)];
    TestSet& reach = r.reachMap[m.id];
    for (std::size_t i = 0; i < tests_.size(); ++i) {
      if (reaches_[i][site]) reach.insert(tests_[i].id);
    }
    r.killSets[m.id] = evaluate({m.id});
  }
  r.evaluations = executions_ - before;
  return r;
}

FomResults evaluateFoms(const MetaProgram& meta, const std::vector<TestCase>& tests,
                        std::uint64_t stepBound) {
  return Evaluator(meta, tests, stepBound).evaluateFoms();
}

TestSet evaluateCandidate(const MetaProgram& meta, const MutantSet& candidate,
                          const std::vector<TestCase>& tests, const FomResults& fomResults,
                          std::uint64_t stepBound) {
  if (candidate.size() < 2) throw Error("a candidate needs at least two constituents");
  if (std::adjacent_find(candidate.begin(), candidate.end()) != candidate.end())
    throw Error("candidate repeats a constituent");
  for (MutantId m : candidate) {
    auto it = fomResults.killSets.find(m);
    if (it == fomResults.killSets.end())
      throw UnknownMutant("no first-order result for " + mutantName(m));
    if (it->second.empty()) throw Error(mutantName(m) + " is never killed");
  }
  return Evaluator(meta, tests, stepBound).evaluate(candidate);
}

std::string_view verdictName(VerdictKind k) {
  switch (k) {
    case VerdictKind::NonSSHOM: return "NonSSHOM";
    case VerdictKind::SSHOM: return "SSHOM";
    case VerdictKind::StrictSSHOM: return "StrictSSHOM";
    case VerdictKind::NotKilled: return "NotKilled";
  }
  return "?";
}

TestSet commonKills(const std::vector<TestSet>& constituentKills) {
  if (constituentKills.empty()) throw Error("no constituent kill sets");
  TestSet common = constituentKills.front();
  for (std::size_t i = 1; i < constituentKills.size(); ++i) {
    TestSet next;
    std::set_intersection(common.begin(), common.end(), constituentKills[i].begin(),
                          constituentKills[i].end(), std::inserter(next, next.end()));
    common.swap(next);
  }
  return common;
}

Verdict classify(const TestSet& hom, const std::vector<TestSet>& constituentKills) {
  TestSet common = commonKills(constituentKills);
  Verdict v;
  v.killSet = hom;
  if (hom.empty()) {
    v.kind = VerdictKind::NotKilled;
  } else if (!std::includes(common.begin(), common.end(), hom.begin(), hom.end())) {
    v.kind = VerdictKind::NonSSHOM;
  } else {
    v.kind = hom.size() < common.size() ? VerdictKind::StrictSSHOM : VerdictKind::SSHOM;
  }
  return v;
}

Fitness fitness(const TestSet& hom, const std::vector<TestSet>& constituentKills) {
  TestSet common = commonKills(constituentKills);
  if (hom.empty()) return Fitness{};
  if (common.empty() || !std::includes(common.begin(), common.end(), hom.begin(), hom.end()))
    return Fitness::discard();
  return Fitness{false, Rational(static_cast<std::int64_t>(hom.size()),
                                 static_cast<std::int64_t>(common.size()))};
}

}  // namespace sshom
