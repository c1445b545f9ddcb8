#include "sshom/search.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <queue>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace sshom {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Shared bookkeeping: candidate-evaluation budget and the timeline.
class Run {
 public:
  Run(std::string strategy, const Budget& budget, const SearchOptions& options)
      : budget_(budget), options_(options), start_(Clock::now()) {
    timeline.strategy = std::move(strategy);
  }

  // Room for `n` more candidate evaluations?
  bool allows(std::uint64_t n = 1) const {
    if (budget_.evaluations && timeline.totalEvaluations + n > *budget_.evaluations) return false;
    if (budget_.seconds && secondsSince(start_) >= *budget_.seconds) return false;
    return true;
  }

  std::uint64_t remaining() const {
    if (!budget_.evaluations) return std::numeric_limits<std::uint64_t>::max();
    return *budget_.evaluations - std::min(*budget_.evaluations, timeline.totalEvaluations);
  }

  void counted() { ++timeline.totalEvaluations; }

  void record(const MutantSet& mutants, const Verdict& v) {
    if (!v.isSshom()) return;
    TimelineEntry e;
    e.record.mutants = mutants;
    e.record.strict = v.kind == VerdictKind::StrictSSHOM;
    e.record.killSet = v.killSet;
    e.record.discoveryIndex = timeline.entries.size();
    e.evaluations = timeline.totalEvaluations;
    if (options_.recordWallClock) {
      e.wallMillis = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_)
                         .count();
    }
    timeline.entries.push_back(std::move(e));
  }

  Timeline timeline;

 private:
  Budget budget_;
  const SearchOptions& options_;
  Clock::time_point start_;
};

std::vector<TestSet> constituentKills(const FomResults& fr, const MutantSet& c) {
  std::vector<TestSet> out;
  for (MutantId m : c) out.push_back(fr.killSets.at(m));
  return out;
}

std::vector<Fom> killedFoms(const MetaProgram& meta, const FomResults& fr) {
  std::vector<Fom> out;
  for (const Fom& f : meta.catalog.mutants) {
    if (fr.killed(f.id)) out.push_back(f);
  }
  return out;
}

// Candidate generation by depth-first search per size, pruning on location
// conflicts and span bounds. `visit` returns false to stop.
class CandidateWalker {
 public:
  CandidateWalker(std::span<const Fom> foms, const Bounds& bounds,
                  const std::function<bool(const Fom&)>& leader)
      : foms_(foms.begin(), foms.end()), bounds_(bounds), leader_(leader) {
    std::sort(foms_.begin(), foms_.end(), [](const Fom& a, const Fom& b) { return a.id < b.id; });
    std::map<std::string, int> units;
    std::map<std::pair<std::string, std::string>, int> functions;
    std::map<Location, int> locations;
    for (const Fom& f : foms_) {
      const Location& l = f.location;
      unit_.push_back(units.emplace(l.unitName, static_cast<int>(units.size())).first->second);
      function_.push_back(
          functions.emplace(std::pair(l.unitName, l.functionName), static_cast<int>(functions.size()))
              .first->second);
      location_.push_back(locations.emplace(l, static_cast<int>(locations.size())).first->second);
    }
    unitCount_.assign(units.size(), 0);
    functionCount_.assign(functions.size(), 0);
    locationUsed_.assign(locations.size(), false);
  }

  bool walk(const std::function<bool(const MutantSet&)>& visit) {
    for (std::size_t k = 2; k <= bounds_.maxOrder && k <= foms_.size(); ++k) {
      current_.clear();
      if (!extend(0, k, visit)) return false;
    }
    return true;
  }

 private:
  bool extend(std::size_t from, std::size_t k, const std::function<bool(const MutantSet&)>& visit) {
    if (current_.size() == k) return visit(current_);
    std::size_t need = k - current_.size();
    for (std::size_t i = from; i + need <= foms_.size(); ++i) {
      if (current_.empty() && leader_ && !leader_(foms_[i])) continue;
      if (locationUsed_[location_[i]]) continue;
      bool newUnit = unitCount_[unit_[i]] == 0;
      bool newFunction = functionCount_[function_[i]] == 0;
      if (newUnit && units_ + 1 > bounds_.maxUnits) continue;
      if (newFunction && functions_ + 1 > bounds_.maxFunctions) continue;
      locationUsed_[location_[i]] = true;
      units_ += newUnit;
      functions_ += newFunction;
      ++unitCount_[unit_[i]];
      ++functionCount_[function_[i]];
      current_.push_back(foms_[i].id);
      bool go = extend(i + 1, k, visit);
      current_.pop_back();
      --unitCount_[unit_[i]];
      --functionCount_[function_[i]];
      units_ -= newUnit;
      functions_ -= newFunction;
      locationUsed_[location_[i]] = false;
      if (!go) return false;
    }
    return true;
  }

  std::vector<Fom> foms_;
  Bounds bounds_;
  const std::function<bool(const Fom&)>& leader_;
  std::vector<int> unit_, function_, location_;
  std::vector<int> unitCount_, functionCount_;
  std::vector<bool> locationUsed_;
  std::size_t units_ = 0, functions_ = 0;
  MutantSet current_;
};

bool bySizeThenIds(const MutantSet& a, const MutantSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

MutantSet without(const MutantSet& s, std::size_t i) {
  MutantSet out = s;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

bool isNPlusOne(const MutantSet& c, const std::set<MutantSet>& known) {
  if (c.size() < 3) return false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (known.count(without(c, i))) return true;
  }
  return false;
}

}  // namespace

std::vector<MutantSet> enumerateCandidates(std::span<const Fom> foms, const Bounds& bounds,
                                           const std::function<bool(const Fom&)>& leader) {
  if (bounds.maxOrder < 2) throw Error("maxOrder must be at least 2");
  std::vector<MutantSet> out;
  CandidateWalker(foms, bounds, leader).walk([&](const MutantSet& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

Rational penalty(const MutantSet& candidate, const FomResults& fomResults,
                 const std::set<MutantSet>& knownSshoms, const PriorityWeights& weights) {
  if (candidate.size() < 2) throw Error("a candidate needs at least two constituents");
  std::vector<TestSet> kills = constituentKills(fomResults, candidate);
  std::map<std::string, std::size_t> killers;
  for (const TestSet& k : kills) {
    for (const std::string& t : k) ++killers[t];
  }
  std::int64_t testDiff = 0;
  for (const auto& [t, n] : killers) testDiff += n < candidate.size();
  auto order = static_cast<std::int64_t>(candidate.size());
  std::int64_t n1 = isNPlusOne(candidate, knownSshoms) ? 1 : 0;
  return weights.w1 * order + weights.w2 * testDiff - weights.w3 * n1;
}

Timeline bruteForce(const MetaProgram& meta, const std::vector<TestCase>& tests,
                    const Budget& budget, std::size_t maxOrder, const SearchOptions& options) {
  if (maxOrder < 2) throw Error("maxOrder must be at least 2");
  Evaluator ev(meta, tests, options.stepBound);
  FomResults fr = ev.evaluateFoms();
  Run run("bf", budget, options);
  run.timeline.fomExecutions = fr.evaluations;
  std::vector<Fom> killed = killedFoms(meta, fr);

  Bounds bounds;
  bounds.maxOrder = maxOrder;
  bounds.maxFunctions = bounds.maxUnits = std::numeric_limits<std::size_t>::max();
  const std::size_t chunkSize = options.jobs > 1 ? 64 * static_cast<std::size_t>(options.jobs) : 1;
  std::vector<MutantSet> chunk;
  auto flush = [&] {
    std::vector<TestSet> kills = ev.evaluateAll(chunk, options.jobs);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      run.counted();
      run.record(chunk[i], classify(kills[i], constituentKills(fr, chunk[i])));
    }
    chunk.clear();
  };
  CandidateWalker(killed, bounds, {}).walk([&](const MutantSet& c) {
    if (!run.allows(chunk.size() + 1)) {
      run.timeline.budgetExhausted = true;
      return false;
    }
    chunk.push_back(c);
    if (chunk.size() >= chunkSize) flush();
    return true;
  });
  flush();
  return run.timeline;
}

Timeline geneticSearch(const MetaProgram& meta, const std::vector<TestCase>& tests,
                       const Budget& budget, const GeneticParams& params, std::uint64_t seed,
                       const SearchOptions& options) {
  if (params.population < 1 || params.tournament < 1) throw Error("population and tournament must be positive");
  if (params.maxOrder < 2) throw Error("maxOrder must be at least 2");
  if (params.crossoverRate < 0 || params.crossoverRate > 1 || params.mutationRate < 0 ||
      params.mutationRate > 1)
    throw Error("rates must lie in [0, 1]");

  Evaluator ev(meta, tests, options.stepBound);
  FomResults fr = ev.evaluateFoms();
  Run run("gen", budget, options);
  run.timeline.fomExecutions = fr.evaluations;

  std::vector<MutantId> pool;
  for (const Fom& f : killedFoms(meta, fr)) pool.push_back(f.id);
  auto siteOf = [&](MutantId m) { return meta.siteOf[index(m)]; };
  bool anyPair = false;
  for (std::size_t i = 0; i < pool.size() && !anyPair; ++i) {
    for (std::size_t j = i + 1; j < pool.size() && !anyPair; ++j)
      anyPair = siteOf(pool[i]) != siteOf(pool[j]);
  }
  if (!anyPair) return run.timeline;

  boost::random::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) {
    return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto chance = [&](double p) {
    return boost::random::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };
  auto fits = [&](const MutantSet& s, MutantId m) {
    return std::none_of(s.begin(), s.end(), [&](MutantId x) { return siteOf(x) == siteOf(m); });
  };
  auto addRandom = [&](MutantSet& s) {
    std::size_t start = pick(pool.size());
    for (std::size_t k = 0; k < pool.size(); ++k) {
      MutantId m = pool[(start + k) % pool.size()];
      if (fits(s, m)) {
        s.insert(std::upper_bound(s.begin(), s.end(), m), m);
        return true;
      }
    }
    return false;
  };
  auto randomPair = [&] {
    MutantSet s;
    while (s.size() < 2) {
      s.clear();
      s.push_back(pool[pick(pool.size())]);
      addRandom(s);
    }
    return s;
  };
  auto repair = [&](MutantSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    MutantSet kept;
    for (MutantId m : s) {
      if (fits(kept, m)) kept.push_back(m);
    }
    while (kept.size() > params.maxOrder) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pick(kept.size())));
    while (kept.size() < 2) {
      if (!addRandom(kept)) return randomPair();
    }
    return kept;
  };
  auto mutate = [&](MutantSet s) {
    switch (pick(3)) {
      case 0:
        if (s.size() < params.maxOrder) addRandom(s);
        break;
      case 1:
        if (s.size() > 2) s.erase(s.begin() + static_cast<std::ptrdiff_t>(pick(s.size())));
        break;
      default: {
        MutantSet rest = without(s, pick(s.size()));
        if (addRandom(rest)) s = rest;
        break;
      }
    }
    return repair(std::move(s));
  };
  auto crossover = [&](const MutantSet& a, const MutantSet& b) {
    MutantSet both;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    MutantSet child;
    for (MutantId m : both) {
      if (chance(0.5)) child.push_back(m);
    }
    return repair(std::move(child));
  };

  std::map<MutantSet, Fitness> memo;
  std::vector<MutantSet> population;
  for (std::size_t i = 0; i < params.population; ++i) population.push_back(randomPair());

  std::size_t stall = 0;
  while (true) {
    std::vector<MutantSet> fresh;
    for (const MutantSet& ind : population) {
      if (!memo.count(ind) && std::find(fresh.begin(), fresh.end(), ind) == fresh.end())
        fresh.push_back(ind);
    }
    bool exhausted = false;
    if (fresh.size() > run.remaining()) {
      fresh.resize(run.remaining());
      exhausted = true;
    }
    if (!run.allows(fresh.empty() ? 0 : 1)) {
      fresh.clear();
      exhausted = true;
    }
    std::vector<TestSet> kills = ev.evaluateAll(fresh, options.jobs);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      run.counted();
      std::vector<TestSet> ck = constituentKills(fr, fresh[i]);
      Fitness f = fitness(kills[i], ck);
      memo.emplace(fresh[i], f);
      if (f.isSshom()) run.record(fresh[i], classify(kills[i], ck));
    }
    if (exhausted) {
      run.timeline.budgetExhausted = true;
      break;
    }
    stall = fresh.empty() ? stall + 1 : 0;
    if (stall >= params.stallGenerations) break;

    // Zero and sentinel fitness are discarded; lower fitness is better.
    std::vector<std::pair<Rational, MutantSet>> survivors;
    for (const MutantSet& ind : population) {
      auto it = memo.find(ind);
      if (it == memo.end() || it->second.sentinel || it->second.value.numerator() == 0) continue;
      survivors.emplace_back(it->second.value, ind);
    }
    std::sort(survivors.begin(), survivors.end());
    survivors.erase(std::unique(survivors.begin(), survivors.end()), survivors.end());

    std::vector<MutantSet> next;
    for (std::size_t i = 0; i < params.elitism && i < survivors.size() && next.size() < params.population; ++i)
      next.push_back(survivors[i].second);
    auto tournament = [&]() -> const MutantSet& {
      std::size_t best = pick(survivors.size());
      for (std::size_t k = 1; k < params.tournament; ++k) best = std::min(best, pick(survivors.size()));
      return survivors[best].second;
    };
    while (next.size() < params.population) {
      if (survivors.empty()) {
        next.push_back(randomPair());
        continue;
      }
      MutantSet child = tournament();
      if (chance(params.crossoverRate)) child = crossover(child, tournament());
      if (chance(params.mutationRate)) child = mutate(std::move(child));
      next.push_back(std::move(child));
    }
    population.swap(next);
  }
  return run.timeline;
}

Timeline prioritizedSearch(const MetaProgram& meta, const std::vector<TestCase>& tests,
                           const PriorityWeights& weights, const Bounds& bounds,
                           const Budget& budget, Batching batching, const SearchOptions& options) {
  if (bounds.maxOrder < 2) throw Error("maxOrder must be at least 2");
  if (bounds.maxUnits > bounds.maxFunctions) throw Error("maxUnits must not exceed maxFunctions");
  Evaluator ev(meta, tests, options.stepBound);
  FomResults fr = ev.evaluateFoms();
  Run run("pri", budget, options);
  run.timeline.fomExecutions = fr.evaluations;
  std::vector<Fom> killed = killedFoms(meta, fr);
  std::set<MutantSet> known;

  std::vector<std::function<bool(const Fom&)>> batches;
  if (batching == Batching::PerUnit) {
    for (const Unit& u : meta.base.units) {
      batches.emplace_back([name = u.name](const Fom& f) { return f.location.unitName == name; });
    }
  } else {
    batches.emplace_back();
  }

  using Entry = std::pair<Rational, std::size_t>;
  for (const auto& leader : batches) {
    std::vector<MutantSet> cands = enumerateCandidates(killed, bounds, leader);
    if (cands.empty()) continue;
    if (!run.allows()) {
      run.timeline.budgetExhausted = true;
      break;
    }
    std::vector<Rational> pen(cands.size());
    std::vector<bool> done(cands.size(), false);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      pen[i] = penalty(cands[i], fr, known, weights);
      queue.emplace(pen[i], i);
    }
    Run batchRun("", bounds.perBatch, options);
    while (!queue.empty()) {
      auto [p, i] = queue.top();
      if (done[i] || p != pen[i]) {
        queue.pop();
        continue;
      }
      if (!run.allows() || !batchRun.allows()) {
        run.timeline.budgetExhausted = true;
        break;
      }
      queue.pop();
      done[i] = true;
      TestSet kills = ev.evaluate(cands[i]);
      run.counted();
      batchRun.counted();
      Verdict v = classify(kills, constituentKills(fr, cands[i]));
      if (!v.isSshom()) continue;
      run.record(cands[i], v);
      known.insert(cands[i]);
      if (cands[i].size() >= bounds.maxOrder) continue;
      // Only supersets-by-one of the new find can change penalty.
      for (const Fom& f : killed) {
        if (std::binary_search(cands[i].begin(), cands[i].end(), f.id)) continue;
        MutantSet sup = cands[i];
        sup.insert(std::upper_bound(sup.begin(), sup.end(), f.id), f.id);
        auto it = std::lower_bound(cands.begin(), cands.end(), sup, bySizeThenIds);
        if (it == cands.end() || *it != sup) continue;
        auto j = static_cast<std::size_t>(it - cands.begin());
        if (done[j]) continue;
        Rational np = penalty(sup, fr, known, weights);
        if (np != pen[j]) {
          pen[j] = np;
          queue.emplace(np, j);
        }
      }
    }
  }
  return run.timeline;
}

}  // namespace sshom
