#include "sshom/varex.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace sshom {

PartitionExplosion::PartitionExplosion(const std::string& what, std::vector<std::string> hot)
    : Error(what), hot_(std::move(hot)) {}

Formula validityConstraint(FormulaStore& store, const std::vector<std::vector<MutantId>>& groups) {
  Formula valid = store.mkTrue();
  for (const auto& g : groups) {
    // "at most one": no two members together.
    Formula seen = store.mkFalse();
    for (MutantId m : g) {
      Formula v = store.mkVar(m);
      valid &= !(seen & v);
      seen |= v;
    }
  }
  return valid;
}

namespace {

class VarexInterpreter {
 public:
  VarexInterpreter(FormulaStore& s, const MetaProgram& meta, const VarexOptions& o)
      : s_(s), meta_(meta), o_(o) {
    const Program& p = meta.base;
    choices_.resize(p.sites.size());
    for (std::size_t site = 0; site < p.sites.size(); ++site) {
      // Nest g1 ? op1 : (g2 ? op2 : ... original).
      Formula none = s_.mkTrue();
      for (MutantId m : meta.choices[site]) {
        Formula g = s_.mkVar(m);
        choices_[site].emplace_back(none & g, meta.catalog.at(m).replacement);
        none &= !g;
      }
      choices_[site].emplace_back(none, p.sites[site].op);
    }
  }

  Formula runTest(const TestCase& t) {
    // Conflicting selections run along (the outer guard wins) and are only
    // cut away at the end; keeping the validity constraint out of every
    // intermediate context keeps the diagrams small.
    Formula all = s_.mkTrue();
    dead_ = s_.mkFalse();
    notDead_ = s_.mkTrue();
    steps_.clear();
    steps_.push_back({all, 0});
    Frame frame(t.numSlots, s_);
    execBlock(t.body, frame, all);
    return dead_ & validityConstraint(s_, meta_.exclusiveGroups());
  }

 private:
  struct Frame {
    Frame(int slots, FormulaStore& s)
        : slots(slots), returned(s.mkFalse()), notReturned(s.mkTrue()) {}
    std::vector<ConditionalValue> slots;
    Formula returned;
    Formula notReturned;
    ConditionalValue retval;
  };

  void add(ConditionalValue& cv, const Formula& c, std::int64_t v) {
    if (c.isFalse()) return;
    for (CondEntry& e : cv) {
      if (e.value == v) {
        e.cond |= c;
        return;
      }
    }
    cv.push_back({c, v});
    if (cv.size() > o_.partitionLimit) explode(cv);
  }

  [[noreturn]] void explode(const ConditionalValue& cv) {
    std::map<int, int> perSite;
    for (const CondEntry& e : cv) {
      for (MutantId m : support(e.cond)) ++perSite[meta_.siteOf[index(m)]];
    }
    std::vector<std::pair<int, int>> ranked(perSite.begin(), perSite.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> hot;
    for (std::size_t i = 0; i < ranked.size() && i < 10; ++i) {
      Location l = meta_.base.location(ranked[i].first);
      hot.push_back(l.unitName + "." + l.functionName + "#" + std::to_string(l.ordinal) + " (" +
                    std::to_string(ranked[i].second) + ")");
    }
    throw PartitionExplosion("conditional value exceeded " + std::to_string(o_.partitionLimit) +
                                 " alternatives",
                             std::move(hot));
  }

  void kill(const Formula& c) {
    if (c.isFalse()) return;
    dead_ |= c;
    notDead_ = !dead_;
    ConditionalValue kept;
    for (CondEntry& e : steps_) {
      Formula rest = e.cond & notDead_;
      if (!rest.isFalse()) kept.push_back({rest, e.value});
    }
    steps_.swap(kept);
  }

  void tick(const Formula& cur) {
    Formula notCur;
    bool haveNotCur = false;
    Formula overflow = s_.mkFalse();
    ConditionalValue next;
    for (const CondEntry& e : steps_) {
      Formula hit = e.cond & cur;
      if (hit.isFalse()) {
        add(next, e.cond, e.value);
        continue;
      }
      if (!(hit == e.cond)) {
        if (!haveNotCur) {
          notCur = !cur;
          haveNotCur = true;
        }
        add(next, e.cond & notCur, e.value);
      }
      auto bumped = static_cast<std::int64_t>(e.value + 1);
      if (static_cast<std::uint64_t>(bumped) >= o_.stepBound) {
        overflow |= hit;
      } else {
        add(next, hit, bumped);
      }
    }
    steps_.swap(next);
    kill(overflow);
  }

  void checkPartition(const ConditionalValue& cv, const Formula& ctx) const {
    if (!o_.checkInvariants) return;
    Formula cover = s_.mkFalse();
    for (std::size_t i = 0; i < cv.size(); ++i) {
      if (!(cover & cv[i].cond).isFalse()) throw Error("partition conditions overlap");
      for (std::size_t j = 0; j < i; ++j) {
        if (cv[i].value == cv[j].value) throw Error("partition values repeat");
      }
      cover |= cv[i].cond;
    }
    if (!(cover & !ctx).isFalse()) throw Error("partition escapes its context");
  }

  void assign(ConditionalValue& slot, ConditionalValue value, const Formula& cur) {
    if (!slot.empty()) {
      Formula outside = !cur;
      for (const CondEntry& e : slot) add(value, e.cond & outside, e.value);
    }
    slot = std::move(value);
  }

  void execBlock(const std::vector<Stmt>& body, Frame& frame, const Formula& ctx) {
    for (const Stmt& s : body) {
      Formula cur = ctx & frame.notReturned & notDead_;
      if (cur.isFalse()) return;
      exec(s, frame, cur);
    }
  }

  void exec(const Stmt& s, Frame& frame, Formula cur) {
    tick(cur);
    cur &= notDead_;
    if (cur.isFalse()) return;
    switch (s.kind) {
      case Stmt::Kind::VarDecl:
      case Stmt::Kind::Assign: {
        ConditionalValue v = eval(s.expr, frame, cur);
        assign(frame.slots[s.slot], std::move(v), cur);
        checkPartition(frame.slots[s.slot], s_.mkTrue());
        break;
      }
      case Stmt::Kind::If: {
        ConditionalValue c = eval(s.expr, frame, cur);
        checkPartition(c, cur);
        Formula yes = s_.mkFalse(), no = s_.mkFalse();
        for (const CondEntry& e : c) (e.value ? yes : no) |= e.cond;
        if (!yes.isFalse()) execBlock(s.body, frame, yes);
        if (!no.isFalse()) execBlock(s.elseBody, frame, no);
        break;
      }
      case Stmt::Kind::While: {
        Formula looping = cur;
        while (true) {
          Formula c = looping & frame.notReturned & notDead_;
          if (c.isFalse()) break;
          tick(c);
          c &= notDead_;
          if (c.isFalse()) break;
          ConditionalValue cond = eval(s.expr, frame, c);
          checkPartition(cond, c);
          Formula yes = s_.mkFalse();
          for (const CondEntry& e : cond) {
            if (e.value) yes |= e.cond;
          }
          if (yes.isFalse()) break;
          execBlock(s.body, frame, yes);
          looping = yes;
        }
        break;
      }
      case Stmt::Kind::Return: {
        ConditionalValue v = eval(s.expr, frame, cur);
        for (const CondEntry& e : v) add(frame.retval, e.cond, e.value);
        frame.returned |= cur;
        frame.notReturned = !frame.returned;
        break;
      }
      case Stmt::Kind::Assert: {
        ConditionalValue v = eval(s.expr, frame, cur);
        for (const CondEntry& e : v) {
          if (!e.value) kill(e.cond);
        }
        break;
      }
      case Stmt::Kind::ExprStmt:
        eval(s.expr, frame, cur);
        break;
    }
  }

  static Formula cover(FormulaStore& s, const ConditionalValue& cv) {
    Formula f = s.mkFalse();
    for (const CondEntry& e : cv) f |= e.cond;
    return f;
  }

  ConditionalValue eval(const Expr& e, Frame& frame, const Formula& cur) {
    ConditionalValue out;
    switch (e.kind) {
      case Expr::Kind::IntLit:
      case Expr::Kind::BoolLit:
        out.push_back({cur, e.value});
        return out;
      case Expr::Kind::Var:
        for (const CondEntry& x : frame.slots[e.slot]) {
          Formula c = x.cond & cur;
          if (!c.isFalse()) out.push_back({c, x.value});
        }
        return out;
      case Expr::Kind::Unary:
        for (const CondEntry& x : eval(e.operands[0], frame, cur)) {
          std::int64_t v = e.unary == UnaryOp::Not
                               ? (x.value ? 0 : 1)
                               : static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(x.value));
          add(out, x.cond, v);
        }
        return out;
      case Expr::Kind::Binary:
        if (e.binary == BinaryOp::And || e.binary == BinaryOp::Or) return evalLogical(e, frame, cur);
        return evalArithmetic(e, frame, cur);
      case Expr::Kind::Call:
        return evalCall(e, frame, cur);
    }
    return out;
  }

  const std::vector<std::pair<Formula, BinaryOp>>& choicesAt(const Expr& e) {
    static thread_local std::vector<std::pair<Formula, BinaryOp>> plain;
    if (e.site >= 0) return choices_[e.site];
    plain.assign(1, {s_.mkTrue(), e.binary});
    return plain;
  }

  ConditionalValue evalArithmetic(const Expr& e, Frame& frame, const Formula& cur) {
    ConditionalValue out;
    ConditionalValue lhs = eval(e.operands[0], frame, cur);
    if (lhs.empty()) return out;
    ConditionalValue rhs = eval(e.operands[1], frame, cover(s_, lhs));
    const auto& choices = choicesAt(e);
    for (const CondEntry& r : rhs) {
      for (const CondEntry& l : lhs) {
        Formula c = l.cond & r.cond;
        if (c.isFalse()) continue;
        for (const auto& [guard, op] : choices) {
          Formula cc = guard.isTrue() ? c : c & guard;
          if (cc.isFalse()) continue;
          auto v = applyBinary(op, l.value, r.value);
          if (v) {
            add(out, cc, *v);
          } else {
            kill(cc);
          }
        }
      }
    }
    return out;
  }

  ConditionalValue evalLogical(const Expr& e, Frame& frame, const Formula& cur) {
    ConditionalValue out;
    ConditionalValue lhs = eval(e.operands[0], frame, cur);
    Formula needRight = s_.mkFalse();
    const auto& choices = choicesAt(e);
    for (const CondEntry& l : lhs) {
      for (const auto& [guard, op] : choices) {
        Formula c = guard.isTrue() ? l.cond : l.cond & guard;
        if (c.isFalse()) continue;
        bool decided = op == BinaryOp::And ? l.value == 0 : l.value != 0;
        if (decided) {
          add(out, c, l.value != 0);
        } else {
          needRight |= c;
        }
      }
    }
    if (!needRight.isFalse()) {
      for (const CondEntry& r : eval(e.operands[1], frame, needRight)) add(out, r.cond, r.value != 0);
    }
    return out;
  }

  ConditionalValue evalCall(const Expr& e, Frame& frame, const Formula& cur) {
    const Function& f = meta_.base.functions[e.callee];
    std::vector<ConditionalValue> args;
    Formula ctx = cur;
    for (const Expr& a : e.operands) {
      args.push_back(eval(a, frame, ctx));
      ctx = cover(s_, args.back());
      if (ctx.isFalse()) return {};
    }
    if (depth_ >= kMaxCallDepth) {
      kill(ctx);
      return {};
    }
    Frame callee(f.numSlots, s_);
    for (std::size_t i = 0; i < args.size(); ++i) {
      for (const CondEntry& x : args[i]) {
        Formula c = x.cond & ctx;
        if (!c.isFalse()) callee.slots[i].push_back({c, x.value});
      }
    }
    ++depth_;
    execBlock(f.body, callee, ctx);
    --depth_;
    return std::move(callee.retval);
  }

  FormulaStore& s_;
  const MetaProgram& meta_;
  const VarexOptions& o_;
  std::vector<std::vector<std::pair<Formula, BinaryOp>>> choices_;
  Formula dead_;
  Formula notDead_;
  ConditionalValue steps_;
  int depth_ = 0;
};

}  // namespace

Formula vrun(FormulaStore& store, const MetaProgram& meta, const TestCase& test,
             const VarexOptions& options) {
  if (options.stepBound == 0) throw Error("step bound must be positive");
  if (store.universe() < meta.catalog.size())
    throw Error("formula store universe is smaller than the catalog");
  return VarexInterpreter(store, meta, options).runTest(test);
}

const Formula& KillReport::condition(const std::string& testId) const {
  for (const auto& [id, f] : perTest) {
    if (id == testId) return f;
  }
  throw ResolutionError("kill report has no test '" + testId + "'");
}

std::map<MutantId, TestSet> KillReport::fomKills() const {
  std::map<MutantId, TestSet> out;
  for (std::size_t i = 0; i < universeSize; ++i) {
    TestSet& kills = out[mutantAt(i)];
    for (const auto& [id, f] : perTest) {
      if (evalSingleton(f, mutantAt(i))) kills.insert(id);
    }
  }
  return out;
}

TestSet KillReport::killSetOf(const MutantSet& selection) const {
  TestSet out;
  for (const auto& [id, f] : perTest) {
    if (evalSelection(f, selection)) out.insert(id);
  }
  return out;
}

KillReport vrunSuite(const MetaProgram& meta, const std::vector<TestCase>& tests,
                     const VarexOptions& options, int jobs) {
  if (tests.empty()) throw Error("at least one test is required");
  const std::size_t n = meta.catalog.size();
  KillReport report;
  report.store = std::make_shared<FormulaStore>(n);
  report.universeDigest = meta.catalog.digest();
  report.universeSize = n;
  report.exclusiveGroups = meta.exclusiveGroups();

  // Each test runs in its own store; results are imported in suite order.
  struct Result {
    std::unique_ptr<FormulaStore> store;
    Formula f;
  };
  std::vector<Result> results(tests.size());
  auto work = [&](std::size_t i) {
    results[i].store = std::make_unique<FormulaStore>(n);
    results[i].f = vrun(*results[i].store, meta, tests[i], options);
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < tests.size(); ++i) {
      work(i);
      report.perTest.emplace_back(tests[i].id, report.store->import(results[i].f));
      results[i] = {};
    }
    return report;
  }
  std::atomic<std::size_t> nextIndex{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = nextIndex++; i < tests.size(); i = nextIndex++) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(failureMutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 0; i < tests.size(); ++i)
    report.perTest.emplace_back(tests[i].id, report.store->import(results[i].f));
  return report;
}

Formula oracleFailureCondition(FormulaStore& store, const MetaProgram& meta, const TestCase& test,
                               std::uint64_t stepBound, std::size_t limit) {
  const std::size_t n = meta.catalog.size();
  if (n > limit)
    throw OracleLimitExceeded("oracle limited to " + std::to_string(limit) + " mutants, catalog has " +
                              std::to_string(n));
  Formula result = store.mkFalse();
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    MutantSet selection;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) selection.push_back(mutantAt(i));
    }
    if (!meta.conflictFree(selection)) continue;
    Program mutant = instantiate(meta, selection);
    if (!run(mutant, mutant.test(test.id), stepBound).killed()) continue;
    Formula minterm = store.mkTrue();
    for (std::size_t i = 0; i < n; ++i) {
      Formula v = store.mkVar(mutantAt(i));
      minterm &= (mask >> i & 1) ? v : !v;
    }
    result |= minterm;
  }
  return result;
}

}  // namespace sshom
