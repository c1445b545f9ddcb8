#include <algorithm>

#include "sshom/toylang.h"

namespace sshom {

namespace {

struct Abort {
  RunStatus status;
};

class Interpreter {
 public:
  Interpreter(const Program& p, const RunOptions& o) : p_(p), o_(o) {}

  std::optional<std::int64_t> call(const Function& f, std::span<const std::int64_t> args) {
    std::vector<std::int64_t> frame(f.numSlots, 0);
    std::copy(args.begin(), args.end(), frame.begin());
    std::int64_t ret = 0;
    try {
      execBlock(f.body, frame, ret);
    } catch (const Abort&) {
      return std::nullopt;
    }
    return ret;
  }

  TestOutcome runTest(const TestCase& t) {
    std::vector<std::int64_t> frame(t.numSlots, 0);
    RunStatus status = RunStatus::Pass;
    try {
      std::int64_t ret = 0;
      execBlock(t.body, frame, ret);
    } catch (const Abort& a) {
      status = a.status;
    }
    return TestOutcome{status, steps_};
  }

 private:
  void tick() {
    if (++steps_ >= o_.stepBound) throw Abort{RunStatus::StepBoundExceeded};
  }

  BinaryOp effectiveOp(const Expr& e) const {
    if (e.site >= 0) {
      if (o_.coveredSites) (*o_.coveredSites)[e.site] = true;
      if (o_.overrides) {
        for (const auto& [site, op] : *o_.overrides) {
          if (site == e.site) return op;
        }
      }
    }
    return e.binary;
  }

  // Returns true when a return statement executed.
  bool execBlock(const std::vector<Stmt>& body, std::vector<std::int64_t>& frame,
                 std::int64_t& ret) {
    for (const Stmt& s : body) {
      if (exec(s, frame, ret)) return true;
    }
    return false;
  }

  bool exec(const Stmt& s, std::vector<std::int64_t>& frame, std::int64_t& ret) {
    tick();
    switch (s.kind) {
      case Stmt::Kind::VarDecl:
      case Stmt::Kind::Assign:
        frame[s.slot] = eval(s.expr, frame);
        return false;
      case Stmt::Kind::If:
        if (eval(s.expr, frame)) return execBlock(s.body, frame, ret);
        return execBlock(s.elseBody, frame, ret);
      case Stmt::Kind::While:
        while (true) {
          tick();
          if (!eval(s.expr, frame)) return false;
          if (execBlock(s.body, frame, ret)) return true;
        }
      case Stmt::Kind::Return:
        ret = eval(s.expr, frame);
        return true;
      case Stmt::Kind::Assert:
        if (!eval(s.expr, frame)) throw Abort{RunStatus::Fail};
        return false;
      case Stmt::Kind::ExprStmt:
        eval(s.expr, frame);
        return false;
    }
    return false;
  }

  std::int64_t eval(const Expr& e, std::vector<std::int64_t>& frame) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
      case Expr::Kind::BoolLit:
        return e.value;
      case Expr::Kind::Var:
        return frame[e.slot];
      case Expr::Kind::Unary: {
        std::int64_t v = eval(e.operands[0], frame);
        if (e.unary == UnaryOp::Not) return v ? 0 : 1;
        return static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(v));
      }
      case Expr::Kind::Binary: {
        BinaryOp op = effectiveOp(e);
        std::int64_t lhs = eval(e.operands[0], frame);
        if (op == BinaryOp::And) return lhs ? (eval(e.operands[1], frame) != 0) : 0;
        if (op == BinaryOp::Or) return lhs ? 1 : (eval(e.operands[1], frame) != 0);
        std::int64_t rhs = eval(e.operands[1], frame);
        auto v = applyBinary(op, lhs, rhs);
        if (!v) throw Abort{RunStatus::RuntimeError};
        return *v;
      }
      case Expr::Kind::Call: {
        const Function& f = p_.functions[e.callee];
        std::vector<std::int64_t> callee(f.numSlots, 0);
        for (std::size_t i = 0; i < e.operands.size(); ++i) callee[i] = eval(e.operands[i], frame);
        if (depth_ >= kMaxCallDepth) throw Abort{RunStatus::RuntimeError};
        ++depth_;
        std::int64_t ret = 0;
        execBlock(f.body, callee, ret);
        --depth_;
        return ret;
      }
    }
    return 0;
  }

  const Program& p_;
  const RunOptions& o_;
  std::uint64_t steps_ = 0;
  int depth_ = 0;
};

}  // namespace

TestOutcome run(const Program& program, const TestCase& test, const RunOptions& options) {
  return Interpreter(program, options).runTest(test);
}

TestOutcome run(const Program& program, const TestCase& test, std::uint64_t stepBound) {
  RunOptions o;
  o.stepBound = stepBound;
  return run(program, test, o);
}

std::optional<std::int64_t> callFunction(const Program& program, std::string_view name,
                                         std::span<const std::int64_t> args,
                                         std::uint64_t stepBound) {
  int index = program.findFunction(name);
  if (index < 0) throw ResolutionError("unknown function '" + std::string(name) + "'");
  const Function& f = program.functions[index];
  if (args.size() != f.params.size())
    throw ResolutionError("function '" + f.name + "' takes " + std::to_string(f.params.size()) +
                          " arguments");
  RunOptions o;
  o.stepBound = stepBound;
  return Interpreter(program, o).call(f, args);
}

Coverage coverage(const Program& program, const TestCase& test, std::uint64_t stepBound) {
  std::vector<bool> covered(program.sites.size(), false);
  RunOptions o;
  o.stepBound = stepBound;
  o.coveredSites = &covered;
  Coverage c;
  c.status = run(program, test, o).status;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) continue;
    c.sites.push_back(static_cast<int>(i));
    c.locations.insert(program.location(static_cast<int>(i)));
  }
  return c;
}

}  // namespace sshom
