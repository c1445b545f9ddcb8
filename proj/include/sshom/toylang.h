#ifndef SSHOM_TOYLANG_H_
#define SSHOM_TOYLANG_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sshom/common.h"

namespace sshom {

enum class Type { Int, Bool };

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Gt, Le, Ge,
  And, Or,
};

enum class UnaryOp { Not, Neg };

enum class OperatorClass { Arithmetic, Relational, Logical };

OperatorClass operatorClass(BinaryOp op);
std::string_view token(BinaryOp op);
std::optional<BinaryOp> binaryOpFromToken(std::string_view tok);
std::string_view typeName(Type t);

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct Expr {
  enum class Kind { IntLit, BoolLit, Var, Unary, Binary, Call };

  Kind kind = Kind::IntLit;
  Type type = Type::Int;
  SourcePos pos;
  std::int64_t value = 0;  // literals
  std::string name;        // variable or callee name
  int slot = -1;           // resolved local slot
  int callee = -1;         // resolved function index
  UnaryOp unary = UnaryOp::Not;
  BinaryOp binary = BinaryOp::Add;
  int site = -1;  // program-wide mutable-site index, -1 if not mutable
  std::vector<Expr> operands;
};

struct Stmt {
  enum class Kind { VarDecl, Assign, If, While, Return, Assert, ExprStmt };

  Kind kind = Kind::ExprStmt;
  SourcePos pos;
  std::string name;  // declared / assigned variable
  std::optional<Type> declaredType;
  int slot = -1;
  Expr expr;  // value, condition, or asserted expression
  std::vector<Stmt> body;
  std::vector<Stmt> elseBody;
};

struct Param {
  std::string name;
  Type type = Type::Int;
};

struct Function {
  std::string name;
  int unit = -1;
  std::vector<Param> params;
  Type returnType = Type::Int;
  std::vector<Stmt> body;
  int numSlots = 0;
  std::vector<int> sites;  // program-wide site indices, by ordinal
};

struct Unit {
  std::string name;
  std::vector<int> functions;
};

struct TestCase {
  std::string id;
  std::vector<Stmt> body;
  int numSlots = 0;
};

// A mutable operator occurrence inside a function body.
struct Site {
  int function = -1;
  int ordinal = 0;  // index within the function, in source order
  BinaryOp op = BinaryOp::Add;
  Type operandType = Type::Int;
  SourcePos pos;
};

struct Location {
  std::string unitName;
  std::string functionName;
  int ordinal = 0;

  friend auto operator<=>(const Location&, const Location&) = default;
};

struct Program {
  std::vector<Unit> units;
  std::vector<Function> functions;
  std::vector<TestCase> tests;
  std::vector<Site> sites;
  std::string sourceDigest;

  Location location(int site) const;
  const TestCase& test(std::string_view id) const;
  int findFunction(std::string_view name) const;
};

// Throws SyntaxError, ResolutionError or TypeError.
Program parse(std::string_view source);

enum class RunStatus { Pass, Fail, RuntimeError, StepBoundExceeded };

std::string_view statusName(RunStatus s);

struct TestOutcome {
  RunStatus status = RunStatus::Pass;
  std::uint64_t stepsExecuted = 0;

  bool killed() const { return status != RunStatus::Pass; }
  friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

constexpr std::uint64_t kDefaultStepBound = 1'000'000;
constexpr int kMaxCallDepth = 256;

// Operator replacements applied on the fly by the concrete interpreter,
// equivalent to running an instantiated program.
using SiteOverrides = std::vector<std::pair<int, BinaryOp>>;

struct RunOptions {
  std::uint64_t stepBound = kDefaultStepBound;
  const SiteOverrides* overrides = nullptr;
  std::vector<bool>* coveredSites = nullptr;  // sized to program.sites
};

TestOutcome run(const Program& program, const TestCase& test, const RunOptions& options);
TestOutcome run(const Program& program, const TestCase& test,
                std::uint64_t stepBound = kDefaultStepBound);

// Calls a function directly with concrete arguments. Returns nullopt when the
// call hits a runtime error or the step bound. Throws ResolutionError for an
// unknown function or a wrong argument count.
std::optional<std::int64_t> callFunction(const Program& program, std::string_view name,
                                         std::span<const std::int64_t> args,
                                         std::uint64_t stepBound = kDefaultStepBound);

struct Coverage {
  std::set<Location> locations;
  std::vector<int> sites;  // sorted site indices
  RunStatus status = RunStatus::Pass;
};

Coverage coverage(const Program& program, const TestCase& test,
                  std::uint64_t stepBound = kDefaultStepBound);

// Evaluates a binary operator on already-evaluated operands. Returns nullopt
// on division or modulo by zero. Integer arithmetic wraps.
std::optional<std::int64_t> applyBinary(BinaryOp op, std::int64_t lhs, std::int64_t rhs);

// Source rendering (used for metaprogram dumps and diagnostics).
std::string render(const Program& program);
std::string render(const Expr& expr);

}  // namespace sshom

#endif  // SSHOM_TOYLANG_H_
