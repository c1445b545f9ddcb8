#include <sstream>

#include "sshom/toylang.h"

namespace sshom {

namespace {

struct OpInfo {
  BinaryOp op;
  std::string_view token;
  OperatorClass cls;
};

constexpr OpInfo kOps[] = {
    {BinaryOp::Add, "+", OperatorClass::Arithmetic},
    {BinaryOp::Sub, "-", OperatorClass::Arithmetic},
    {BinaryOp::Mul, "*", OperatorClass::Arithmetic},
    {BinaryOp::Div, "/", OperatorClass::Arithmetic},
    {BinaryOp::Mod, "%", OperatorClass::Arithmetic},
    {BinaryOp::Eq, "==", OperatorClass::Relational},
    {BinaryOp::Ne, "!=", OperatorClass::Relational},
    {BinaryOp::Lt, "<", OperatorClass::Relational},
    {BinaryOp::Gt, ">", OperatorClass::Relational},
    {BinaryOp::Le, "<=", OperatorClass::Relational},
    {BinaryOp::Ge, ">=", OperatorClass::Relational},
    {BinaryOp::And, "&&", OperatorClass::Logical},
    {BinaryOp::Or, "||", OperatorClass::Logical},
};

const OpInfo& info(BinaryOp op) { return kOps[static_cast<int>(op)]; }

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Gt:
    case BinaryOp::Le:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    default: return 6;
  }
}

void renderExpr(std::ostream& os, const Expr& e, int parentPrec, bool rightSide) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      os << e.value;
      break;
    case Expr::Kind::BoolLit:
      os << (e.value ? "true" : "false");
      break;
    case Expr::Kind::Var:
      os << e.name;
      break;
    case Expr::Kind::Unary:
      os << (e.unary == UnaryOp::Not ? "!" : "-");
      renderExpr(os, e.operands[0], 7, false);
      break;
    case Expr::Kind::Binary: {
      int prec = precedence(e.binary);
      bool parens = prec < parentPrec || (prec == parentPrec && rightSide);
      if (parens) os << "(";
      renderExpr(os, e.operands[0], prec, false);
      os << " " << token(e.binary) << " ";
      renderExpr(os, e.operands[1], prec, true);
      if (parens) os << ")";
      break;
    }
    case Expr::Kind::Call:
      os << e.name << "(";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) os << ", ";
        renderExpr(os, e.operands[i], 0, false);
      }
      os << ")";
      break;
  }
}

void renderBlock(std::ostream& os, const std::vector<Stmt>& body, int indent);

void renderStmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent * 2, ' ');
  switch (s.kind) {
    case Stmt::Kind::VarDecl:
      os << pad << "var " << s.name;
      if (s.declaredType) os << ": " << typeName(*s.declaredType);
      os << " = " << render(s.expr) << ";\n";
      break;
    case Stmt::Kind::Assign:
      os << pad << s.name << " = " << render(s.expr) << ";\n";
      break;
    case Stmt::Kind::If:
      os << pad << "if (" << render(s.expr) << ") {\n";
      renderBlock(os, s.body, indent + 1);
      os << pad << "}";
      if (!s.elseBody.empty()) {
        os << " else {\n";
        renderBlock(os, s.elseBody, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case Stmt::Kind::While:
      os << pad << "while (" << render(s.expr) << ") {\n";
      renderBlock(os, s.body, indent + 1);
      os << pad << "}\n";
      break;
    case Stmt::Kind::Return:
      os << pad << "return " << render(s.expr) << ";\n";
      break;
    case Stmt::Kind::Assert:
      os << pad << "assert " << render(s.expr) << ";\n";
      break;
    case Stmt::Kind::ExprStmt:
      os << pad << render(s.expr) << ";\n";
      break;
  }
}

void renderBlock(std::ostream& os, const std::vector<Stmt>& body, int indent) {
  for (const Stmt& s : body) renderStmt(os, s, indent);
}

}  // namespace

OperatorClass operatorClass(BinaryOp op) { return info(op).cls; }

std::string_view token(BinaryOp op) { return info(op).token; }

std::optional<BinaryOp> binaryOpFromToken(std::string_view tok) {
  for (const OpInfo& i : kOps) {
    if (i.token == tok) return i.op;
  }
  return std::nullopt;
}

std::string_view typeName(Type t) { return t == Type::Int ? "int" : "bool"; }

std::string_view statusName(RunStatus s) {
  switch (s) {
    case RunStatus::Pass: return "Pass";
    case RunStatus::Fail: return "Fail";
    case RunStatus::RuntimeError: return "RuntimeError";
    case RunStatus::StepBoundExceeded: return "StepBoundExceeded";
  }
  return "?";
}

std::optional<std::int64_t> applyBinary(BinaryOp op, std::int64_t lhs, std::int64_t rhs) {
  auto ul = static_cast<std::uint64_t>(lhs);
  auto ur = static_cast<std::uint64_t>(rhs);
  switch (op) {
    case BinaryOp::Add: return static_cast<std::int64_t>(ul + ur);
    case BinaryOp::Sub: return static_cast<std::int64_t>(ul - ur);
    case BinaryOp::Mul: return static_cast<std::int64_t>(ul * ur);
    case BinaryOp::Div:
      if (rhs == 0) return std::nullopt;
      if (rhs == -1) return static_cast<std::int64_t>(0ULL - ul);
      return lhs / rhs;
    case BinaryOp::Mod:
      if (rhs == 0) return std::nullopt;
      if (rhs == -1) return 0;
      return lhs % rhs;
    case BinaryOp::Eq: return lhs == rhs;
    case BinaryOp::Ne: return lhs != rhs;
    case BinaryOp::Lt: return lhs < rhs;
    case BinaryOp::Gt: return lhs > rhs;
    case BinaryOp::Le: return lhs <= rhs;
    case BinaryOp::Ge: return lhs >= rhs;
    case BinaryOp::And: return (lhs != 0) && (rhs != 0);
    case BinaryOp::Or: return (lhs != 0) || (rhs != 0);
  }
  return std::nullopt;
}

Location Program::location(int site) const {
  const Site& s = sites.at(site);
  const Function& f = functions[s.function];
  return Location{units[f.unit].name, f.name, s.ordinal};
}

const TestCase& Program::test(std::string_view id) const {
  for (const TestCase& t : tests) {
    if (t.id == id) return t;
  }
  throw ResolutionError("unknown test '" + std::string(id) + "'");
}

int Program::findFunction(std::string_view name) const {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string render(const Expr& expr) {
  std::ostringstream os;
  renderExpr(os, expr, 0, false);
  return os.str();
}

std::string render(const Program& program) {
  std::ostringstream os;
  for (const Unit& u : program.units) {
    os << "unit " << u.name << " {\n";
    for (int fi : u.functions) {
      const Function& f = program.functions[fi];
      os << "  fn " << f.name << "(";
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i) os << ", ";
        os << f.params[i].name << ": " << typeName(f.params[i].type);
      }
      os << ") -> " << typeName(f.returnType) << " {\n";
      renderBlock(os, f.body, 2);
      os << "  }\n";
    }
    os << "}\n";
  }
  for (const TestCase& t : program.tests) {
    os << "test " << t.id << " {\n";
    renderBlock(os, t.body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace sshom
