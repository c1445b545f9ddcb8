#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

#include "sshom/toylang.h"

namespace sshom {

namespace {

enum class Tok {
  Ident, Int, Punct, End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

std::string where(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* kTwoChar[] = {"==", "!=", "<=", ">=", "&&", "||", "->"};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      t.kind = Tok::Punct;
      bool two = false;
      if (i + 1 < src.size()) {
        std::string_view pair = src.substr(i, 2);
        for (const char* p : kTwoChar) {
          if (pair == p) two = true;
        }
      }
      std::size_t n = two ? 2 : 1;
      t.text = std::string(src.substr(i, n));
      if (!two && std::string_view("{}()[],;:=+-*/%<>!").find(c) == std::string_view::npos)
        throw SyntaxError("unexpected character '" + t.text + "'", line, col);
      advance(n);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

bool isKeyword(const std::string& s) {
  static const char* kWords[] = {"unit", "fn",     "test", "var",   "if",    "else",
                                 "while", "return", "assert", "true", "false", "int",
                                 "bool"};
  return std::any_of(std::begin(kWords), std::end(kWords), [&](const char* w) { return s == w; });
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program parseProgram() {
    Program p;
    if (peek().kind == Tok::End) throw error("empty program");
    while (peek().kind != Tok::End) {
      if (isWord("unit")) {
        parseUnit(p);
      } else if (isWord("fn")) {
        int u = implicitUnit(p);
        parseFunction(p, u);
      } else if (isWord("test")) {
        parseTest(p);
      } else {
        throw error("expected 'unit', 'fn' or 'test'");
      }
    }
    return p;
  }

 private:
  const Token& peek(int k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool isWord(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
  bool isPunct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }

  SyntaxError error(const std::string& msg) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    return SyntaxError(msg + ", found " + got, t.pos.line, t.pos.column);
  }

  void expectPunct(std::string_view p) {
    if (!isPunct(p)) throw error("expected '" + std::string(p) + "'");
    next();
  }
  void expectWord(std::string_view w) {
    if (!isWord(w)) throw error("expected '" + std::string(w) + "'");
    next();
  }
  Token expectIdent() {
    if (peek().kind != Tok::Ident || isKeyword(peek().text)) throw error("expected identifier");
    return next();
  }

  Type parseType() {
    if (isWord("int")) {
      next();
      return Type::Int;
    }
    if (isWord("bool")) {
      next();
      return Type::Bool;
    }
    throw error("expected type");
  }

  int implicitUnit(Program& p) {
    if (implicit_ < 0) {
      implicit_ = static_cast<int>(p.units.size());
      p.units.push_back(Unit{"main", {}});
    }
    return implicit_;
  }

  void parseUnit(Program& p) {
    expectWord("unit");
    Token name = expectIdent();
    int u = static_cast<int>(p.units.size());
    p.units.push_back(Unit{name.text, {}});
    expectPunct("{");
    while (!isPunct("}")) {
      if (!isWord("fn")) throw error("expected 'fn' or '}'");
      parseFunction(p, u);
    }
    expectPunct("}");
  }

  void parseFunction(Program& p, int unit) {
    expectWord("fn");
    Token name = expectIdent();
    Function f;
    f.name = name.text;
    f.unit = unit;
    expectPunct("(");
    if (!isPunct(")")) {
      while (true) {
        Token pn = expectIdent();
        expectPunct(":");
        f.params.push_back(Param{pn.text, parseType()});
        if (isPunct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expectPunct(")");
    expectPunct("->");
    f.returnType = parseType();
    f.body = parseBlock();
    p.units[unit].functions.push_back(static_cast<int>(p.functions.size()));
    positions_.push_back(name.pos);
    p.functions.push_back(std::move(f));
  }

  void parseTest(Program& p) {
    expectWord("test");
    Token id = expectIdent();
    TestCase t;
    t.id = id.text;
    t.body = parseBlock();
    testPositions_.push_back(id.pos);
    p.tests.push_back(std::move(t));
  }

 public:
  std::vector<SourcePos> positions_;
  std::vector<SourcePos> testPositions_;

 private:
  std::vector<Stmt> parseBlock() {
    expectPunct("{");
    std::vector<Stmt> out;
    while (!isPunct("}")) {
      if (peek().kind == Tok::End) throw error("expected '}'");
      out.push_back(parseStmt());
    }
    expectPunct("}");
    return out;
  }

  Stmt parseIf() {
    Stmt s;
    s.kind = Stmt::Kind::If;
    s.pos = next().pos;
    expectPunct("(");
    s.expr = parseExpr();
    expectPunct(")");
    s.body = parseBlock();
    if (isWord("else")) {
      next();
      if (isWord("if")) {
        s.elseBody.push_back(parseIf());
      } else {
        s.elseBody = parseBlock();
      }
    }
    return s;
  }

  Stmt parseStmt() {
    Stmt s;
    s.pos = peek().pos;
    if (isWord("var")) {
      next();
      s.kind = Stmt::Kind::VarDecl;
      s.name = expectIdent().text;
      if (isPunct(":")) {
        next();
        s.declaredType = parseType();
      }
      expectPunct("=");
      s.expr = parseExpr();
      expectPunct(";");
      return s;
    }
    if (isWord("if")) return parseIf();
    if (isWord("while")) {
      next();
      s.kind = Stmt::Kind::While;
      expectPunct("(");
      s.expr = parseExpr();
      expectPunct(")");
      s.body = parseBlock();
      return s;
    }
    if (isWord("return")) {
      next();
      s.kind = Stmt::Kind::Return;
      s.expr = parseExpr();
      expectPunct(";");
      return s;
    }
    if (isWord("assert")) {
      next();
      s.kind = Stmt::Kind::Assert;
      s.expr = parseExpr();
      expectPunct(";");
      return s;
    }
    if (peek().kind == Tok::Ident && !isKeyword(peek().text) && peek(1).kind == Tok::Punct &&
        peek(1).text == "=") {
      s.kind = Stmt::Kind::Assign;
      s.name = next().text;
      next();
      s.expr = parseExpr();
      expectPunct(";");
      return s;
    }
    s.kind = Stmt::Kind::ExprStmt;
    s.expr = parseExpr();
    expectPunct(";");
    return s;
  }

  using Level = std::vector<std::string_view>;

  Expr parseExpr() { return parseBinary(0); }

  Expr parseBinary(int level) {
    static const std::vector<Level> kLevels = {
        {"||"}, {"&&"}, {"==", "!="}, {"<", ">", "<=", ">="}, {"+", "-"}, {"*", "/", "%"}};
    if (level == static_cast<int>(kLevels.size())) return parseUnary();
    Expr lhs = parseBinary(level + 1);
    while (peek().kind == Tok::Punct &&
           std::find(kLevels[level].begin(), kLevels[level].end(), peek().text) !=
               kLevels[level].end()) {
      Token op = next();
      Expr rhs = parseBinary(level + 1);
      Expr e;
      e.kind = Expr::Kind::Binary;
      e.pos = op.pos;
      e.binary = *binaryOpFromToken(op.text);
      e.operands.push_back(std::move(lhs));
      e.operands.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parseUnary() {
    if (isPunct("!") || isPunct("-")) {
      Token op = next();
      Expr e;
      e.kind = Expr::Kind::Unary;
      e.pos = op.pos;
      e.unary = op.text == "!" ? UnaryOp::Not : UnaryOp::Neg;
      e.operands.push_back(parseUnary());
      return e;
    }
    return parsePrimary();
  }

  Expr parsePrimary() {
    Expr e;
    e.pos = peek().pos;
    if (peek().kind == Tok::Int) {
      Token t = next();
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() ||
          v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        throw SyntaxError("integer literal out of range", t.pos.line, t.pos.column);
      e.kind = Expr::Kind::IntLit;
      e.value = static_cast<std::int64_t>(v);
      return e;
    }
    if (isWord("true") || isWord("false")) {
      e.kind = Expr::Kind::BoolLit;
      e.type = Type::Bool;
      e.value = next().text == "true" ? 1 : 0;
      return e;
    }
    if (isPunct("(")) {
      next();
      Expr inner = parseExpr();
      expectPunct(")");
      return inner;
    }
    Token id = expectIdent();
    e.name = id.text;
    if (isPunct("(")) {
      next();
      e.kind = Expr::Kind::Call;
      if (!isPunct(")")) {
        while (true) {
          e.operands.push_back(parseExpr());
          if (isPunct(",")) {
            next();
            continue;
          }
          break;
        }
      }
      expectPunct(")");
      return e;
    }
    e.kind = Expr::Kind::Var;
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int implicit_ = -1;
};

// Name resolution, type checking, slot and site assignment.
class Checker {
 public:
  Checker(Program& p, const Parser& parser) : p_(p), parser_(parser) {}

  void check() {
    std::unordered_map<std::string, int> units;
    for (const Unit& u : p_.units) {
      if (!units.emplace(u.name, 0).second)
        throw ResolutionError("duplicate unit '" + u.name + "'");
    }
    for (std::size_t i = 0; i < p_.functions.size(); ++i) {
      if (!fnIndex_.emplace(p_.functions[i].name, static_cast<int>(i)).second)
        throw ResolutionError(where(parser_.positions_[i]) + ": duplicate function '" +
                              p_.functions[i].name + "'");
    }
    std::unordered_map<std::string, int> tests;
    for (std::size_t i = 0; i < p_.tests.size(); ++i) {
      if (!tests.emplace(p_.tests[i].id, 0).second)
        throw ResolutionError(where(parser_.testPositions_[i]) + ": duplicate test '" +
                              p_.tests[i].id + "'");
    }
    for (std::size_t i = 0; i < p_.functions.size(); ++i) checkFunction(static_cast<int>(i));
    for (std::size_t i = 0; i < p_.tests.size(); ++i) checkTest(p_.tests[i], parser_.testPositions_[i]);
  }

 private:
  struct Scope {
    std::vector<std::unordered_map<std::string, std::pair<int, Type>>> frames;
    int slots = 0;
  };

  void checkFunction(int fi) {
    Function& f = p_.functions[fi];
    Scope scope;
    scope.frames.emplace_back();
    for (const Param& prm : f.params) {
      if (scope.frames.back().count(prm.name))
        throw ResolutionError(where(parser_.positions_[fi]) + ": duplicate parameter '" +
                              prm.name + "' in '" + f.name + "'");
      scope.frames.back()[prm.name] = {scope.slots++, prm.type};
    }
    inTest_ = false;
    returnType_ = f.returnType;
    mutable_.clear();
    checkBlock(f.body, scope);
    f.numSlots = scope.slots;
    if (!returns(f.body))
      throw TypeError(where(parser_.positions_[fi]) + ": not all paths of '" + f.name +
                      "' return a value");
    std::sort(mutable_.begin(), mutable_.end(), [](const Expr* a, const Expr* b) {
      return std::pair(a->pos.line, a->pos.column) < std::pair(b->pos.line, b->pos.column);
    });
    for (std::size_t k = 0; k < mutable_.size(); ++k) {
      Expr* e = mutable_[k];
      e->site = static_cast<int>(p_.sites.size());
      f.sites.push_back(e->site);
      p_.sites.push_back(Site{fi, static_cast<int>(k), e->binary, e->operands[0].type, e->pos});
    }
  }

  void checkTest(TestCase& t, SourcePos pos) {
    Scope scope;
    scope.frames.emplace_back();
    inTest_ = true;
    asserts_ = 0;
    mutable_.clear();
    checkBlock(t.body, scope);
    t.numSlots = scope.slots;
    if (asserts_ == 0)
      throw TypeError(where(pos) + ": test '" + t.id + "' has no assert");
    // Expressions in tests are never mutated.
    for (Expr* e : mutable_) e->site = -1;
  }

  static bool returns(const std::vector<Stmt>& body) {
    for (const Stmt& s : body) {
      if (s.kind == Stmt::Kind::Return) return true;
      if (s.kind == Stmt::Kind::If && !s.elseBody.empty() && returns(s.body) &&
          returns(s.elseBody))
        return true;
    }
    return false;
  }

  const std::pair<int, Type>* lookup(const Scope& scope, const std::string& name) const {
    for (auto it = scope.frames.rbegin(); it != scope.frames.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }

  void checkBlock(std::vector<Stmt>& body, Scope& scope) {
    scope.frames.emplace_back();
    for (Stmt& s : body) checkStmt(s, scope);
    scope.frames.pop_back();
  }

  void expectType(const Expr& e, Type t, const char* what) {
    if (e.type != t)
      throw TypeError(where(e.pos) + ": " + what + " must be " + std::string(typeName(t)) +
                      ", got " + std::string(typeName(e.type)));
  }

  void checkStmt(Stmt& s, Scope& scope) {
    switch (s.kind) {
      case Stmt::Kind::VarDecl: {
        checkExpr(s.expr, scope);
        if (s.declaredType) expectType(s.expr, *s.declaredType, "initializer");
        if (lookup(scope, s.name))
          throw ResolutionError(where(s.pos) + ": variable '" + s.name + "' already defined");
        s.slot = scope.slots++;
        scope.frames.back()[s.name] = {s.slot, s.expr.type};
        break;
      }
      case Stmt::Kind::Assign: {
        const auto* v = lookup(scope, s.name);
        if (!v) throw ResolutionError(where(s.pos) + ": unknown variable '" + s.name + "'");
        checkExpr(s.expr, scope);
        expectType(s.expr, v->second, "assigned value");
        s.slot = v->first;
        break;
      }
      case Stmt::Kind::If:
        checkExpr(s.expr, scope);
        expectType(s.expr, Type::Bool, "condition");
        checkBlock(s.body, scope);
        checkBlock(s.elseBody, scope);
        break;
      case Stmt::Kind::While:
        checkExpr(s.expr, scope);
        expectType(s.expr, Type::Bool, "condition");
        checkBlock(s.body, scope);
        break;
      case Stmt::Kind::Return:
        if (inTest_) throw TypeError(where(s.pos) + ": return outside a function");
        checkExpr(s.expr, scope);
        expectType(s.expr, returnType_, "returned value");
        break;
      case Stmt::Kind::Assert:
        if (!inTest_) throw TypeError(where(s.pos) + ": assert outside a test");
        checkExpr(s.expr, scope);
        expectType(s.expr, Type::Bool, "asserted expression");
        ++asserts_;
        break;
      case Stmt::Kind::ExprStmt:
        checkExpr(s.expr, scope);
        break;
    }
  }

  void checkExpr(Expr& e, Scope& scope) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        e.type = Type::Int;
        break;
      case Expr::Kind::BoolLit:
        e.type = Type::Bool;
        break;
      case Expr::Kind::Var: {
        const auto* v = lookup(scope, e.name);
        if (!v) throw ResolutionError(where(e.pos) + ": unknown variable '" + e.name + "'");
        e.slot = v->first;
        e.type = v->second;
        break;
      }
      case Expr::Kind::Unary:
        checkExpr(e.operands[0], scope);
        if (e.unary == UnaryOp::Not) {
          expectType(e.operands[0], Type::Bool, "operand of '!'");
          e.type = Type::Bool;
        } else {
          expectType(e.operands[0], Type::Int, "operand of '-'");
          e.type = Type::Int;
        }
        break;
      case Expr::Kind::Binary: {
        checkExpr(e.operands[0], scope);
        checkExpr(e.operands[1], scope);
        switch (operatorClass(e.binary)) {
          case OperatorClass::Arithmetic:
            expectType(e.operands[0], Type::Int, "arithmetic operand");
            expectType(e.operands[1], Type::Int, "arithmetic operand");
            e.type = Type::Int;
            break;
          case OperatorClass::Relational:
            if (e.binary == BinaryOp::Eq || e.binary == BinaryOp::Ne) {
              expectType(e.operands[1], e.operands[0].type, "compared operand");
            } else {
              expectType(e.operands[0], Type::Int, "ordered operand");
              expectType(e.operands[1], Type::Int, "ordered operand");
            }
            e.type = Type::Bool;
            break;
          case OperatorClass::Logical:
            expectType(e.operands[0], Type::Bool, "logical operand");
            expectType(e.operands[1], Type::Bool, "logical operand");
            e.type = Type::Bool;
            break;
        }
        mutable_.push_back(&e);
        break;
      }
      case Expr::Kind::Call: {
        auto it = fnIndex_.find(e.name);
        if (it == fnIndex_.end())
          throw ResolutionError(where(e.pos) + ": unknown function '" + e.name + "'");
        const Function& callee = p_.functions[it->second];
        if (callee.params.size() != e.operands.size())
          throw TypeError(where(e.pos) + ": '" + e.name + "' expects " +
                          std::to_string(callee.params.size()) + " arguments");
        for (std::size_t k = 0; k < e.operands.size(); ++k) {
          checkExpr(e.operands[k], scope);
          expectType(e.operands[k], callee.params[k].type, "argument");
        }
        e.callee = it->second;
        e.type = callee.returnType;
        break;
      }
    }
  }

  Program& p_;
  const Parser& parser_;
  std::unordered_map<std::string, int> fnIndex_;
  bool inTest_ = false;
  Type returnType_ = Type::Int;
  int asserts_ = 0;
  std::vector<Expr*> mutable_;
};

}  // namespace

Program parse(std::string_view source) {
  Parser parser(source);
  Program p = parser.parseProgram();
  Checker(p, parser).check();
  p.sourceDigest = contentDigest(source);
  return p;
}

}  // namespace sshom
