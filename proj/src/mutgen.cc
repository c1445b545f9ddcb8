#include "sshom/mutgen.h"

#include <algorithm>
#include <map>
#include <sstream>

namespace sshom {

namespace {

constexpr BinaryOp kArithmetic[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                    BinaryOp::Mod};
constexpr BinaryOp kRelational[] = {BinaryOp::Eq, BinaryOp::Ne, BinaryOp::Lt,
                                    BinaryOp::Gt, BinaryOp::Le, BinaryOp::Ge};

std::vector<BinaryOp> replacements(const Site& site) {
  std::vector<BinaryOp> out;
  switch (operatorClass(site.op)) {
    case OperatorClass::Arithmetic:
      for (BinaryOp op : kArithmetic) {
        if (op != site.op) out.push_back(op);
      }
      break;
    case OperatorClass::Relational:
      if (site.operandType == Type::Bool) {
        out.push_back(site.op == BinaryOp::Eq ? BinaryOp::Ne : BinaryOp::Eq);
      } else {
        for (BinaryOp op : kRelational) {
          if (op != site.op) out.push_back(op);
        }
      }
      break;
    case OperatorClass::Logical:
      out.push_back(site.op == BinaryOp::And ? BinaryOp::Or : BinaryOp::And);
      break;
  }
  return out;
}

OperatorKind kindOf(BinaryOp op) {
  switch (operatorClass(op)) {
    case OperatorClass::Arithmetic: return OperatorKind::AOR;
    case OperatorClass::Relational: return OperatorKind::ROR;
    case OperatorClass::Logical: return OperatorKind::LCR;
  }
  return OperatorKind::AOR;
}

void rewrite(std::vector<Stmt>& body, const std::map<int, BinaryOp>& ops);

void rewrite(Expr& e, const std::map<int, BinaryOp>& ops) {
  if (e.kind == Expr::Kind::Binary && e.site >= 0) {
    auto it = ops.find(e.site);
    if (it != ops.end()) e.binary = it->second;
  }
  for (Expr& o : e.operands) rewrite(o, ops);
}

void rewrite(std::vector<Stmt>& body, const std::map<int, BinaryOp>& ops) {
  for (Stmt& s : body) {
    rewrite(s.expr, ops);
    rewrite(s.body, ops);
    rewrite(s.elseBody, ops);
  }
}

}  // namespace

std::string_view kindName(OperatorKind k) {
  switch (k) {
    case OperatorKind::AOR: return "AOR";
    case OperatorKind::ROR: return "ROR";
    case OperatorKind::LCR: return "LCR";
  }
  return "?";
}

OperatorKind kindFromName(std::string_view name) {
  if (name == "AOR") return OperatorKind::AOR;
  if (name == "ROR") return OperatorKind::ROR;
  if (name == "LCR") return OperatorKind::LCR;
  throw Error("unknown operator kind '" + std::string(name) + "'");
}

const Fom& MutantCatalog::at(MutantId m) const {
  if (index(m) >= mutants.size())
    throw UnknownMutant("mutant " + mutantName(m) + " is not in the catalog");
  return mutants[index(m)];
}

std::string MutantCatalog::digest() const {
  std::ostringstream os;
  os << programDigest << "\n";
  for (const Fom& f : mutants) {
    os << index(f.id) << ' ' << kindName(f.kind) << ' ' << f.location.unitName << ' '
       << f.location.functionName << ' ' << f.location.ordinal << ' ' << token(f.original) << ' '
       << token(f.replacement) << '\n';
  }
  return contentDigest(os.str());
}

MutantCatalog generateMutants(const Program& program) {
  MutantCatalog c;
  c.programDigest = program.sourceDigest;
  for (std::size_t s = 0; s < program.sites.size(); ++s) {
    const Site& site = program.sites[s];
    for (BinaryOp rep : replacements(site)) {
      Fom f;
      f.id = mutantAt(c.mutants.size());
      f.kind = kindOf(site.op);
      f.location = program.location(static_cast<int>(s));
      f.original = site.op;
      f.replacement = rep;
      c.mutants.push_back(f);
    }
  }
  return c;
}

MutantCatalog filterCatalog(const MutantCatalog& catalog, std::span<const MutantId> keep) {
  std::vector<MutantId> ids(keep.begin(), keep.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  MutantCatalog out;
  out.programDigest = catalog.programDigest;
  for (MutantId m : ids) {
    Fom f = catalog.at(m);
    f.id = mutantAt(out.mutants.size());
    out.mutants.push_back(f);
  }
  return out;
}

std::vector<std::vector<MutantId>> MetaProgram::exclusiveGroups() const {
  std::vector<std::vector<MutantId>> out;
  for (const auto& c : choices) {
    if (c.size() >= 2) out.push_back(c);
  }
  return out;
}

bool MetaProgram::conflictFree(const MutantSet& selection) const {
  std::vector<int> sites;
  for (MutantId m : selection) sites.push_back(siteOf.at(index(m)));
  std::sort(sites.begin(), sites.end());
  return std::adjacent_find(sites.begin(), sites.end()) == sites.end();
}

SiteOverrides MetaProgram::overridesFor(const MutantSet& selection) const {
  SiteOverrides out;
  for (MutantId m : selection) {
    const Fom& f = catalog.at(m);
    int site = siteOf[index(m)];
    for (const auto& [s, op] : out) {
      if (s == site)
        throw ConflictingSelection("mutants at " + f.location.functionName + "#" +
                                   std::to_string(f.location.ordinal) +
                                   " are mutually exclusive");
    }
    out.emplace_back(site, f.replacement);
  }
  return out;
}

MetaProgram weave(const Program& program, const MutantCatalog& catalog) {
  if (catalog.programDigest != program.sourceDigest)
    throw DigestMismatch("catalog digest " + catalog.programDigest +
                         " does not match program digest " + program.sourceDigest);
  std::map<Location, int> siteByLocation;
  for (std::size_t s = 0; s < program.sites.size(); ++s)
    siteByLocation.emplace(program.location(static_cast<int>(s)), static_cast<int>(s));

  MetaProgram meta;
  meta.base = program;
  meta.catalog = catalog;
  meta.choices.assign(program.sites.size(), {});
  for (std::size_t i = 0; i < catalog.mutants.size(); ++i) {
    const Fom& f = catalog.mutants[i];
    auto it = siteByLocation.find(f.location);
    if (it == siteByLocation.end() || program.sites[it->second].op != f.original ||
        index(f.id) != i)
      throw DigestMismatch("catalog entry " + mutantName(f.id) + " does not match the program");
    meta.choices[it->second].push_back(f.id);
    meta.siteOf.push_back(it->second);
  }
  return meta;
}

Program instantiate(const MetaProgram& meta, const MutantSet& selection) {
  SiteOverrides ov = meta.overridesFor(selection);
  std::map<int, BinaryOp> ops(ov.begin(), ov.end());
  Program p = meta.base;
  for (Function& f : p.functions) rewrite(f.body, ops);
  for (auto& [site, op] : ops) p.sites[site].op = op;
  return p;
}

namespace {

void renderMetaBlock(std::ostream& os, const MetaProgram& meta, const std::vector<Stmt>& body,
                     int indent);

std::string renderMetaExpr(const MetaProgram& meta, const Expr& e) {
  auto sub = [&](const Expr& x) {
    std::string s = renderMetaExpr(meta, x);
    bool atomic = x.kind != Expr::Kind::Binary || s.front() == '(';
    return atomic ? s : "(" + s + ")";
  };
  switch (e.kind) {
    case Expr::Kind::Unary:
      return (e.unary == UnaryOp::Not ? "!" : "-") + sub(e.operands[0]);
    case Expr::Kind::Call: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) s += ", ";
        s += renderMetaExpr(meta, e.operands[i]);
      }
      return s + ")";
    }
    case Expr::Kind::Binary: {
      std::string lhs = sub(e.operands[0]);
      std::string rhs = sub(e.operands[1]);
      auto plain = [&](BinaryOp op) { return lhs + " " + std::string(token(op)) + " " + rhs; };
      if (e.site < 0 || meta.choices[e.site].empty()) return plain(e.binary);
      std::string s = plain(e.binary);
      const auto& guards = meta.choices[e.site];
      for (auto it = guards.rbegin(); it != guards.rend(); ++it) {
        s = "(" + mutantName(*it) + " ? " + plain(meta.catalog.at(*it).replacement) + " : " + s +
            ")";
      }
      return s;
    }
    default:
      return render(e);
  }
}

void renderMetaBlock(std::ostream& os, const MetaProgram& meta, const std::vector<Stmt>& body,
                     int indent) {
  std::string pad(indent * 2, ' ');
  for (const Stmt& s : body) {
    std::string e = renderMetaExpr(meta, s.expr);
    switch (s.kind) {
      case Stmt::Kind::VarDecl: os << pad << "var " << s.name << " = " << e << ";\n"; break;
      case Stmt::Kind::Assign: os << pad << s.name << " = " << e << ";\n"; break;
      case Stmt::Kind::Return: os << pad << "return " << e << ";\n"; break;
      case Stmt::Kind::Assert: os << pad << "assert " << e << ";\n"; break;
      case Stmt::Kind::ExprStmt: os << pad << e << ";\n"; break;
      case Stmt::Kind::If:
        os << pad << "if (" << e << ") {\n";
        renderMetaBlock(os, meta, s.body, indent + 1);
        os << pad << "}";
        if (!s.elseBody.empty()) {
          os << " else {\n";
          renderMetaBlock(os, meta, s.elseBody, indent + 1);
          os << pad << "}";
        }
        os << "\n";
        break;
      case Stmt::Kind::While:
        os << pad << "while (" << e << ") {\n";
        renderMetaBlock(os, meta, s.body, indent + 1);
        os << pad << "}\n";
        break;
    }
  }
}

}  // namespace

std::string renderMeta(const MetaProgram& meta) {
  std::ostringstream os;
  const Program& p = meta.base;
  for (const Unit& u : p.units) {
    os << "unit " << u.name << " {\n";
    for (int fi : u.functions) {
      const Function& f = p.functions[fi];
      os << "  fn " << f.name << "(";
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i) os << ", ";
        os << f.params[i].name << ": " << typeName(f.params[i].type);
      }
      os << ") -> " << typeName(f.returnType) << " {\n";
      renderMetaBlock(os, meta, f.body, 2);
      os << "  }\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace sshom
