#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "sshom/formula.h"

namespace sshom {

namespace {

void requireValid(const Formula& f) {
  if (!f.valid()) throw Error("empty formula");
}

}  // namespace

bool evaluate(const Formula& f, const Assignment& a) {
  requireValid(f);
  const FormulaStore& s = f.store();
  if (a.values.size() != s.universe())
    throw Error("assignment is not total over the universe");
  std::uint32_t n = f.node();
  while (n > 1) n = a.values[s.varOf(n)] ? s.high(n) : s.low(n);
  return n == 1;
}

bool evalSingleton(const Formula& f, MutantId m) {
  requireValid(f);
  const FormulaStore& s = f.store();
  if (index(m) >= s.universe())
    throw UnknownVariable("variable " + mutantName(m) + " is outside the universe");
  std::uint32_t n = f.node();
  while (n > 1) n = s.varOf(n) == index(m) ? s.high(n) : s.low(n);
  return n == 1;
}

bool evalSelection(const Formula& f, const MutantSet& selection) {
  requireValid(f);
  const FormulaStore& s = f.store();
  std::uint32_t n = f.node();
  while (n > 1) {
    bool on = std::binary_search(selection.begin(), selection.end(), mutantAt(s.varOf(n)));
    n = on ? s.high(n) : s.low(n);
  }
  return n == 1;
}

bool isSat(const Formula& f) {
  requireValid(f);
  return !f.isFalse();
}

boost::multiprecision::cpp_int countModels(const Formula& f) {
  using boost::multiprecision::cpp_int;
  requireValid(f);
  const FormulaStore& s = f.store();
  std::unordered_map<std::uint32_t, cpp_int> memo;
  // Models over variables [var(n), universe).
  auto count = [&](auto&& self, std::uint32_t n) -> cpp_int {
    if (n == 0) return 0;
    if (n == 1) return 1;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    std::uint32_t v = s.varOf(n);
    cpp_int lo = self(self, s.low(n)) << (s.varOf(s.low(n)) - v - 1);
    cpp_int hi = self(self, s.high(n)) << (s.varOf(s.high(n)) - v - 1);
    cpp_int r = lo + hi;
    memo.emplace(n, r);
    return r;
  };
  return count(count, f.node()) << s.varOf(f.node());
}

MutantSet support(const Formula& f) {
  requireValid(f);
  const FormulaStore& s = f.store();
  std::unordered_set<std::uint32_t> seen;
  std::vector<bool> vars(s.universe(), false);
  std::vector<std::uint32_t> stack{f.node()};
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (n <= 1 || !seen.insert(n).second) continue;
    vars[s.varOf(n)] = true;
    stack.push_back(s.low(n));
    stack.push_back(s.high(n));
  }
  MutantSet out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i]) out.push_back(mutantAt(i));
  }
  return out;
}

Formula atLeastK(FormulaStore& store, std::span<const MutantId> vars, std::size_t k) {
  std::vector<MutantId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (k > sorted.size()) throw Error("atLeastK: k exceeds the number of variables");
  for (MutantId m : sorted) store.mkVar(m);  // validates membership
  // layer[j] = "at least j more of the remaining variables are true".
  std::vector<std::uint32_t> layer(k + 1, 0);
  layer[0] = 1;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    std::vector<std::uint32_t> next(k + 1, 0);
    next[0] = 1;
    for (std::size_t j = 1; j <= k; ++j) next[j] = store.mk(index(*it), layer[j], layer[j - 1]);
    layer.swap(next);
  }
  return store.wrap(layer[k]);
}

// ---------------------------------------------------------------------------
// Infix rendering: Minato-Morreale irredundant sum of products.

namespace {

using Literal = std::pair<std::uint32_t, bool>;
using Cube = std::vector<Literal>;

struct Isop {
  FormulaStore& s;
  std::unordered_map<std::uint64_t, std::pair<std::vector<Cube>, std::uint32_t>> memo;

  std::pair<std::vector<Cube>, std::uint32_t> run(std::uint32_t lower, std::uint32_t upper) {
    if (lower == 0) return {{}, 0};
    if (upper == 1) return {{Cube{}}, 1};
    std::uint64_t key = (static_cast<std::uint64_t>(lower) << 32) | upper;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::uint32_t v = std::min(s.varOf(lower), s.varOf(upper));
    auto cof = [&](std::uint32_t n, bool hi) {
      if (s.varOf(n) != v) return n;
      return hi ? s.high(n) : s.low(n);
    };
    std::uint32_t l0 = cof(lower, false), l1 = cof(lower, true);
    std::uint32_t u0 = cof(upper, false), u1 = cof(upper, true);
    auto [c0, f0] = run(s.apply(0, l0, s.negate(u1)), u0);
    auto [c1, f1] = run(s.apply(0, l1, s.negate(u0)), u1);
    std::uint32_t lstar = s.apply(1, s.apply(0, l0, s.negate(f0)), s.apply(0, l1, s.negate(f1)));
    std::uint32_t ustar = s.apply(0, u0, u1);
    auto [cs, fs] = run(lstar, ustar);
    std::uint32_t f = s.apply(1, s.apply(1, s.mk(v, f0, 0), s.mk(v, 0, f1)), fs);
    std::vector<Cube> cover;
    for (Cube c : c0) {
      c.insert(c.begin(), Literal{v, false});
      cover.push_back(std::move(c));
    }
    for (Cube c : c1) {
      c.insert(c.begin(), Literal{v, true});
      cover.push_back(std::move(c));
    }
    for (Cube& c : cs) cover.push_back(std::move(c));
    auto result = std::pair(std::move(cover), f);
    memo.emplace(key, result);
    return result;
  }
};

std::string literalText(const Literal& l) {
  return (l.second ? "" : "!") + mutantName(mutantAt(l.first));
}

}  // namespace

std::string toInfix(const Formula& f) { return toInfix(f, f.store().mkTrue()); }

std::string toInfix(const Formula& f, const Formula& care) {
  requireValid(f);
  requireValid(care);
  if (&f.store() != &care.store()) throw Error("formula belongs to a different store");
  Formula lower = f & care;
  Formula upper = f | !care;
  if (upper.isTrue()) return "true";
  if (lower.isFalse()) return "false";
  Isop isop{f.store(), {}};
  std::vector<Cube> cover = isop.run(lower.node(), upper.node()).first;
  std::sort(cover.begin(), cover.end(), [](const Cube& a, const Cube& b) {
    auto key = [](const Cube& c) {
      std::vector<std::pair<std::uint32_t, int>> k;
      for (const Literal& l : c) k.emplace_back(l.first, l.second ? 0 : 1);
      return k;
    };
    return key(a) < key(b);
  });
  std::string out;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (i) out += " | ";
    bool wrap = cover.size() > 1 && cover[i].size() > 1;
    if (wrap) out += "(";
    for (std::size_t j = 0; j < cover[i].size(); ++j) {
      if (j) out += " & ";
      out += literalText(cover[i][j]);
    }
    if (wrap) out += ")";
  }
  return out;
}

namespace {

class InfixParser {
 public:
  InfixParser(FormulaStore& s, std::string_view t) : s_(s), t_(t) {}

  Formula parse() {
    Formula f = parseOr();
    skip();
    if (i_ != t_.size()) fail("unexpected '" + std::string(1, t_[i_]) + "'");
    return f;
  }

 private:
  void skip() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < t_.size() && t_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("formula text, offset " + std::to_string(i_) + ": " + msg);
  }

  Formula parseOr() {
    Formula f = parseAnd();
    while (eat('|')) f |= parseAnd();
    return f;
  }
  Formula parseAnd() {
    Formula f = parseUnary();
    while (eat('&')) f &= parseUnary();
    return f;
  }
  Formula parseUnary() {
    if (eat('!')) return !parseUnary();
    if (eat('(')) {
      Formula f = parseOr();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    skip();
    std::size_t start = i_;
    while (i_ < t_.size() && std::isalnum(static_cast<unsigned char>(t_[i_]))) ++i_;
    std::string_view word = t_.substr(start, i_ - start);
    if (word == "true") return s_.mkTrue();
    if (word == "false") return s_.mkFalse();
    if (word.size() >= 2 && word[0] == 'm' &&
        std::all_of(word.begin() + 1, word.end(), [](char c) { return std::isdigit(c); })) {
      unsigned long k = std::stoul(std::string(word.substr(1)));
      if (k == 0) fail("variable names start at m1");
      return s_.mkVar(mutantAt(k - 1));
    }
    fail(word.empty() ? "expected an operand" : "unknown name '" + std::string(word) + "'");
  }

  FormulaStore& s_;
  std::string_view t_;
  std::size_t i_ = 0;
};

}  // namespace

Formula parseInfix(FormulaStore& store, std::string_view text) {
  return InfixParser(store, text).parse();
}

}  // namespace sshom
