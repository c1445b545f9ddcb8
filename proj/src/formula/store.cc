#include <unordered_map>

#include "sshom/formula.h"

namespace sshom {

namespace {

constexpr std::uint32_t kEmpty = ~0u;
constexpr int kAnd = 0;
constexpr int kOr = 1;
constexpr int kNot = 2;

inline std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline std::uint64_t hashTriple(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  return mix((static_cast<std::uint64_t>(a) << 40) ^ (static_cast<std::uint64_t>(b) << 20) ^ c ^
             (static_cast<std::uint64_t>(b) >> 44));
}

}  // namespace

FormulaStore::FormulaStore(std::size_t universe) : universe_(universe) {
  auto term = static_cast<std::uint32_t>(universe);
  nodes_.push_back({term, 0, 0});
  nodes_.push_back({term, 1, 1});
  unique_.assign(1024, kEmpty);
  cache_.resize(1 << 14);
}

void FormulaStore::checkVar(MutantId m) const {
  if (index(m) >= universe_)
    throw UnknownVariable("variable " + mutantName(m) + " is outside the universe of " +
                          std::to_string(universe_));
}

Formula FormulaStore::mkVar(MutantId m) {
  checkVar(m);
  return Formula(this, mk(index(m), 0, 1));
}

void FormulaStore::growUnique() {
  std::vector<std::uint32_t> table(unique_.size() * 2, kEmpty);
  std::size_t mask = table.size() - 1;
  for (std::uint32_t id : unique_) {
    if (id == kEmpty) continue;
    const Node& n = nodes_[id];
    std::size_t h = hashTriple(n.var, n.lo, n.hi) & mask;
    while (table[h] != kEmpty) h = (h + 1) & mask;
    table[h] = id;
  }
  unique_.swap(table);
  if (cache_.size() < unique_.size()) cache_.assign(unique_.size(), CacheEntry{});
}

std::uint32_t FormulaStore::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  std::size_t mask = unique_.size() - 1;
  std::size_t h = hashTriple(var, lo, hi) & mask;
  while (unique_[h] != kEmpty) {
    const Node& n = nodes_[unique_[h]];
    if (n.var == var && n.lo == lo && n.hi == hi) return unique_[h];
    h = (h + 1) & mask;
  }
  if (nodeLimit_ && nodes_.size() >= nodeLimit_)
    throw Error("formula store exceeded its node limit of " + std::to_string(nodeLimit_));
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({var, lo, hi});
  unique_[h] = id;
  if (nodes_.size() * 2 > unique_.size()) growUnique();
  return id;
}

std::uint32_t FormulaStore::negate(std::uint32_t a) {
  if (a <= 1) return 1 - a;
  std::size_t slot = hashTriple(kNot, a, 0) & (cache_.size() - 1);
  const CacheEntry& e = cache_[slot];
  if (e.op == kNot && e.a == a) return e.r;
  std::uint32_t var = nodes_[a].var;
  std::uint32_t lo = negate(nodes_[a].lo);
  std::uint32_t hi = negate(nodes_[a].hi);
  std::uint32_t r = mk(var, lo, hi);
  slot = hashTriple(kNot, a, 0) & (cache_.size() - 1);
  cache_[slot] = CacheEntry{kNot, a, 0, r};
  return r;
}

std::uint32_t FormulaStore::apply(int op, std::uint32_t a, std::uint32_t b) {
  if (op == kAnd) {
    if (a == 0 || b == 0) return 0;
    if (a == 1) return b;
    if (b == 1 || a == b) return a;
  } else {
    if (a == 1 || b == 1) return 1;
    if (a == 0) return b;
    if (b == 0 || a == b) return a;
  }
  if (a > b) std::swap(a, b);
  std::size_t slot = hashTriple(static_cast<std::uint32_t>(op), a, b) & (cache_.size() - 1);
  {
    const CacheEntry& e = cache_[slot];
    if (e.op == static_cast<std::uint32_t>(op) && e.a == a && e.b == b) return e.r;
  }
  std::uint32_t va = nodes_[a].var;
  std::uint32_t vb = nodes_[b].var;
  std::uint32_t v = std::min(va, vb);
  std::uint32_t a0 = va == v ? nodes_[a].lo : a;
  std::uint32_t a1 = va == v ? nodes_[a].hi : a;
  std::uint32_t b0 = vb == v ? nodes_[b].lo : b;
  std::uint32_t b1 = vb == v ? nodes_[b].hi : b;
  std::uint32_t lo = apply(op, a0, b0);
  std::uint32_t hi = apply(op, a1, b1);
  std::uint32_t r = mk(v, lo, hi);
  slot = hashTriple(static_cast<std::uint32_t>(op), a, b) & (cache_.size() - 1);
  cache_[slot] = CacheEntry{static_cast<std::uint32_t>(op), a, b, r};
  return r;
}

Formula FormulaStore::combine(Connective op, std::span<const Formula> operands) {
  for (const Formula& f : operands) {
    if (f.store_ != this) throw Error("formula belongs to a different store");
  }
  switch (op) {
    case Connective::Not:
      if (operands.size() != 1) throw Error("NOT takes exactly one operand");
      return Formula(this, negate(operands[0].node_));
    case Connective::Implies:
      if (operands.size() != 2) throw Error("IMPLIES takes exactly two operands");
      return Formula(this, apply(kOr, negate(operands[0].node_), operands[1].node_));
    case Connective::And:
    case Connective::Or: {
      int code = op == Connective::And ? kAnd : kOr;
      std::uint32_t acc = op == Connective::And ? 1 : 0;
      for (const Formula& f : operands) acc = apply(code, acc, f.node_);
      return Formula(this, acc);
    }
  }
  return mkFalse();
}

Formula FormulaStore::import(const Formula& foreign) {
  if (!foreign.valid()) throw Error("importing an empty formula");
  if (foreign.store_ == this) return foreign;
  const FormulaStore& src = *foreign.store_;
  if (src.universe_ > universe_) throw Error("cannot import from a larger universe");
  std::unordered_map<std::uint32_t, std::uint32_t> memo{{0, 0}, {1, 1}};
  auto copy = [&](auto&& self, std::uint32_t n) -> std::uint32_t {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    const Node& node = src.nodes_[n];
    std::uint32_t lo = self(self, node.lo);
    std::uint32_t hi = self(self, node.hi);
    std::uint32_t r = mk(node.var, lo, hi);
    memo.emplace(n, r);
    return r;
  };
  return Formula(this, copy(copy, foreign.node_));
}

Formula operator&(const Formula& a, const Formula& b) {
  if (a.store_ != b.store_) throw Error("formula belongs to a different store");
  return Formula(a.store_, a.store_->apply(kAnd, a.node_, b.node_));
}

Formula operator|(const Formula& a, const Formula& b) {
  if (a.store_ != b.store_) throw Error("formula belongs to a different store");
  return Formula(a.store_, a.store_->apply(kOr, a.node_, b.node_));
}

Formula operator!(const Formula& a) { return Formula(a.store_, a.store_->negate(a.node_)); }

Formula implies(const Formula& a, const Formula& b) { return (!a) | b; }

MutantSet Assignment::selected() const {
  MutantSet out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) out.push_back(mutantAt(i));
  }
  return out;
}

}  // namespace sshom
