#ifndef SSHOM_FORMULA_H_
#define SSHOM_FORMULA_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sshom/common.h"

namespace sshom {

class FormulaStore;

// A propositional formula over mutant options, held as a node of a reduced
// ordered decision diagram (variable order = mutant id order). Semantically
// equal formulas of one store are the same node, so equality is O(1).
// The owning store must outlive every formula it hands out.
class Formula {
 public:
  Formula() = default;

  bool isTrue() const { return node_ == 1; }
  bool isFalse() const { return node_ == 0; }
  bool valid() const { return store_ != nullptr; }
  FormulaStore& store() const { return *store_; }
  std::uint32_t node() const { return node_; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.store_ == b.store_ && a.node_ == b.node_;
  }

  friend Formula operator&(const Formula& a, const Formula& b);
  friend Formula operator|(const Formula& a, const Formula& b);
  friend Formula operator!(const Formula& a);
  Formula& operator&=(const Formula& o) { return *this = *this & o; }
  Formula& operator|=(const Formula& o) { return *this = *this | o; }

 private:
  friend class FormulaStore;
  Formula(FormulaStore* s, std::uint32_t n) : store_(s), node_(n) {}

  FormulaStore* store_ = nullptr;
  std::uint32_t node_ = 0;
};

Formula implies(const Formula& a, const Formula& b);

enum class Connective { And, Or, Not, Implies };

// Total assignment over a store's universe.
struct Assignment {
  std::vector<bool> values;

  bool operator[](MutantId m) const { return values.at(index(m)); }
  MutantSet selected() const;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

class FormulaStore {
 public:
  explicit FormulaStore(std::size_t universe);
  FormulaStore(const FormulaStore&) = delete;
  FormulaStore& operator=(const FormulaStore&) = delete;

  std::size_t universe() const { return universe_; }
  std::size_t nodeCount() const { return nodes_.size(); }

  Formula mkTrue() { return Formula(this, 1); }
  Formula mkFalse() { return Formula(this, 0); }
  Formula mkVar(MutantId m);  // throws UnknownVariable

  Formula combine(Connective op, std::span<const Formula> operands);

  // Copies a formula owned by another store (same or smaller universe).
  Formula import(const Formula& foreign);

  // Throws Error once the store holds more nodes than `limit`.
  void setNodeLimit(std::size_t limit) { nodeLimit_ = limit; }

  // Node structure, for traversal.
  std::uint32_t varOf(std::uint32_t n) const { return nodes_[n].var; }
  std::uint32_t low(std::uint32_t n) const { return nodes_[n].lo; }
  std::uint32_t high(std::uint32_t n) const { return nodes_[n].hi; }
  Formula wrap(std::uint32_t n) { return Formula(this, n); }

  std::uint32_t apply(int op, std::uint32_t a, std::uint32_t b);
  std::uint32_t negate(std::uint32_t a);
  std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);

 private:
  struct Node {
    std::uint32_t var;
    std::uint32_t lo;
    std::uint32_t hi;
  };
  struct CacheEntry {
    std::uint32_t op = ~0u;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t r = 0;
  };

  void growUnique();
  void checkVar(MutantId m) const;

  std::size_t universe_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> unique_;  // open addressing, ~0u = empty
  std::vector<CacheEntry> cache_;
  std::size_t nodeLimit_ = 0;
};

bool evaluate(const Formula& f, const Assignment& a);
// f at {m -> true, every other mutant -> false}.
bool evalSingleton(const Formula& f, MutantId m);
// f at the assignment selecting exactly `selection`.
bool evalSelection(const Formula& f, const MutantSet& selection);

bool isSat(const Formula& f);
boost::multiprecision::cpp_int countModels(const Formula& f);

// Mutants the formula depends on, ascending.
MutantSet support(const Formula& f);

enum class EnumerationStrategy {
  DecisionDiagram,  // all-sat traversal of the diagram
  SolveAndBlock,    // SAT search, blocking each model before the next query
};

// Deterministic stream of satisfying assignments in lexicographic order
// (mutant 0 most significant, false before true).
class ModelStream {
 public:
  class Impl;
  explicit ModelStream(std::unique_ptr<Impl> impl);
  ModelStream(ModelStream&&) noexcept;
  ModelStream& operator=(ModelStream&&) noexcept;
  ~ModelStream();

  std::optional<Assignment> next();

 private:
  std::unique_ptr<Impl> impl_;
};

ModelStream enumerateModels(const Formula& f,
                            EnumerationStrategy strategy = EnumerationStrategy::DecisionDiagram);

// Satisfied exactly by assignments with at least k of `vars` true.
Formula atLeastK(FormulaStore& store, std::span<const MutantId> vars, std::size_t k);

// Infix rendering as an irredundant sum of products, e.g. `m1 | !m2 & m3`
// is printed `m1 | (!m2 & m3)`. Constants are `true` / `false`.
std::string toInfix(const Formula& f);
// Renders some g with f & care <= g <= f | !care, i.e. f up to assignments
// outside `care`. Shorter than toInfix(f) when care prunes many cases.
std::string toInfix(const Formula& f, const Formula& care);
// Accepts `! & | ( ) true false m<k>` with the usual precedence.
Formula parseInfix(FormulaStore& store, std::string_view text);

}  // namespace sshom

#endif  // SSHOM_FORMULA_H_
