#include <unordered_map>

#include "sshom/formula.h"

namespace sshom {

class ModelStream::Impl {
 public:
  virtual ~Impl() = default;
  virtual std::optional<Assignment> next() = 0;
};

ModelStream::ModelStream(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ModelStream::ModelStream(ModelStream&&) noexcept = default;
ModelStream& ModelStream::operator=(ModelStream&&) noexcept = default;
ModelStream::~ModelStream() = default;

std::optional<Assignment> ModelStream::next() { return impl_->next(); }

namespace {

// Lexicographic all-sat walk over the diagram. nodeAt_[i] is the node in
// force when variable i was decided.
class DiagramStream : public ModelStream::Impl {
 public:
  explicit DiagramStream(const Formula& f)
      : s_(f.store()), root_(f.node()), n_(s_.universe()), bits_(n_, false), nodeAt_(n_, 0) {}

  std::optional<Assignment> next() override {
    if (done_) return std::nullopt;
    if (!started_) {
      started_ = true;
      if (root_ == 0) {
        done_ = true;
        return std::nullopt;
      }
      descend(0, root_);
      return Assignment{bits_};
    }
    for (std::size_t i = n_; i-- > 0;) {
      if (bits_[i]) continue;
      std::uint32_t child = cofactor(nodeAt_[i], i, true);
      if (child == 0) continue;
      bits_[i] = true;
      descend(i + 1, child);
      return Assignment{bits_};
    }
    done_ = true;
    return std::nullopt;
  }

 private:
  std::uint32_t cofactor(std::uint32_t node, std::size_t var, bool value) const {
    if (node <= 1 || s_.varOf(node) != var) return node;
    return value ? s_.high(node) : s_.low(node);
  }

  void descend(std::size_t level, std::uint32_t node) {
    for (std::size_t i = level; i < n_; ++i) {
      nodeAt_[i] = node;
      std::uint32_t child = cofactor(node, i, false);
      if (child == 0) {
        bits_[i] = true;
        child = cofactor(node, i, true);
      } else {
        bits_[i] = false;
      }
      node = child;
    }
  }

  const FormulaStore& s_;
  std::uint32_t root_;
  std::size_t n_;
  std::vector<bool> bits_;
  std::vector<std::uint32_t> nodeAt_;
  bool started_ = false;
  bool done_ = false;
};

// DPLL over a Tseitin encoding of the diagram. Decisions follow variable
// index with false first and backtracking is chronological, so the first
// model found is the lexicographically smallest; each model is then blocked
// and the search resumes from the point of the blocking conflict.
class SolveAndBlockStream : public ModelStream::Impl {
 public:
  explicit SolveAndBlockStream(const Formula& f) : universe_(f.store().universe()) {
    const FormulaStore& s = f.store();
    numVars_ = universe_;
    if (f.node() == 0) {
      unsat_ = true;
      return;
    }
    if (f.node() == 1) {
      assign_.assign(numVars_, kUnassigned);
      return;
    }
    std::unordered_map<std::uint32_t, int> aux;
    std::vector<std::uint32_t> stack{f.node()};
    while (!stack.empty()) {
      std::uint32_t n = stack.back();
      stack.pop_back();
      if (n <= 1 || aux.count(n)) continue;
      aux.emplace(n, numVars_++);
      stack.push_back(s.low(n));
      stack.push_back(s.high(n));
    }
    // lit encoding: 2*v for v, 2*v+1 for !v; constants handled inline.
    auto litOf = [&](std::uint32_t n, bool positive) -> int {
      return 2 * aux.at(n) + (positive ? 0 : 1);
    };
    for (const auto& [n, a] : aux) {
      int x = 2 * static_cast<int>(s.varOf(n));
      std::uint32_t hi = s.high(n), lo = s.low(n);
      int av = 2 * a;
      // a -> (x -> hi), a -> (!x -> lo), (x & hi) -> a, (!x & lo) -> a
      addDefinitional({av + 1, x + 1}, hi, true, litOf);
      addDefinitional({av + 1, x}, lo, true, litOf);
      addDefinitional({av, x + 1}, hi, false, litOf);
      addDefinitional({av, x}, lo, false, litOf);
    }
    clauses_.push_back({litOf(f.node(), true)});
    assign_.assign(numVars_, kUnassigned);
  }

  std::optional<Assignment> next() override {
    if (unsat_) return std::nullopt;
    if (found_) {
      std::vector<int> block;
      for (std::size_t v = 0; v < universe_; ++v) block.push_back(2 * static_cast<int>(v) + (assign_[v] == 1 ? 1 : 0));
      clauses_.push_back(block);
      if (!backtrack()) {
        unsat_ = true;
        return std::nullopt;
      }
    }
    while (true) {
      if (!propagate()) {
        if (!backtrack()) {
          unsat_ = true;
          return std::nullopt;
        }
        continue;
      }
      int v = firstUnassigned();
      if (v < 0) break;
      decisions_.push_back({v, false, trail_.size()});
      set(2 * v + 1);
    }
    found_ = true;
    Assignment a;
    a.values.resize(universe_);
    for (std::size_t v = 0; v < universe_; ++v) a.values[v] = assign_[v] == 1;
    return a;
  }

 private:
  static constexpr signed char kUnassigned = -1;

  struct Decision {
    int var;
    bool flipped;
    std::size_t trailPos;
  };

  template <typename LitOf>
  void addDefinitional(std::vector<int> lits, std::uint32_t child, bool childPositive,
                       LitOf litOf) {
    if (child == (childPositive ? 1u : 0u)) return;  // clause satisfied
    if (child > 1) lits.push_back(litOf(child, childPositive));
    clauses_.push_back(std::move(lits));
  }

  int value(int lit) const {
    signed char v = assign_[lit >> 1];
    if (v == kUnassigned) return -1;
    return (lit & 1) ? 1 - v : v;
  }

  void set(int lit) {
    assign_[lit >> 1] = (lit & 1) ? 0 : 1;
    trail_.push_back(lit >> 1);
  }

  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : clauses_) {
        int unassigned = 0;
        int last = -1;
        bool sat = false;
        for (int lit : c) {
          int v = value(lit);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v == -1) {
            ++unassigned;
            last = lit;
          }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          set(last);
          changed = true;
        }
      }
    }
    return true;
  }

  void undoTo(std::size_t pos) {
    while (trail_.size() > pos) {
      assign_[trail_.back()] = kUnassigned;
      trail_.pop_back();
    }
  }

  bool backtrack() {
    while (!decisions_.empty()) {
      Decision& d = decisions_.back();
      undoTo(d.trailPos);
      if (!d.flipped) {
        d.flipped = true;
        set(2 * d.var);
        return true;
      }
      decisions_.pop_back();
    }
    undoTo(0);
    return false;
  }

  int firstUnassigned() const {
    for (std::size_t v = 0; v < numVars_; ++v) {
      if (assign_[v] == kUnassigned) return static_cast<int>(v);
    }
    return -1;
  }

  std::size_t universe_;
  std::size_t numVars_ = 0;
  std::vector<std::vector<int>> clauses_;
  std::vector<signed char> assign_;
  std::vector<int> trail_;
  std::vector<Decision> decisions_;
  bool unsat_ = false;
  bool found_ = false;
};

}  // namespace

ModelStream enumerateModels(const Formula& f, EnumerationStrategy strategy) {
  if (!f.valid()) throw Error("empty formula");
  if (strategy == EnumerationStrategy::SolveAndBlock)
    return ModelStream(std::make_unique<SolveAndBlockStream>(f));
  return ModelStream(std::make_unique<DiagramStream>(f));
}

}  // namespace sshom
