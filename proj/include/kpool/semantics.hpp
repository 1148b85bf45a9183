#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kpool/formula.hpp"
#include "kpool/model.hpp"

namespace kpool {

struct CheckResult {
  bool value = false;
  /// Human-readable explanation of a false verdict, outermost first. Empty
  /// when the formula holds.
  std::vector<std::string> witness;
};

/// Computes extensions. Macros are expanded on entry. With memoization on,
/// extensions are cached per (model structure, formula) and the atoms
/// partition and closures per model structure; updated models produced while
/// evaluating [a>b] and Ri{G} share the cache.
class Evaluator {
 public:
  explicit Evaluator(bool memoize = true);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  /// Throws EvalError for unknown atoms or agents, schema metavariables, or
  /// deontic operators on a model without an ideal relation.
  StateSet extension(const Model& m, const Formula& f);
  bool holds(const Model& m, const Formula& f, StateId w);
  bool global_truth(const Model& m, const Formula& f);
  CheckResult check(const PointedModel& pm, const Formula& f);

  const Partition& atoms(const Model& m);
  const StateSet& closure(const Model& m, AgentId a, StateId w);

  std::size_t cached_models() const;
  void clear();

 private:
  struct Entry;
  Entry& entry(const Model& m);
  StateSet eval(Entry& e, const Formula& f);
  void explain(const Model& m, const Formula& f, StateId w, std::vector<std::string>& out, int depth);

  bool memoize_;
  std::unordered_map<std::string, std::unique_ptr<Entry>> cache_;
  // Entries of a non-memoizing evaluator live until the outermost call returns.
  std::vector<std::unique_ptr<Entry>> scratch_;
  int depth_ = 0;
};

/// Throws EvalError when `f` cannot be evaluated on `m` (see Evaluator).
void check_evaluable(const Model& m, const Formula& f);

// Convenience wrappers over a fresh memoizing evaluator.
StateSet extension(const Model& m, const Formula& f);
bool global_truth(const Model& m, const Formula& f);
CheckResult check(const PointedModel& pm, const Formula& f);

}  // namespace kpool
