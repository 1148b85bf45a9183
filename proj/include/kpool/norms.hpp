// Permission helpers and the permissible-pooling planner.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpool/formula.hpp"
#include "kpool/model.hpp"
#include "kpool/semantics.hpp"
#include "kpool/update.hpp"

namespace kpool {

/// Ok{b} at the point after the (a>b) update. Throws EvalError when the
/// model has no ideal relation.
bool permissible_share(const PointedModel& pm, const Agent& a, const Agent& b);

struct Plan {
  std::vector<ShareStep> steps;
  /// Permissibility of each step in the model it was executed in.
  std::vector<bool> verdicts;
  Formula goal = Formula::top();
  bool achieved = false;
};

struct PlanOptions {
  std::size_t max_len = 4;
  bool require_permissible = true;
};

/// Breadth-first search over share sequences at the point, deduplicated by
/// pointed-model fingerprint. Successors are tried in lexicographic
/// (sender, receiver) order over agent names, so the first shortest plan in
/// that order is returned. nullopt when no plan of length <= max_len exists.
/// Every returned plan has been replayed and re-checked.
std::optional<Plan> plan(const PointedModel& pm, const Formula& goal, const PlanOptions& opts = {});

/// Replays `steps` from pm and recomputes verdicts and goal.
Plan replay(const PointedModel& pm, const std::vector<ShareStep>& steps, const Formula& goal);

/// `<n>: <sender> > <receiver>  permissible=<bool>` per step, then
/// `goal=<formula> achieved=<bool>`.
std::string format_plan(const Plan& p);

}  // namespace kpool
