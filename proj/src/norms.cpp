#include "kpool/norms.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "kpool/error.hpp"
#include "kpool/refinement.hpp"

namespace kpool {

namespace {

bool permissible_in(Evaluator& ev, const PointedModel& pm, const Agent& a, const Agent& b) {
  return ev.holds(pm.model, Formula::permit_share(a, b), pm.point);
}

}  // namespace

bool permissible_share(const PointedModel& pm, const Agent& a, const Agent& b) {
  Evaluator ev;
  return permissible_in(ev, pm, a, b);
}

Plan replay(const PointedModel& pm, const std::vector<ShareStep>& steps, const Formula& goal) {
  Plan p;
  p.steps = steps;
  p.goal = goal;
  Model m = pm.model;
  for (const auto& [a, b] : steps) {
    Evaluator ev;
    p.verdicts.push_back(m.has_ideal() && permissible_in(ev, PointedModel{m, pm.point}, a, b));
    m = share_update(m, pm.point, a, b);
  }
  p.achieved = Evaluator().holds(m, goal, pm.point);
  return p;
}

std::optional<Plan> plan(const PointedModel& pm, const Formula& goal, const PlanOptions& opts) {
  if (opts.require_permissible && !pm.model.has_ideal())
    throw EvalError("permissible planning needs a model with an ideal relation");
  check_evaluable(pm.model, expand(goal));

  std::vector<Agent> agents = pm.model.agents();
  std::sort(agents.begin(), agents.end());
  std::vector<ShareStep> moves;
  for (const auto& a : agents)
    for (const auto& b : agents)
      if (a != b) moves.emplace_back(a, b);

  struct Node {
    Model model;
    std::vector<ShareStep> steps;
  };
  Evaluator ev;
  std::deque<Node> frontier{{pm.model, {}}};
  std::unordered_set<std::string> seen{fingerprint(pm)};
  std::optional<std::vector<ShareStep>> found;

  while (!frontier.empty()) {
    Node node = std::move(frontier.front());
    frontier.pop_front();
    if (ev.holds(node.model, goal, pm.point)) {
      found = std::move(node.steps);
      break;
    }
    if (node.steps.size() >= opts.max_len) continue;
    for (const auto& [a, b] : moves) {
      if (opts.require_permissible && !permissible_in(ev, PointedModel{node.model, pm.point}, a, b)) continue;
      Model next = share_update(node.model, ev.atoms(node.model), pm.point, node.model.agent_id(a),
                                node.model.agent_id(b));
      if (!seen.insert(fingerprint(PointedModel{next, pm.point})).second) continue;
      auto steps = node.steps;
      steps.emplace_back(a, b);
      frontier.push_back({std::move(next), std::move(steps)});
    }
  }
  if (!found) return std::nullopt;

  Plan p = replay(pm, *found, goal);
  if (!p.achieved) throw Error("planner self-check failed: goal does not hold after replay");
  if (opts.require_permissible && std::find(p.verdicts.begin(), p.verdicts.end(), false) != p.verdicts.end())
    throw Error("planner self-check failed: replayed step is not permissible");
  return p;
}

std::string format_plan(const Plan& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.steps.size(); ++i)
    os << (i + 1) << ": " << p.steps[i].first << " > " << p.steps[i].second
       << "  permissible=" << (p.verdicts[i] ? "true" : "false") << '\n';
  os << "goal=" << print(p.goal) << " achieved=" << (p.achieved ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace kpool
