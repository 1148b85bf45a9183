// Knowledge-sharing and resolution updates.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kpool/model.hpp"

namespace kpool {

using ShareStep = std::pair<Agent, Agent>;  // (sender, receiver)

/// The (a>b) update at w. Inside C = rel[b][w] the receiver keeps only pairs
/// related by the sender's dependence equivalence at w: C ∩ cl_a(w) stays one
/// cell and the rest of C splits along atoms blocks. Everything else is
/// unchanged. The closure is taken in the input model.
Model share_update(const Model& m, StateId w, AgentId a, AgentId b);
Model share_update(const Model& m, const Partition& atoms, StateId w, AgentId a, AgentId b);
Model share_update(const Model& m, StateId w, const Agent& a, const Agent& b);

/// Every member of G gets the meet of the group's relations. Throws
/// ModelError on an empty group.
Model resolve_update(const Model& m, const std::vector<AgentId>& group);
Model resolve_update(const Model& m, const std::vector<Agent>& group);

/// Left fold of share_update, each step at pm.point.
PointedModel apply_sequence(const PointedModel& pm, const std::vector<ShareStep>& steps);

struct ShareCheck {
  bool is_model = true;         // output is a valid model
  bool receiver_keeps = true;   // R_a ∩ R_b ⊆ R*_b
  bool groups_preserved = true; // D_G unchanged for G ⊇ {a,b} and for G without b
  bool others_unchanged = true; // R*_i = R_i for i != b, R*_b ⊆ R_b
  std::string detail;

  bool ok() const { return is_model && receiver_keeps && groups_preserved && others_unchanged; }
};

/// Postconditions of a single share (after = share_update(before, w, a, b)).
ShareCheck check_share_postconditions(const Model& before, const Model& after, AgentId a, AgentId b);

}  // namespace kpool
