#include "kpool/update.hpp"

#include "kpool/error.hpp"
#include "kpool/refinement.hpp"

namespace kpool {

Model share_update(const Model& m, const Partition& atoms, StateId w, AgentId a, AgentId b) {
  const std::size_t n = m.size();
  const StateSet& C = m.cell(b, w);
  const StateSet cl = dep_closure(m, atoms, a, w);
  std::vector<std::size_t> labels(n);
  for (StateId s = 0; s < n; ++s) {
    if (!C.contains(s))
      labels[s] = m.rel(b).block_of(s);
    else if (cl.contains(s))
      labels[s] = n;
    else
      labels[s] = n + 1 + atoms.block_of(s);
  }
  return m.with_relation(b, Partition(labels));
}

Model share_update(const Model& m, StateId w, AgentId a, AgentId b) {
  return share_update(m, atoms_partition(m), w, a, b);
}

Model share_update(const Model& m, StateId w, const Agent& a, const Agent& b) {
  return share_update(m, w, m.agent_id(a), m.agent_id(b));
}

Model resolve_update(const Model& m, const std::vector<AgentId>& group) {
  if (group.empty()) throw ModelError("resolution over an empty group");
  Partition meet = m.rel(group.front());
  for (std::size_t i = 1; i < group.size(); ++i) meet = meet.meet(m.rel(group[i]));
  auto rels = m.relations();
  for (auto a : group) rels[a] = meet;
  return m.with_relations(std::move(rels));
}

Model resolve_update(const Model& m, const std::vector<Agent>& group) {
  std::vector<AgentId> ids;
  for (const auto& a : group) ids.push_back(m.agent_id(a));
  return resolve_update(m, ids);
}

PointedModel apply_sequence(const PointedModel& pm, const std::vector<ShareStep>& steps) {
  Model m = pm.model;
  for (const auto& [a, b] : steps) m = share_update(m, pm.point, a, b);
  return PointedModel{std::move(m), pm.point};
}

ShareCheck check_share_postconditions(const Model& before, const Model& after, AgentId a, AgentId b) {
  ShareCheck r;
  auto note = [&](const std::string& s) {
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += s;
  };
  try {
    after.validate(false);
  } catch (const Error& e) {
    r.is_model = false;
    note(e.what());
  }
  if (!r.is_model) return r;

  const std::size_t n = before.size();
  const Partition common = before.rel(a).meet(before.rel(b));
  if (!common.refines(after.rel(b))) {
    r.receiver_keeps = false;
    note("R_a ∩ R_b not contained in updated R_b");
  }
  if (!after.rel(b).refines(before.rel(b))) {
    r.others_unchanged = false;
    note("updated R_b is not a subrelation of R_b");
  }
  for (AgentId i = 0; i < before.agent_count(); ++i)
    if (i != b && !(before.rel(i) == after.rel(i))) {
      r.others_unchanged = false;
      note("relation of '" + before.agents()[i] + "' changed");
    }
  const std::size_t k = before.agent_count();
  if (k < 20) {
    const std::size_t ab = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      // A group holding b without a can lose pairs along with b.
      if ((mask >> b) & 1u && (mask & ab) != ab) continue;
      Partition d0 = Partition::trivial(n), d1 = Partition::trivial(n);
      for (AgentId i = 0; i < k; ++i)
        if (mask & (std::size_t{1} << i)) {
          d0 = d0.meet(before.rel(i));
          d1 = d1.meet(after.rel(i));
        }
      if (!(d0 == d1)) {
        r.groups_preserved = false;
        note("distributed relation changed for group mask " + std::to_string(mask));
        break;
      }
    }
  }
  return r;
}

}  // namespace kpool
