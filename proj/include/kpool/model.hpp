// Finite multi-agent S5 models with an optional ideal relation.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kpool/formula.hpp"
#include "kpool/partition.hpp"
#include "kpool/state_set.hpp"

namespace kpool {

using AgentId = std::size_t;

class Model {
 public:
  /// Per-state ideal neighbourhoods O[w].
  using Ideal = std::vector<StateSet>;

  Model() = default;
  /// `valuation[i]` is the extension of atoms[i]. Throws ModelError if the
  /// result violates a model invariant.
  Model(std::vector<std::string> states, std::vector<Agent> agents, std::vector<std::string> atoms,
        std::vector<Partition> relations, std::vector<StateSet> valuation, std::optional<Ideal> ideal = std::nullopt,
        std::optional<StateId> point = std::nullopt);

  std::size_t size() const { return base_->states.size(); }
  std::size_t agent_count() const { return base_->agents.size(); }
  std::size_t atom_count() const { return base_->atoms.size(); }

  const std::vector<std::string>& states() const { return base_->states; }
  const std::vector<Agent>& agents() const { return base_->agents; }
  const std::vector<std::string>& atoms() const { return base_->atoms; }
  const std::string& state_name(StateId s) const { return base_->states[s]; }

  std::optional<StateId> find_state(const std::string& name) const;
  std::optional<AgentId> find_agent(const Agent& name) const;
  std::optional<std::size_t> find_atom(const std::string& name) const;
  /// Throws ModelError for unknown names.
  StateId state_id(const std::string& name) const;
  AgentId agent_id(const Agent& name) const;

  const Partition& rel(AgentId a) const { return rel_[a]; }
  const std::vector<Partition>& relations() const { return rel_; }
  const StateSet& cell(AgentId a, StateId w) const { return rel_[a].cell(w); }

  const StateSet& atom_extension(std::size_t atom) const { return base_->valuation[atom]; }
  const std::vector<StateSet>& valuation() const { return base_->valuation; }
  bool holds(std::size_t atom, StateId w) const { return base_->valuation[atom].contains(w); }

  bool has_ideal() const { return base_->ideal.has_value(); }
  const Ideal& ideal() const { return *base_->ideal; }
  const StateSet& ideal_at(StateId w) const { return (*base_->ideal)[w]; }

  std::optional<StateId> point() const { return point_; }

  /// Same states, valuation and ideal; one relation replaced.
  Model with_relation(AgentId a, Partition p) const;
  Model with_relations(std::vector<Partition> rels) const;
  Model with_point(std::optional<StateId> w) const;
  /// Same relations with a different ideal (validated).
  Model with_ideal(std::optional<Ideal> ideal) const;

  /// Identifies (base, relations): two models with equal keys evaluate every
  /// formula identically. Keys are only comparable while both bases are alive.
  std::string structure_key() const;

  /// Throws ModelError describing the first violated invariant. Share updates
  /// delete links and may leave an ideal pair outside every relation, so the
  /// cover check can be switched off for updated models.
  void validate(bool ideal_cover = true) const;

  friend bool operator==(const Model& a, const Model& b);

 private:
  struct Base {
    std::vector<std::string> states;
    std::vector<Agent> agents;
    std::vector<std::string> atoms;
    std::vector<StateSet> valuation;
    std::optional<Ideal> ideal;
  };

  std::shared_ptr<const Base> base_;
  std::vector<Partition> rel_;
  std::optional<StateId> point_;
};

struct PointedModel {
  Model model;
  StateId point = 0;

  /// Uses the model's designated point, or state 0 when none is set.
  static PointedModel at_default(Model m);
};

}  // namespace kpool
