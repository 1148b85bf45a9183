#include "kpool/model.hpp"

#include <cstdint>
#include <set>

#include "kpool/error.hpp"
#include "kpool/parser.hpp"

namespace kpool {

namespace {

template <class T>
std::optional<std::size_t> index_of(const std::vector<T>& v, const T& x) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == x) return i;
  return std::nullopt;
}

void require_unique(const std::vector<std::string>& names, const char* what) {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw ModelError(std::string("duplicate ") + what + " '" + n + "'");
}

}  // namespace

Model::Model(std::vector<std::string> states, std::vector<Agent> agents, std::vector<std::string> atoms,
             std::vector<Partition> relations, std::vector<StateSet> valuation, std::optional<Ideal> ideal,
             std::optional<StateId> point)
    : base_(std::make_shared<const Base>(
          Base{std::move(states), std::move(agents), std::move(atoms), std::move(valuation), std::move(ideal)})),
      rel_(std::move(relations)),
      point_(point) {
  validate();
}

std::optional<StateId> Model::find_state(const std::string& name) const { return index_of(base_->states, name); }
std::optional<AgentId> Model::find_agent(const Agent& name) const { return index_of(base_->agents, name); }
std::optional<std::size_t> Model::find_atom(const std::string& name) const { return index_of(base_->atoms, name); }

StateId Model::state_id(const std::string& name) const {
  if (auto s = find_state(name)) return *s;
  throw ModelError("unknown state '" + name + "'");
}

AgentId Model::agent_id(const Agent& name) const {
  if (auto a = find_agent(name)) return *a;
  throw ModelError("unknown agent '" + name + "'");
}

Model Model::with_relation(AgentId a, Partition p) const {
  Model m(*this);
  m.rel_[a] = std::move(p);
  return m;
}

Model Model::with_relations(std::vector<Partition> rels) const {
  Model m(*this);
  m.rel_ = std::move(rels);
  return m;
}

Model Model::with_point(std::optional<StateId> w) const {
  if (w && *w >= size()) throw ModelError("point out of range");
  Model m(*this);
  m.point_ = w;
  return m;
}

Model Model::with_ideal(std::optional<Ideal> ideal) const {
  Model m(*this);
  m.base_ = std::make_shared<const Base>(
      Base{base_->states, base_->agents, base_->atoms, base_->valuation, std::move(ideal)});
  m.validate();
  return m;
}

std::string Model::structure_key() const {
  std::string k = std::to_string(reinterpret_cast<std::uintptr_t>(base_.get()));
  for (const auto& r : rel_) {
    k += '|';
    for (auto l : r.labels()) {
      k += std::to_string(l);
      k += ',';
    }
  }
  return k;
}

void Model::validate(bool ideal_cover) const {
  if (!base_) throw ModelError("empty model");
  const std::size_t n = base_->states.size();
  if (n == 0) throw ModelError("model has no states");
  require_unique(base_->states, "state");
  require_unique(base_->agents, "agent");
  require_unique(base_->atoms, "atom");
  for (const auto& s : base_->states)
    if (s.empty()) throw ModelError("empty state name");
  for (const auto& a : base_->agents)
    if (!is_agent_name(a)) throw ModelError("invalid agent name '" + a + "'");
  for (const auto& p : base_->atoms)
    if (!is_atom_name(p)) throw ModelError("invalid atom name '" + p + "'");
  if (base_->agents.empty()) throw ModelError("model has no agents");
  if (rel_.size() != base_->agents.size()) throw ModelError("one relation per agent required");
  for (std::size_t a = 0; a < rel_.size(); ++a)
    if (rel_[a].universe() != n) throw ModelError("relation of '" + base_->agents[a] + "' does not cover all states");
  if (base_->valuation.size() != base_->atoms.size()) throw ModelError("one extension per atom required");
  for (const auto& v : base_->valuation)
    if (v.universe() != n) throw ModelError("valuation universe mismatch");
  if (point_ && *point_ >= n) throw ModelError("point out of range");
  if (base_->ideal) {
    const auto& O = *base_->ideal;
    if (O.size() != n) throw ModelError("ideal relation size mismatch");
    bool any = false;
    for (StateId w = 0; w < n; ++w) {
      if (O[w].universe() != n) throw ModelError("ideal universe mismatch");
      O[w].for_each([&](StateId u) {
        any = true;
        if (!O[u].contains(w))
          throw ModelError("ideal relation not symmetric at (" + base_->states[w] + "," + base_->states[u] + ")");
        bool inside = false;
        for (const auto& r : rel_) inside = inside || r.same_block(w, u);
        if (ideal_cover && !inside)
          throw ModelError("ideal pair (" + base_->states[w] + "," + base_->states[u] +
                           ") lies outside every agent relation");
      });
    }
    if (!any) throw ModelError("ideal relation is empty");
  }
}

bool operator==(const Model& a, const Model& b) {
  if (a.rel_ != b.rel_ || a.point_ != b.point_) return false;
  if (a.base_ == b.base_) return true;
  return a.base_->states == b.base_->states && a.base_->agents == b.base_->agents &&
         a.base_->atoms == b.base_->atoms && a.base_->valuation == b.base_->valuation &&
         a.base_->ideal == b.base_->ideal;
}

PointedModel PointedModel::at_default(Model m) {
  StateId w = m.point().value_or(0);
  return PointedModel{std::move(m), w};
}

}  // namespace kpool
