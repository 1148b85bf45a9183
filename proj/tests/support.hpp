// Shared helpers for the test suites.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "kpool/formula.hpp"
#include "kpool/model.hpp"
#include "kpool/model_io.hpp"

namespace kpool::test {

inline std::string data_path(const std::string& name) { return std::string(KPOOL_TEST_DATA) + "/" + name; }

inline Model pool() { return load_model_file(data_path("pool.json")); }
inline Model pool_deontic() { return load_model_file(data_path("pool_deontic.json")); }
inline Model resolution() { return load_model_file(data_path("resolution.json")); }

struct FormulaGen {
  std::vector<Agent> agents{"a", "b", "c"};
  std::vector<std::string> atoms{"p", "q", "r"};
  bool deontic = false;
  bool macros = true;
  bool dynamic = true;

  template <class Rng>
  Formula leaf(Rng& rng) const {
    const std::size_t extra = deontic ? 4 : 2;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, atoms.size() + extra - 1)(rng);
    if (k < atoms.size()) return Formula::atom(atoms[k]);
    switch (k - atoms.size()) {
      case 0:
        return Formula::top();
      case 1:
        return Formula::bot();
      case 2:
        return Formula::ideal();
      default:
        return Formula::ok(pick(rng));
    }
  }

  template <class Rng>
  Agent pick(Rng& rng) const {
    return agents[std::uniform_int_distribution<std::size_t>(0, agents.size() - 1)(rng)];
  }

  template <class Rng>
  std::vector<Agent> group(Rng& rng, std::size_t min = 1) const {
    std::vector<Agent> g = agents;
    std::shuffle(g.begin(), g.end(), rng);
    g.resize(std::uniform_int_distribution<std::size_t>(min, agents.size())(rng));
    return g;
  }

  template <class Rng>
  Formula operator()(Rng& rng, int depth) const {
    if (depth <= 0) return leaf(rng);
    const int kinds = macros ? 18 : 12;
    const int k = std::uniform_int_distribution<int>(0, kinds - 1)(rng);
    auto sub = [&] { return (*this)(rng, depth - 1); };
    switch (k) {
      case 0:
        return leaf(rng);
      case 1:
        return Formula::neg(sub());
      case 2:
        return Formula::conj(sub(), sub());
      case 3:
        return Formula::disj(sub(), sub());
      case 4:
        return Formula::imp(sub(), sub());
      case 5:
        return Formula::iff(sub(), sub());
      case 6:
        return Formula::know(pick(rng), sub());
      case 7: {
        auto g = group(rng, 2);
        const Agent knower = g.front();
        g.erase(g.begin());
        return Formula::know(knower, g, sub());
      }
      case 8:
        return Formula::dist(group(rng), sub());
      case 9:
        if (!dynamic) return Formula::know(pick(rng), sub());
        return Formula::share(pick(rng), pick(rng), sub());
      case 10:
        if (!dynamic) return Formula::neg(sub());
        return Formula::resolve_info(group(rng), sub());
      case 11:
        return Formula::know(pick(rng), sub());
      case 12:
        return Formula::everybody(group(rng), sub());
      case 13:
        if (!dynamic) return Formula::everybody(group(rng), sub());
        return Formula::resolve_knowledge(group(rng), sub());
      case 14: {
        if (!dynamic) return Formula::everybody(group(rng), sub());
        auto g = group(rng);
        return Formula::resolve_knowledge_from(g[0], g, sub());
      }
      case 15:
        return deontic ? Formula::permit_know(pick(rng), sub()) : sub();
      case 16:
        return deontic ? Formula::ought_know(pick(rng), sub()) : sub();
      default:
        return deontic && dynamic ? Formula::permit_share(pick(rng), pick(rng)) : leaf(rng);
    }
  }
};

/// Random Boolean-positive formula (atoms, ~, &).
template <class Rng>
Formula boolean_positive(Rng& rng, const std::vector<std::string>& atoms, int depth) {
  const int k = depth <= 0 ? 0 : std::uniform_int_distribution<int>(0, 2)(rng);
  if (k == 0) return Formula::atom(atoms[std::uniform_int_distribution<std::size_t>(0, atoms.size() - 1)(rng)]);
  if (k == 1) return Formula::neg(boolean_positive(rng, atoms, depth - 1));
  return Formula::conj(boolean_positive(rng, atoms, depth - 1), boolean_positive(rng, atoms, depth - 1));
}

/// Same model with states renamed and reordered by `perm` (new index i holds
/// old state perm[i]).
inline Model permute(const Model& m, const std::vector<StateId>& perm) {
  const std::size_t n = m.size();
  std::vector<StateId> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[perm[i]] = i;
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = m.state_name(perm[i]);
  std::vector<Partition> rels;
  for (const auto& r : m.relations()) {
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = r.block_of(perm[i]);
    rels.emplace_back(labels);
  }
  auto map_set = [&](const StateSet& s) {
    StateSet out(n);
    s.for_each([&](StateId x) { out.insert(pos[x]); });
    return out;
  };
  std::vector<StateSet> val;
  for (const auto& v : m.valuation()) val.push_back(map_set(v));
  std::optional<Model::Ideal> ideal;
  if (m.has_ideal()) {
    ideal.emplace(n, StateSet(n));
    for (std::size_t i = 0; i < n; ++i) (*ideal)[i] = map_set(m.ideal_at(perm[i]));
  }
  std::optional<StateId> point;
  if (m.point()) point = pos[*m.point()];
  return Model(names, m.agents(), m.atoms(), rels, val, ideal, point);
}

}  // namespace kpool::test
