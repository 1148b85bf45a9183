// Axiom schemata: formula templates over metavariables PHI/PSI/CHI and
// meta-agents (single capitals).
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kpool/formula.hpp"

namespace kpool {

enum class MetaDomain {
  Any,              // the whole formula pool
  BooleanPositive,  // atoms, negation and conjunction only
  Atoms,
};

struct Schema {
  std::string name;
  /// Templates instantiated with one shared substitution (rules use two:
  /// premise and conclusion).
  std::vector<Formula> patterns;
  MetaDomain domain = MetaDomain::Any;
  /// Distinct meta-agents denote distinct agents unless this is false, in
  /// which case only the pairs in `distinct` are kept apart.
  bool injective = true;
  std::vector<std::pair<Agent, Agent>> distinct;
};

/// Parses each pattern in schema mode.
Schema make_schema(std::string name, const std::vector<std::string>& patterns, MetaDomain domain = MetaDomain::Any,
                   bool injective = true, std::vector<std::pair<Agent, Agent>> distinct = {});

std::vector<std::string> meta_variables(const Schema& s);
std::vector<Agent> meta_agents(const Schema& s);

struct Substitution {
  std::map<std::string, Formula> formulas;
  std::map<Agent, Agent> agents;
};

/// Replaces metavariables and meta-agents. Throws std::invalid_argument when
/// the result breaks a constructor invariant (e.g. K{a|a}).
Formula substitute(const Formula& pattern, const Substitution& sub);

/// Calls fn(sub, instances) for every admissible substitution; instances
/// holds one formula per pattern. Substitutions that break a constructor
/// invariant are skipped. Meta-agent assignments vary slowest.
/// Throws SchemaError when there are fewer agents than injective meta-agents.
template <class Fn>
void for_each_instance(const Schema& s, const std::vector<Formula>& phis, const std::vector<Agent>& agents, Fn&& fn);

/// All instances of all patterns in enumeration order, deduplicated.
std::vector<Formula> instantiate(const Schema& s, const std::vector<Formula>& phis, const std::vector<Agent>& agents);

namespace detail {
std::vector<std::map<Agent, Agent>> agent_assignments(const Schema& s, const std::vector<Agent>& agents);
}

template <class Fn>
void for_each_instance(const Schema& s, const std::vector<Formula>& phis, const std::vector<Agent>& agents, Fn&& fn) {
  const auto vars = meta_variables(s);
  const auto assignments = detail::agent_assignments(s, agents);
  if (!vars.empty() && phis.empty()) return;
  for (const auto& ag : assignments) {
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
      Substitution sub;
      sub.agents = ag;
      for (std::size_t i = 0; i < vars.size(); ++i) sub.formulas.emplace(vars[i], phis[idx[i]]);
      std::vector<Formula> inst;
      bool ok = true;
      for (const auto& p : s.patterns) {
        try {
          inst.push_back(substitute(p, sub));
        } catch (const std::invalid_argument&) {
          ok = false;
          break;
        }
      }
      if (ok) fn(sub, inst);
      std::size_t k = vars.size();
      while (k > 0 && ++idx[k - 1] == phis.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
}

}  // namespace kpool
