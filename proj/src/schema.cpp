#include "kpool/schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "kpool/error.hpp"
#include "kpool/parser.hpp"

namespace kpool {

namespace {

bool is_meta_agent(const Agent& a) { return a.size() == 1 && std::isupper(static_cast<unsigned char>(a[0])); }

void collect(const Formula& f, std::set<std::string>& vars, std::set<Agent>& agents) {
  if (f.op() == Op::Meta) vars.insert(f.name());
  for (const auto& a : f.agents())
    if (is_meta_agent(a)) agents.insert(a);
  for (const auto& k : f.children()) collect(k, vars, agents);
}

std::vector<Agent> map_agents(const std::vector<Agent>& v, const Substitution& sub) {
  std::vector<Agent> out;
  out.reserve(v.size());
  for (const auto& a : v) {
    auto it = sub.agents.find(a);
    out.push_back(it == sub.agents.end() ? a : it->second);
  }
  return out;
}

}  // namespace

Schema make_schema(std::string name, const std::vector<std::string>& patterns, MetaDomain domain, bool injective,
                   std::vector<std::pair<Agent, Agent>> distinct) {
  Schema s{std::move(name), {}, domain, injective, std::move(distinct)};
  for (const auto& p : patterns) s.patterns.push_back(parse(p, ParseOptions{true}));
  return s;
}

std::vector<std::string> meta_variables(const Schema& s) {
  std::set<std::string> vars;
  std::set<Agent> agents;
  for (const auto& p : s.patterns) collect(p, vars, agents);
  // PHI, PSI, CHI in that order.
  std::vector<std::string> out;
  for (const char* v : {"PHI", "PSI", "CHI"})
    if (vars.count(v)) out.push_back(v);
  return out;
}

std::vector<Agent> meta_agents(const Schema& s) {
  std::set<std::string> vars;
  std::set<Agent> agents;
  for (const auto& p : s.patterns) collect(p, vars, agents);
  return {agents.begin(), agents.end()};
}

Formula substitute(const Formula& f, const Substitution& sub) {
  auto k = [&](std::size_t i) { return substitute(f.child(i), sub); };
  const auto ag = map_agents(f.agents(), sub);
  switch (f.op()) {
    case Op::Meta: {
      auto it = sub.formulas.find(f.name());
      if (it == sub.formulas.end()) throw SchemaError("unbound metavariable " + f.name());
      return it->second;
    }
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
    case Op::Ideal:
      return f;
    case Op::Ok:
      return Formula::ok(ag[0]);
    case Op::Not:
      return Formula::neg(k(0));
    case Op::And:
      return Formula::conj(k(0), k(1));
    case Op::Or:
      return Formula::disj(k(0), k(1));
    case Op::Imp:
      return Formula::imp(k(0), k(1));
    case Op::Iff:
      return Formula::iff(k(0), k(1));
    case Op::Know:
      return Formula::know(ag[0], {ag.begin() + 1, ag.end()}, k(0));
    case Op::Dist:
      return Formula::dist(ag, k(0));
    case Op::Share:
      return Formula::share(ag[0], ag[1], k(0));
    case Op::ResolveInfo:
      return Formula::resolve_info(ag, k(0));
    case Op::Everybody:
      return Formula::everybody(ag, k(0));
    case Op::ResolveKnow:
      return Formula::resolve_knowledge(ag, k(0));
    case Op::ResolveKnowFrom:
      return Formula::resolve_knowledge_from(ag[0], {ag.begin() + 1, ag.end()}, k(0));
    case Op::PermitKnow:
      return Formula::permit_know(ag[0], k(0));
    case Op::OughtKnow:
      return Formula::ought_know(ag[0], k(0));
    case Op::PermitShare:
      return Formula::permit_share(ag[0], ag[1]);
  }
  return f;
}

namespace detail {

std::vector<std::map<Agent, Agent>> agent_assignments(const Schema& s, const std::vector<Agent>& agents) {
  const auto metas = meta_agents(s);
  if (s.injective && metas.size() > agents.size())
    throw SchemaError("schema " + s.name + " needs " + std::to_string(metas.size()) + " distinct agents, got " +
                      std::to_string(agents.size()));
  std::vector<std::map<Agent, Agent>> out;
  if (agents.empty() && !metas.empty()) return out;
  std::vector<std::size_t> idx(metas.size(), 0);
  for (;;) {
    std::map<Agent, Agent> m;
    for (std::size_t i = 0; i < metas.size(); ++i) m[metas[i]] = agents[idx[i]];
    bool ok = true;
    if (s.injective) {
      std::set<std::size_t> used(idx.begin(), idx.end());
      ok = used.size() == idx.size();
    } else {
      for (const auto& [x, y] : s.distinct)
        if (m.count(x) && m.count(y) && m[x] == m[y]) ok = false;
    }
    if (ok) out.push_back(std::move(m));
    std::size_t k = metas.size();
    while (k > 0 && ++idx[k - 1] == agents.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

}  // namespace detail

std::vector<Formula> instantiate(const Schema& s, const std::vector<Formula>& phis, const std::vector<Agent>& agents) {
  std::vector<Formula> out;
  std::unordered_set<Formula, FormulaHash> seen;
  for_each_instance(s, phis, agents, [&](const Substitution&, const std::vector<Formula>& inst) {
    for (const auto& f : inst)
      if (seen.insert(f).second) out.push_back(f);
  });
  return out;
}

}  // namespace kpool
