#include "kpool/lab.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "kpool/error.hpp"
#include "kpool/model_io.hpp"
#include "kpool/parser.hpp"
#include "kpool/refinement.hpp"
#include "kpool/schema.hpp"
#include "kpool/semantics.hpp"
#include "kpool/update.hpp"

namespace kpool {

namespace {

std::vector<std::string> state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
  return out;
}

std::vector<Agent> agent_names(std::size_t k) {
  std::vector<Agent> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

std::vector<std::string> atom_names(std::size_t k) {
  // p, q, r, s, ... then wrap past z with a suffix.
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t c = ('p' - 'a') + i;
    out.push_back(std::string(1, static_cast<char>('a' + c % 26)) + (c >= 26 ? std::to_string(c / 26) : ""));
  }
  return out;
}

std::vector<StateSet> valuation_from_masks(const std::vector<unsigned>& masks, std::size_t atoms) {
  const std::size_t n = masks.size();
  std::vector<StateSet> val(atoms, StateSet(n));
  for (StateId s = 0; s < n; ++s)
    for (std::size_t i = 0; i < atoms; ++i)
      if ((masks[s] >> i) & 1u) val[i].insert(s);
  return val;
}

// Unordered pairs {s,u}, s <= u, related by some agent.
std::vector<std::pair<StateId, StateId>> linked_pairs(std::size_t n, const std::vector<Partition>& rels) {
  std::vector<std::pair<StateId, StateId>> out;
  for (StateId s = 0; s < n; ++s)
    for (StateId u = s; u < n; ++u)
      for (const auto& r : rels)
        if (r.same_block(s, u)) {
          out.emplace_back(s, u);
          break;
        }
  return out;
}

Model::Ideal ideal_from(std::size_t n, const std::vector<std::pair<StateId, StateId>>& pairs) {
  Model::Ideal o(n, StateSet(n));
  for (const auto& [s, u] : pairs) {
    o[s].insert(u);
    o[u].insert(s);
  }
  return o;
}

// Restricted growth strings of length n.
std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t maxl) {
    if (i == n) {
      out.emplace_back(rgs);
      return;
    }
    for (std::size_t l = 0; l <= maxl + 1 && (i > 0 || l == 0); ++l) {
      rgs[i] = l;
      rec(i + 1, std::max(maxl, l));
    }
  };
  if (n > 0) rec(0, 0);
  return out;
}

}  // namespace

Model gen_model(const GenConfig& cfg, std::size_t index) {
  if (cfg.max_states < 1) throw std::invalid_argument("max_states must be at least 1");
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(std::uint64_t{index} >> 32)};
  std::mt19937_64 rng(seq);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, cfg.max_states)(rng);

  std::vector<Partition> rels;
  for (std::size_t a = 0; a < cfg.agents; ++a) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = pick(rng);
    rels.emplace_back(labels);
  }
  std::bernoulli_distribution coin(0.5);
  std::vector<unsigned> masks(n, 0);
  for (auto& m : masks)
    for (std::size_t i = 0; i < cfg.atoms; ++i)
      if (coin(rng)) m |= 1u << i;

  std::optional<Model::Ideal> ideal;
  if (cfg.deontic) {
    auto pairs = linked_pairs(n, rels);
    std::bernoulli_distribution keep(0.35);
    std::vector<std::pair<StateId, StateId>> chosen;
    for (const auto& p : pairs)
      if (keep(rng)) chosen.push_back(p);
    if (chosen.empty()) chosen.push_back(pairs[std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng)]);
    ideal = ideal_from(n, chosen);
  }
  return Model(state_names(n), agent_names(cfg.agents), atom_names(cfg.atoms), std::move(rels),
               valuation_from_masks(masks, cfg.atoms), std::move(ideal));
}

std::size_t enumerate_models(const EnumConfig& cfg, const std::function<bool(const Model&)>& fn) {
  const auto agents = agent_names(cfg.agents);
  const auto atoms = atom_names(cfg.atoms);
  const unsigned masks_total = 1u << cfg.atoms;
  std::size_t visited = 0;

  for (std::size_t n = 1; n <= cfg.max_states; ++n) {
    std::unordered_set<std::string> seen;
    const auto parts = all_partitions(n);
    const auto names = state_names(n);

    // States are sorted by valuation mask; the relations range freely.
    std::vector<std::vector<unsigned>> valuations;
    std::vector<unsigned> cur(n, 0);
    std::function<void(std::size_t, unsigned)> vrec = [&](std::size_t i, unsigned lo) {
      if (i == n) {
        valuations.push_back(cur);
        return;
      }
      for (unsigned m = lo; m < masks_total; ++m) {
        cur[i] = m;
        vrec(i + 1, m);
      }
    };
    vrec(0, 0);

    std::vector<std::size_t> idx(cfg.agents, 0);
    for (;;) {
      std::vector<Partition> rels;
      for (auto i : idx) rels.push_back(parts[i]);
      const auto pairs = cfg.deontic ? linked_pairs(n, rels) : std::vector<std::pair<StateId, StateId>>{};

      for (const auto& masks : valuations) {
        const auto val = valuation_from_masks(masks, cfg.atoms);
        const std::size_t subsets = cfg.deontic ? (std::size_t{1} << pairs.size()) : 1;
        for (std::size_t bits = cfg.deontic ? 1 : 0; bits < std::max<std::size_t>(subsets, 1); ++bits) {
          std::optional<Model::Ideal> ideal;
          if (cfg.deontic) {
            std::vector<std::pair<StateId, StateId>> chosen;
            for (std::size_t i = 0; i < pairs.size(); ++i)
              if ((bits >> i) & 1u) chosen.push_back(pairs[i]);
            ideal = ideal_from(n, chosen);
          }
          Model m(names, agents, atoms, rels, val, std::move(ideal));
          if (!seen.insert(fingerprint(m)).second) continue;
          ++visited;
          if (!fn(m)) return visited;
        }
      }

      std::size_t k = cfg.agents;
      while (k > 0 && ++idx[k - 1] == parts.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  return visited;
}

const std::vector<Model>& enumerated_models(const EnumConfig& cfg) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, std::size_t, std::size_t, bool>, std::vector<Model>> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_tuple(cfg.max_states, cfg.agents, cfg.atoms, cfg.deontic);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Model> out;
  enumerate_models(cfg, [&](const Model& m) {
    out.push_back(m);
    return true;
  });
  return cache.emplace(key, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Formula pools

namespace {

std::vector<Formula> boolean_pool(const Model& m, std::size_t arity) {
  std::vector<Formula> out;
  const auto& at = m.atoms();
  for (const auto& x : at) out.push_back(Formula::atom(x));
  if (arity >= 3) {
    if (!at.empty()) out.push_back(Formula::neg(Formula::atom(at[0])));
    return out;
  }
  for (const auto& x : at) out.push_back(Formula::neg(Formula::atom(x)));
  const std::size_t lim = arity == 1 ? at.size() : std::min<std::size_t>(at.size(), 2);
  for (std::size_t i = 0; i < lim; ++i)
    for (std::size_t j = i + 1; j < lim; ++j) {
      const auto x = Formula::atom(at[i]);
      const auto y = Formula::atom(at[j]);
      out.push_back(Formula::conj(x, y));
      out.push_back(Formula::neg(Formula::conj(x, y)));
      if (arity == 1) out.push_back(Formula::conj(x, Formula::neg(y)));
    }
  return out;
}

const std::vector<std::string> kModalSingle = {
    "K{a}p",          "~K{b}p",          "K{a}~K{b}q",        "K{b|a}q",        "~K{a|b}(p -> q)",
    "D{a,b}(p -> q)", "[a>b]K{b}p",      "[b>a]~K{a}q",       "K{c}(p -> q)",   "K{b}p | K{b}~p",
    "Ri{a,b}K{a}q",   "K{a|b}~K{b}p",    "p & ~K{a}p",        "[a>c]K{c|b}q",
};
const std::vector<std::string> kModalPair = {"K{a}p", "~K{b}q", "[a>b]K{b}p", "p & ~K{a}p"};
const std::vector<std::string> kModalTriple = {"K{a}p", "[a>b]K{b}q"};
const std::vector<std::string> kDeonticSingle = {"O", "Ok{a}", "~Ok{b}", "P{b}p", "K{a}~O", "[a>b]Ok{b}"};
const std::vector<std::string> kDeonticPair = {"Ok{a}", "P{b}q", "O"};
const std::vector<std::string> kDeonticTriple = {"Ok{a}"};

bool fits(const Model& m, const Formula& f) {
  for (const auto& x : atoms_of(f))
    if (!m.find_atom(x)) return false;
  for (const auto& a : agents_of(f))
    if (!m.find_agent(a)) return false;
  return !mentions_deontic(f) || m.has_ideal();
}

void add_parsed(std::vector<Formula>& out, const Model& m, const std::vector<std::string>& src) {
  for (const auto& s : src) {
    auto f = parse(s);
    if (fits(m, f)) out.push_back(std::move(f));
  }
}

std::vector<Formula> any_pool(const Model& m, std::size_t arity, bool deontic) {
  std::vector<Formula> out;
  const auto& at = m.atoms();
  if (!at.empty()) {
    const auto p = Formula::atom(at[0]);
    out.push_back(p);
    out.push_back(Formula::neg(p));
    if (at.size() > 1) {
      const auto q = Formula::atom(at[1]);
      out.push_back(q);
      if (arity <= 2) out.push_back(Formula::conj(p, q));
      if (arity == 1) {
        out.push_back(Formula::conj(p, Formula::neg(q)));
        out.push_back(Formula::disj(p, q));
        out.push_back(Formula::imp(p, q));
      }
    }
  }
  if (arity == 1) {
    out.push_back(Formula::top());
    out.push_back(Formula::bot());
  }
  add_parsed(out, m, arity == 1 ? kModalSingle : arity == 2 ? kModalPair : kModalTriple);
  if (deontic) add_parsed(out, m, arity == 1 ? kDeonticSingle : arity == 2 ? kDeonticPair : kDeonticTriple);
  return out;
}

std::vector<Formula> pool_for(MetaDomain d, const Model& m, std::size_t arity, bool deontic) {
  switch (d) {
    case MetaDomain::Atoms: {
      std::vector<Formula> out;
      for (const auto& x : m.atoms()) out.push_back(Formula::atom(x));
      return out;
    }
    case MetaDomain::BooleanPositive:
      return boolean_pool(m, arity);
    case MetaDomain::Any:
      break;
  }
  return any_pool(m, arity, deontic);
}

// ---------------------------------------------------------------------------
// Schema library

struct Failure {
  StateId state;
  std::string note;
};

using WitnessCheck =
    std::function<std::optional<Failure>(const Model&, Evaluator&, const Substitution&, const StateSet& antecedent)>;

struct Def {
  SchemaInfo info;
  std::vector<Schema> variants;
  WitnessCheck witness;
  std::pair<Agent, Agent> premise;                          // Conditioned: cl_X = cl_Y everywhere
  std::function<std::vector<Formula>(const Model&)> custom;  // Axiom instances built from the model itself
};

std::string join_statement(const std::vector<std::string>& patterns, const std::string& sep = " ; ") {
  std::string s;
  for (const auto& p : patterns) s += (s.empty() ? "" : sep) + p;
  return s;
}

Def axiom(std::string name, Expect e, bool deontic, std::vector<std::string> patterns,
          MetaDomain d = MetaDomain::Any, bool injective = true, std::vector<std::pair<Agent, Agent>> distinct = {}) {
  Def def{{name, SchemaKind::Axiom, e, deontic, join_statement(patterns)}, {}, {}, {}, {}};
  for (const auto& p : patterns) def.variants.push_back(make_schema(name, {p}, d, injective, distinct));
  return def;
}

Def rule(std::string name, const std::string& premise, const std::string& conclusion, MetaDomain d = MetaDomain::Any) {
  Def def{{name, SchemaKind::Rule, Expect::Valid, false, premise + " / " + conclusion}, {}, {}, {}, {}};
  def.variants.push_back(make_schema(name, {premise, conclusion}, d));
  return def;
}

Def conditioned(std::string name, Expect e, const std::string& pattern, std::pair<Agent, Agent> same,
                std::vector<std::pair<Agent, Agent>> distinct) {
  Def def{{name, SchemaKind::Conditioned, e, true,
           pattern + "  given cl_" + same.first + " = cl_" + same.second + " everywhere"},
          {},
          {},
          same,
          {}};
  def.variants.push_back(make_schema(name, {pattern}, MetaDomain::Any, false, std::move(distinct)));
  return def;
}

// Cl: whenever K{A|B}PHI holds at w, psi = cl_B(w) is definable, B knows it
// and A's cell inside it satisfies PHI.
std::optional<Failure> cl_witness(const Model& m, Evaluator& ev, const Substitution& sub, const StateSet& ante) {
  const AgentId a = m.agent_id(sub.agents.at("A"));
  const AgentId b = m.agent_id(sub.agents.at("B"));
  const StateSet phi = ev.extension(m, sub.formulas.at("PHI"));
  std::optional<Failure> out;
  ante.for_each([&](StateId w) {
    if (out) return;
    const StateSet& psi = ev.closure(m, b, w);
    if (!m.cell(b, w).is_subset_of(psi)) out = Failure{w, "K{B}psi fails for psi = cl_B(w)"};
    else if (!(m.cell(a, w) & psi).is_subset_of(phi)) out = Failure{w, "K{A}(psi -> PHI) fails for psi = cl_B(w)"};
  });
  return out;
}

// Int+: whenever [A>B]K{B}PHI holds at w, psi = cl_A(w) works: A knows psi
// and B's cell inside psi satisfies PHI after the update.
std::optional<Failure> int_plus_witness(const Model& m, Evaluator& ev, const Substitution& sub, const StateSet& ante) {
  const AgentId a = m.agent_id(sub.agents.at("A"));
  const AgentId b = m.agent_id(sub.agents.at("B"));
  const Formula& phi = sub.formulas.at("PHI");
  std::optional<Failure> out;
  ante.for_each([&](StateId w) {
    if (out) return;
    const StateSet psi = ev.closure(m, a, w);
    if (!m.cell(a, w).is_subset_of(psi)) {
      out = Failure{w, "K{A}psi fails for psi = cl_A(w)"};
      return;
    }
    const Model after = share_update(m, ev.atoms(m), w, a, b);
    if (!(m.cell(b, w) & psi).is_subset_of(ev.extension(after, phi)))
      out = Failure{w, "K{B}(psi -> [A>B]PHI) fails for psi = cl_A(w)"};
  });
  return out;
}

std::vector<Formula> o_cover_instances(const Model& m) {
  if (!m.has_ideal() || m.agent_count() == 0) return {};
  std::optional<Formula> disj;
  for (const auto& a : m.agents()) {
    auto d = Formula::neg(Formula::know(a, {}, Formula::neg(Formula::ideal())));
    disj = disj ? Formula::disj(*disj, d) : d;
  }
  return {Formula::imp(Formula::ideal(), *disj)};
}

std::vector<Def> build_library() {
  using MD = MetaDomain;
  const auto V = Expect::Valid;
  const auto I = Expect::Invalid;
  std::vector<Def> L;

  // Agent-dependent knowledge.
  L.push_back(axiom("Int", V, false, {"K{A}PHI -> K{A|B}PHI"}));
  {
    Def d{{"Cl", SchemaKind::Witness, V, false, "K{A|B}PHI -> OR psi (K{B}psi & K{A}(psi -> PHI)), psi = cl_B(w)"},
          {make_schema("Cl", {"K{A|B}PHI"})},
          cl_witness,
          {},
          {}};
    L.push_back(std::move(d));
  }
  L.push_back(axiom("AK-T", V, false, {"K{A|B}PHI -> PHI"}));
  L.push_back(axiom("AK-4", V, false, {"K{A|B}PHI -> K{A|B}K{A|B}PHI"}));
  L.push_back(axiom("AK-5", V, false, {"~K{A|B}PHI -> K{A|B}~K{A|B}PHI"}));
  L.push_back(axiom("AK-K", V, false, {"K{A|B}(PHI -> PSI) -> (K{A|B}PHI -> K{A|B}PSI)"}));
  L.push_back(axiom("Chain-K-AK", V, false, {"K{B}PHI -> K{B|A}PHI"}));
  L.push_back(axiom("Chain-AK-D", V, false, {"K{B|A}PHI -> D{A,B}PHI"}));

  // Sharing.
  L.push_back(axiom("Inv", V, false, {"(PHI -> [A>B]PHI) & (~PHI -> [A>B]~PHI)"}, MD::Atoms));
  L.push_back(axiom("Rev", V, false, {"~[A>B]PHI -> [A>B]~PHI"}));
  L.push_back(axiom("D", V, false, {"[A>B]~PHI -> ~[A>B]PHI"}));
  {
    Def d{{"Int+", SchemaKind::Witness, V, false,
           "[A>B]K{B}PHI -> OR psi (K{A}psi & K{B}(psi -> [A>B]PHI)), psi = cl_A(w)"},
          {make_schema("Int+", {"[A>B]K{B}PHI"})},
          int_plus_witness,
          {},
          {}};
    L.push_back(std::move(d));
  }
  L.push_back(axiom("Int_+", V, false, {"K{B}[A>B]PHI -> [A>B]K{B}PHI"}));
  L.push_back(axiom("Int-", V, false, {"[A>B]K{C}PHI <-> K{C}[A>B]PHI"}, MD::Any, false, {{"B", "C"}}));
  L.push_back(axiom("K_share", V, false, {"[A>B](PHI -> PSI) -> ([A>B]PHI -> [A>B]PSI)"}));
  L.push_back(axiom("Rep", Expect::Open, false, {"[A>B]PHI <-> [A>B][A>B]PHI"}));
  L.push_back(rule("N_s", "PHI", "[A>B]PHI"));
  L.push_back(rule("Inc_share", "PHI -> [A>B]PSI", "K{A}PHI -> [A>B]K{B}PSI"));
  L.push_back(axiom("C", V, false, {"[A>B]PHI & [A>B]PSI -> [A>B](PHI & PSI)"}));
  L.push_back(rule("RK", "PHI & PSI -> CHI", "[A>B]PHI & [A>B]PSI -> [A>B]CHI"));
  L.push_back(rule("RM_share", "PHI -> [A>B]PSI", "K{C}PHI -> [A>B]K{C}PSI"));
  L.push_back(axiom("Sharing", V, false, {"K{A}PHI -> [A>B]K{B}PHI"}, MD::BooleanPositive));
  L.push_back(axiom("Remain", V, false, {"K{C}PHI -> [A>B]K{C}PHI"}, MD::BooleanPositive, false));
  L.push_back(axiom("Boolean", V, false, {"PHI <-> [A>B]PHI"}, MD::BooleanPositive));
  L.push_back(axiom("Step", V, false, {"[A>B]K{B}PHI -> [A>B][B>C]K{C}PHI"}, MD::BooleanPositive, false));
  L.push_back(axiom("Dist", V, false, {"[A>B]K{B}PHI -> D{A,B}[A>B]PHI"}));

  // Resolution.
  L.push_back(axiom("Int^R", V, false,
                    {"Rk{A,B}K{A}PHI -> Ri{A,B}K{A}PHI", "Rk{A,B}K{C}PHI -> Ri{A,B}K{C}PHI",
                     "Rk{A,B,C}K{A}PHI -> Ri{A,B,C}K{A}PHI", "Rk{A,B,C}K{B}PHI -> Ri{A,B,C}K{B}PHI",
                     "Rk{A,B,C}K{C}PHI -> Ri{A,B,C}K{C}PHI"},
                    MD::BooleanPositive));
  L.push_back(axiom("Chain-E-K", V, false, {"E{A,B}PHI -> K{A}PHI", "E{A,B,C}PHI -> K{C}PHI"}, MD::BooleanPositive));
  L.push_back(axiom("Res-1", V, false, {"K{A}PHI -> Rk{A;A,B}E{A,B}PHI", "K{A}PHI -> Rk{A;A,B,C}E{A,B,C}PHI"},
                    MD::BooleanPositive));
  L.push_back(axiom("Res-2", V, false,
                    {"Rk{A;A,B}E{A,B}PHI -> Rk{A,B}E{A,B}PHI", "Rk{A;A,B,C}E{A,B,C}PHI -> Rk{A,B,C}E{A,B,C}PHI"},
                    MD::BooleanPositive));
  L.push_back(axiom("Res-3", V, false, {"E{A,B}PHI -> Rk{A,B}E{A,B}PHI", "E{A,B,C}PHI -> Rk{A,B,C}E{A,B,C}PHI"},
                    MD::BooleanPositive));
  L.push_back(axiom("Res-4", V, false,
                    {"Rk{A,B}E{A,B}PHI -> Ri{A,B}E{A,B}PHI", "Rk{A,B,C}E{A,B,C}PHI -> Ri{A,B,C}E{A,B,C}PHI"},
                    MD::BooleanPositive));

  // Permission.
  L.push_back(axiom("P-RFC", V, true, {"P{A}PHI & P{A}PSI -> P{A}(PHI | PSI)"}));
  L.push_back(axiom("P-MC", V, true, {"P{A}(PHI & PSI) <-> P{A}PHI & P{A}PSI"}));
  L.push_back(axiom("P-K", V, true, {"P{A}(PHI -> PSI) -> (P{A}PHI -> P{A}PSI)"}));
  L.push_back(axiom("P-D", V, true, {"~P{A}false"}));
  L.push_back(axiom("P-T", V, true, {"P{A}PHI -> PHI"}));
  L.push_back(axiom("P-4", V, true, {"P{A}PHI -> P{A}P{A}PHI"}));
  L.push_back(axiom("FCP1", I, true, {"P{A}(PHI | PSI) -> P{A}PHI & P{A}PSI"}));
  L.push_back(axiom("FCP2", I, true, {"P{A}PHI -> P{A}(PHI & PSI)"}));
  L.push_back(axiom("P-5", I, true, {"Ob{A}PHI -> P{A}Ob{A}PHI"}));
  L.push_back(axiom("Perm-Chain", V, true, {"[A>B]Perm(B>C) -> Perm(A>C)"}));
  L.push_back(conditioned("Perm-Sender", V, "Perm(A>C) <-> Perm(B>C)", {"A", "B"}, {}));
  L.push_back(conditioned("Perm-Recipient", I, "Perm(A>B) <-> Perm(A>C)", {"B", "C"}, {{"B", "C"}}));
  {
    Def d{{"O-cover", SchemaKind::Axiom, V, true, "O -> OR_a ~K{a}~O"}, {}, {}, {}, o_cover_instances};
    L.push_back(std::move(d));
  }
  return L;
}

const std::vector<Def>& library() {
  static const std::vector<Def> lib = build_library();
  return lib;
}

const Def& find_def(const std::string& name) {
  for (const auto& d : library())
    if (d.info.name == name) return d;
  throw std::invalid_argument("unknown schema '" + name + "'");
}

// ---------------------------------------------------------------------------
// Checking

struct Instance {
  Substitution sub;
  std::vector<Formula> formulas;  // macro-expanded
  Formula shown;                  // as instantiated, for reports
};

struct Run {
  const Def& def;
  std::size_t models = 0;
  std::unordered_set<Formula, FormulaHash> instances;
  std::optional<Countermodel> cm;
  // Instances depend only on the model's signature; keyed by variant and signature.
  std::map<std::string, std::vector<Instance>> cache;
};

const std::vector<Instance>& instances_for(Run& run, std::size_t v, const Model& m, bool deontic) {
  std::string key = std::to_string(v) + (deontic ? "|o|" : "|-|");
  for (const auto& a : m.agents()) key += a + ",";
  key += "|";
  for (const auto& x : m.atoms()) key += x + ",";
  auto it = run.cache.find(key);
  if (it != run.cache.end()) return it->second;

  const Schema& s = run.def.variants[v];
  std::vector<Instance> out;
  const bool rule = run.def.info.kind == SchemaKind::Rule;
  try {
    for_each_instance(s, pool_for(s.domain, m, meta_variables(s).size(), deontic), m.agents(),
                      [&](const Substitution& sub, const std::vector<Formula>& inst) {
                        std::vector<Formula> ex;
                        for (const auto& f : inst) ex.push_back(expand(f));
                        out.push_back({sub, std::move(ex), rule ? inst[1] : inst[0]});
                      });
  } catch (const SchemaError&) {
    // Fewer agents than distinct meta-agents: no instances on this signature.
  }
  return run.cache.emplace(std::move(key), std::move(out)).first->second;
}

bool same_closures(const Model& m, Evaluator& ev, AgentId x, AgentId y) {
  for (StateId w = 0; w < m.size(); ++w)
    if (!(ev.closure(m, x, w) == ev.closure(m, y, w))) return false;
  return true;
}

// Checks every instance on one model; returns true if the model produced at
// least one instance.
bool check_model(Run& run, const Model& m, const std::string& tier) {
  const Def& def = run.def;
  Evaluator ev;
  bool used = false;
  auto fail = [&](const Formula& f, StateId w, std::string note) {
    run.cm = Countermodel{m, f, w, tier, std::move(note)};
  };

  if (def.custom) {
    for (const auto& f : def.custom(m)) {
      used = true;
      run.instances.insert(f);
      const StateSet bad = ev.extension(m, f).complement();
      if (auto w = bad.first()) {
        fail(f, *w, "");
        break;
      }
    }
    return used;
  }

  const bool deontic = def.info.deontic && m.has_ideal();
  for (std::size_t v = 0; v < def.variants.size() && !run.cm; ++v) {
    for (const auto& in : instances_for(run, v, m, deontic)) {
      if (run.cm) break;
      const auto& sub = in.sub;
      const auto& inst = in.formulas;
      switch (def.info.kind) {
        case SchemaKind::Axiom: {
          used = true;
          run.instances.insert(in.shown);
          if (auto w = ev.extension(m, inst[0]).complement().first()) fail(in.shown, *w, "");
          break;
        }
        case SchemaKind::Conditioned: {
          const AgentId x = m.agent_id(sub.agents.at(def.premise.first));
          const AgentId y = m.agent_id(sub.agents.at(def.premise.second));
          if (!same_closures(m, ev, x, y)) continue;
          used = true;
          run.instances.insert(in.shown);
          if (auto w = ev.extension(m, inst[0]).complement().first())
            fail(in.shown, *w,
                 "premise: cl_" + sub.agents.at(def.premise.first) + " = cl_" + sub.agents.at(def.premise.second));
          break;
        }
        case SchemaKind::Rule: {
          used = true;
          run.instances.insert(in.shown);
          if (!ev.global_truth(m, inst[0])) continue;
          if (auto w = ev.extension(m, inst[1]).complement().first())
            fail(in.shown, *w, "premise globally true: " + print(inst[0]));
          break;
        }
        case SchemaKind::Witness: {
          used = true;
          run.instances.insert(in.shown);
          if (auto f = def.witness(m, ev, sub, ev.extension(m, inst[0]))) fail(in.shown, f->state, f->note);
          break;
        }
      }
    }
  }
  return used;
}

void visit(Run& run, const Model& m, const std::string& tier) {
  if (check_model(run, m, tier)) ++run.models;
}

}  // namespace

const std::vector<SchemaInfo>& schema_library() {
  static const std::vector<SchemaInfo> infos = [] {
    std::vector<SchemaInfo> out;
    for (const auto& d : library()) out.push_back(d.info);
    return out;
  }();
  return infos;
}

const SchemaInfo* find_schema(const std::string& name) {
  for (const auto& s : schema_library())
    if (s.name == name) return &s;
  return nullptr;
}

LabReport check_schema(const std::string& name, const LabConfig& cfg) {
  const Def& def = find_def(name);
  Run run{def, 0, {}, std::nullopt, {}};

  if (def.info.expect == Expect::Invalid) {
    if (cfg.exhaustive) {
      EnumConfig ec = cfg.invalid_tier;
      ec.deontic = ec.deontic || def.info.deontic;
      enumerate_models(ec, [&](const Model& m) {
        visit(run, m, "exhaustive");
        return !run.cm;
      });
    }
  } else {
    if (cfg.exhaustive) {
      EnumConfig ec = cfg.valid_tier;
      ec.deontic = def.info.deontic;
      for (const auto& m : enumerated_models(ec)) {
        visit(run, m, "exhaustive");
        if (run.cm) break;
      }
    }
  }
  if (!run.cm) {
    GenConfig gc = cfg.random;
    gc.deontic = def.info.deontic;
    for (std::size_t i = 0; i < gc.samples && !run.cm; ++i) visit(run, gen_model(gc, i), "random #" + std::to_string(i));
  }

  LabReport r;
  r.schema = def.info;
  r.models = run.models;
  r.instances = run.instances.size();
  r.verdict = run.cm ? Verdict::Countermodel : Verdict::ValidOnSample;
  r.countermodel = std::move(run.cm);
  return r;
}

bool LabReport::as_expected() const {
  if (schema.kind == SchemaKind::Rule || schema.expect == Expect::Open) return true;
  return (verdict == Verdict::Countermodel) == (schema.expect == Expect::Invalid);
}

std::string LabReport::label() const {
  const bool cm = verdict == Verdict::Countermodel;
  if (schema.kind == SchemaKind::Rule) return cm ? "rule-form failure (per-model)" : "";
  if (schema.expect == Expect::Open) return cm ? "open-question finding" : "";
  if (schema.expect == Expect::Valid) return cm ? "unexpected countermodel" : "";
  return cm ? "" : "no countermodel found";
}

std::string LabReport::format(bool with_model) const {
  static const char* expects[] = {"valid", "invalid", "open"};
  std::ostringstream os;
  os << "SCHEMA " << schema.name << " models=" << models << " instances=" << instances
     << " verdict=" << (verdict == Verdict::Countermodel ? "countermodel" : "valid-on-sample")
     << " expected=" << (schema.kind == SchemaKind::Rule ? "rule" : expects[static_cast<int>(schema.expect)])
     << " status=" << (as_expected() ? "ok" : "FAIL");
  if (auto l = label(); !l.empty()) os << " note=\"" << l << '"';
  os << '\n';
  if (countermodel) {
    if (with_model) os << save_model(countermodel->model) << '\n';
    os << "instance=" << print(countermodel->instance)
       << " state=" << countermodel->model.state_name(countermodel->state) << " tier=" << countermodel->tier << '\n';
    if (!countermodel->note.empty()) os << "detail=" << countermodel->note << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Golden facts

namespace {

const char* kPool = R"({
  "states": ["s0", "s1", "s2", "s3", "s4"],
  "agents": ["a", "b", "c"],
  "atoms": ["p", "q", "r"],
  "relations": {
    "a": [["s0", "s1"], ["s0", "s2"]],
    "b": [["s0", "s3"], ["s0", "s4"]],
    "c": [["s0", "s1"], ["s0", "s2"], ["s0", "s3"], ["s0", "s4"]]
  },
  "valuation": {"s0": ["p", "q", "r"], "s1": ["p", "q"], "s2": ["q", "r"], "s3": ["p"], "s4": []},
  "point": "s0"
})";

const char* kPoolIdeal = R"([["s1", "s0"], ["s3", "s0"]])";

const char* kResolution = R"({
  "states": ["s0", "s1", "s2", "s3"],
  "agents": ["a", "b"],
  "atoms": ["p", "q", "r"],
  "relations": {"a": [["s0", "s1"]], "b": [["s0", "s2"], ["s0", "s3"]]},
  "valuation": {"s0": ["p", "q", "r"], "s1": ["p"], "s2": ["p", "r"], "s3": ["p", "q"]},
  "point": "s0"
})";

}  // namespace

Model builtin_model(const std::string& name) {
  if (name == "pool") return load_model(kPool);
  if (name == "resolution") return load_model(kResolution);
  if (name == "pool_deontic") {
    std::string text = kPool;
    text.insert(text.rfind("\"point\""), std::string("\"ideal\": ") + kPoolIdeal + ",\n  ");
    return load_model(text);
  }
  throw std::invalid_argument("unknown built-in model '" + name + "'");
}

const std::vector<GoldenFact>& golden_facts() {
  static const std::vector<GoldenFact> facts = {
      {"know.Ka1", "pool", "K{a}(p->q)", true},
      {"know.Ka2", "pool", "K{a}(q->r)", false},
      {"know.Ka3", "pool", "K{a}(p->r)", false},
      {"know.Kb1", "pool", "K{b}(p->q)", false},
      {"know.Kb2", "pool", "K{b}(q->r)", true},
      {"know.Kb3", "pool", "K{b}(p->r)", false},
      {"know.Kc1", "pool", "K{c}(p->q)", false},
      {"know.Kc2", "pool", "K{c}(q->r)", false},
      {"know.Kc3", "pool", "K{c}(p->r)", false},
      {"know.Kac1", "pool", "K{a|c}(p->q)", true},
      {"know.Kac2", "pool", "K{a|c}(q->r)", false},
      {"know.Kac3", "pool", "K{a|c}(p->r)", false},
      {"know.Kca1", "pool", "K{c|a}(p->q)", true},
      {"know.Kca2", "pool", "K{c|a}(q->r)", false},
      {"know.Kca3", "pool", "K{c|a}(p->r)", false},
      {"know.Kcab1", "pool", "K{c|a,b}(p->q)", true},
      {"know.Kcab2", "pool", "K{c|a,b}(q->r)", true},
      {"know.Kcab3", "pool", "K{c|a,b}(p->r)", true},
      {"know.Kcab-p", "pool", "K{c|a,b}p", false},
      {"know.D1", "pool", "D{a,b,c}(p->q)", true},
      {"know.D2", "pool", "D{a,b,c}(q->r)", true},
      {"know.D3", "pool", "D{a,b,c}(p->r)", true},
      {"know.D4", "pool", "D{a,b,c}p", true},
      {"know.D5", "pool", "D{a,b,c}q", true},
      {"know.D6", "pool", "D{a,b,c}r", true},
      {"moore.1", "pool", "K{c|a}((p->q) & ~K{c}(p->q))", true},
      {"moore.2", "pool", "[a>c]K{c|a}((p->q) & ~K{c}(p->q))", false},
      {"moore.3", "pool", "[a>c]K{c|a}((p->q) & K{c}(p->q))", true},
      {"resolve.1", "resolution", "Ri{a,b}E{a,b}(p&q&r)", true},
      {"resolve.2", "resolution", "Rk{a,b}E{a,b}p", true},
      {"resolve.3", "resolution", "Rk{a,b}E{a,b}q", false},
      {"resolve.4", "resolution", "Rk{a,b}E{a,b}r", false},
      {"share.share1", "pool", "[a>c]K{c}(p->q)", true},
      {"share.share2", "pool", "[b>c]K{c}(q->r)", true},
      {"share.1", "pool", "Rk{a;a,b,c}E{a,b,c}(p->q)", true},
      {"share.2", "pool", "Rk{a;a,b,c}E{a,b,c}(q->r)", false},
      {"share.3", "pool", "Rk{b;a,b,c}E{a,b,c}(q->r)", true},
      {"share.4", "pool", "Rk{b;a,b,c}E{a,b,c}(p->q)", false},
      {"share.5", "pool", "Rk{a,b,c}(E{a,b,c}(p->q) & E{a,b,c}(q->r) & E{a,b,c}(p->r))", true},
      {"ideal.s0", "pool_deontic", "O", true, "s0"},
      {"ideal.s1", "pool_deontic", "O", true, "s1"},
      {"ideal.s2", "pool_deontic", "O", false, "s2"},
      {"ideal.s3", "pool_deontic", "O", true, "s3"},
      {"ideal.s4", "pool_deontic", "O", false, "s4"},
      {"permit.1", "pool_deontic", "[a>c]P{c}(p->q)", true},
      {"permit.2", "pool_deontic", "[b>c]P{c}(q->r)", true},
      {"permit.3", "pool_deontic", "[a>c][b>c]P{c}(p->r)", false},
      {"perm-share.1", "pool_deontic", "[a>c][b>c]Ok{c}", false},
      {"perm-share.2", "pool_deontic", "[a>c]Perm(b>c)", false},
  };
  return facts;
}

std::string GoldenResult::format() const {
  std::ostringstream os;
  os << "GOLDEN " << fact.id << ' ' << fact.model << '@' << fact.state << " expected=" << (fact.expected ? "true" : "false")
     << " actual=" << (actual ? "true" : "false") << ' ' << (pass() ? "PASS" : "FAIL") << "  " << fact.formula;
  return os.str();
}

std::vector<GoldenResult> run_golden() {
  std::map<std::string, Model> models;
  for (const char* n : {"pool", "pool_deontic", "resolution"}) models.emplace(n, builtin_model(n));
  Evaluator ev;
  std::vector<GoldenResult> out;
  for (const auto& f : golden_facts()) {
    const auto t0 = std::chrono::steady_clock::now();
    const Model& m = models.at(f.model);
    GoldenResult r{f, ev.holds(m, parse(f.formula), m.state_id(f.state)), 0};
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> ok_reading_report() {
  struct Row {
    const char* id;
    const char* ok;
    const char* literal;
    bool expected;
  };
  static const Row rows[] = {
      {"permit.1", "[a>c](K{c}(p->q) & Ok{c})", "[a>c](K{c}(p->q) & ~K{c}~O)", true},
      {"permit.2", "[b>c](K{c}(q->r) & Ok{c})", "[b>c](K{c}(q->r) & ~K{c}~O)", true},
      {"permit.3", "[a>c][b>c](K{c}(p->r) & Ok{c})", "[a>c][b>c](K{c}(p->r) & ~K{c}~O)", false},
      {"perm-share.1", "[a>c][b>c]Ok{c}", "[a>c][b>c]~K{c}~O", false},
  };
  const Model m = builtin_model("pool_deontic");
  Evaluator ev;
  std::vector<std::string> out;
  for (const auto& r : rows) {
    const bool ok = ev.holds(m, parse(r.ok), 0);
    const bool lit = ev.holds(m, parse(r.literal), 0);
    std::ostringstream os;
    os << "READING " << r.id << " expected=" << (r.expected ? "true" : "false") << " ok=" << (ok ? "true" : "false")
       << " literal=" << (lit ? "true" : "false");
    out.push_back(os.str());
  }
  return out;
}

bool SuiteResult::ok() const {
  return std::all_of(golden.begin(), golden.end(), [](const auto& g) { return g.pass(); }) &&
         std::all_of(schemas.begin(), schemas.end(), [](const auto& s) { return s.as_expected(); });
}

SuiteResult run_suite(const LabConfig& cfg) {
  SuiteResult r;
  r.golden = run_golden();
  for (const auto& s : schema_library()) r.schemas.push_back(check_schema(s.name, cfg));
  return r;
}

}  // namespace kpool
