#include "kpool/semantics.hpp"

#include "kpool/error.hpp"
#include "kpool/model_io.hpp"
#include "kpool/refinement.hpp"
#include "kpool/update.hpp"

namespace kpool {

struct Evaluator::Entry {
  Model model;
  std::optional<Partition> atoms;
  std::vector<std::optional<StateSet>> cl;  // index a * n + w
  std::unordered_map<Formula, StateSet, FormulaHash> memo;

  explicit Entry(Model m) : model(std::move(m)), cl(model.agent_count() * model.size()) {}

  const Partition& atoms_partition_() {
    if (!atoms) atoms = atoms_partition(model);
    return *atoms;
  }
  const StateSet& closure(AgentId a, StateId w) {
    auto& slot = cl[a * model.size() + w];
    if (!slot) slot = dep_closure(model, atoms_partition_(), a, w);
    return *slot;
  }
};

namespace {

template <class Scratch>
struct DepthGuard {
  int& depth;
  Scratch* scratch;
  ~DepthGuard() {
    if (--depth == 0) scratch->clear();
  }
};

}  // namespace

Evaluator::Evaluator(bool memoize) : memoize_(memoize) {}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

std::size_t Evaluator::cached_models() const { return cache_.size(); }
void Evaluator::clear() { cache_.clear(); }

Evaluator::Entry& Evaluator::entry(const Model& m) {
  if (!memoize_) {
    scratch_.push_back(std::make_unique<Entry>(m));
    return *scratch_.back();
  }
  auto key = m.structure_key();
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(std::move(key), std::make_unique<Entry>(m)).first;
  return *it->second;
}

void check_evaluable(const Model& m, const Formula& f) {
  switch (f.op()) {
    case Op::Meta:
      throw EvalError("schema metavariable '" + f.name() + "' cannot be evaluated");
    case Op::Atom:
      if (!m.find_atom(f.name())) throw EvalError("unknown atom '" + f.name() + "'");
      break;
    case Op::Ideal:
    case Op::Ok:
    case Op::PermitKnow:
    case Op::OughtKnow:
    case Op::PermitShare:
      if (!m.has_ideal()) throw EvalError("deontic operator in " + print(f) + " needs a model with an ideal relation");
      break;
    default:
      break;
  }
  for (const auto& a : f.agents())
    if (!m.find_agent(a)) throw EvalError("unknown agent '" + a + "'");
  for (const auto& k : f.children()) check_evaluable(m, k);
}

StateSet Evaluator::eval(Entry& e, const Formula& f) {
  if (memoize_) {
    auto it = e.memo.find(f);
    if (it != e.memo.end()) return it->second;
  }
  const Model& m = e.model;
  const std::size_t n = m.size();
  StateSet out(n);
  switch (f.op()) {
    case Op::Atom:
      out = m.atom_extension(*m.find_atom(f.name()));
      break;
    case Op::Top:
      out = StateSet::full(n);
      break;
    case Op::Bot:
      break;
    case Op::Not:
      out = eval(e, f.child()).complement();
      break;
    case Op::And:
      out = eval(e, f.child(0)) & eval(e, f.child(1));
      break;
    case Op::Or:
      out = eval(e, f.child(0)) | eval(e, f.child(1));
      break;
    case Op::Imp:
      out = eval(e, f.child(0)).complement() | eval(e, f.child(1));
      break;
    case Op::Iff: {
      StateSet l = eval(e, f.child(0)), r = eval(e, f.child(1));
      out = (l & r) | (l.complement() & r.complement());
      break;
    }
    case Op::Know: {
      const StateSet body = eval(e, f.child());
      const AgentId k = m.agent_id(f.knower());
      std::vector<AgentId> deps;
      for (std::size_t i = 1; i < f.agents().size(); ++i) deps.push_back(m.agent_id(f.agents()[i]));
      for (StateId w = 0; w < n; ++w) {
        StateSet s = m.cell(k, w);
        for (auto d : deps) s &= e.closure(d, w);
        if (s.is_subset_of(body)) out.insert(w);
      }
      break;
    }
    case Op::Dist: {
      const StateSet body = eval(e, f.child());
      std::vector<AgentId> g;
      for (const auto& a : f.agents()) g.push_back(m.agent_id(a));
      for (StateId w = 0; w < n; ++w) {
        StateSet s = m.cell(g[0], w);
        for (std::size_t i = 1; i < g.size(); ++i) s &= m.cell(g[i], w);
        if (s.is_subset_of(body)) out.insert(w);
      }
      break;
    }
    case Op::Share: {
      const AgentId a = m.agent_id(f.sender()), b = m.agent_id(f.receiver());
      const Partition& atoms = e.atoms_partition_();
      for (StateId w = 0; w < n; ++w) {
        Entry& next = entry(share_update(m, atoms, w, a, b));
        if (eval(next, f.child()).contains(w)) out.insert(w);
      }
      break;
    }
    case Op::ResolveInfo: {
      std::vector<AgentId> g;
      for (const auto& a : f.agents()) g.push_back(m.agent_id(a));
      Entry& next = entry(resolve_update(m, g));
      out = eval(next, f.child());
      break;
    }
    case Op::Ideal:
      for (StateId w = 0; w < n; ++w)
        if (!m.ideal_at(w).empty()) out.insert(w);
      break;
    case Op::Ok: {
      const AgentId a = m.agent_id(f.agents()[0]);
      for (StateId w = 0; w < n; ++w)
        if (m.cell(a, w).intersects(m.ideal_at(w))) out.insert(w);
      break;
    }
    case Op::Meta:
      throw EvalError("schema metavariable '" + f.name() + "' cannot be evaluated");
    default:
      out = eval(e, expand(f));
      break;
  }
  if (memoize_) e.memo.emplace(f, out);
  return out;
}

StateSet Evaluator::extension(const Model& m, const Formula& f) {
  const Formula g = contains_macro(f) ? expand(f) : f;
  check_evaluable(m, g);
  ++depth_;
  DepthGuard guard{depth_, &scratch_};
  return eval(entry(m), g);
}

bool Evaluator::holds(const Model& m, const Formula& f, StateId w) { return extension(m, f).contains(w); }

bool Evaluator::global_truth(const Model& m, const Formula& f) {
  return extension(m, f) == StateSet::full(m.size());
}

const Partition& Evaluator::atoms(const Model& m) {
  if (!memoize_) throw EvalError("atoms() requires a memoizing evaluator");
  return entry(m).atoms_partition_();
}

const StateSet& Evaluator::closure(const Model& m, AgentId a, StateId w) {
  if (!memoize_) throw EvalError("closure() requires a memoizing evaluator");
  return entry(m).closure(a, w);
}

void Evaluator::explain(const Model& m, const Formula& f, StateId w, std::vector<std::string>& out, int depth) {
  if (depth > 8) return;
  const std::string at = " at " + m.state_name(w);
  auto truth = [&](const Formula& g, StateId u) { return extension(m, g).contains(u); };
  switch (f.op()) {
    case Op::Atom:
      out.push_back(f.name() + " is false" + at);
      return;
    case Op::Bot:
      out.push_back("false" + at);
      return;
    case Op::Not:
      out.push_back(print(f.child()) + " holds" + at);
      return;
    case Op::And:
      for (const auto& k : f.children())
        if (!truth(k, w)) {
          out.push_back("conjunct " + print(k) + " fails" + at);
          explain(m, k, w, out, depth + 1);
          return;
        }
      return;
    case Op::Or:
      out.push_back("both disjuncts fail" + at);
      explain(m, f.child(0), w, out, depth + 1);
      explain(m, f.child(1), w, out, depth + 1);
      return;
    case Op::Imp:
      out.push_back("antecedent " + print(f.child(0)) + " holds and consequent fails" + at);
      explain(m, f.child(1), w, out, depth + 1);
      return;
    case Op::Iff:
      out.push_back(print(f.child(0)) + (truth(f.child(0), w) ? " holds" : " fails") + " but " + print(f.child(1)) +
                    (truth(f.child(1), w) ? " holds" : " fails") + at);
      return;
    case Op::Know:
    case Op::Dist: {
      StateSet s(m.size());
      if (f.op() == Op::Know) {
        s = m.cell(m.agent_id(f.knower()), w);
        const Partition atoms = atoms_partition(m);
        for (std::size_t i = 1; i < f.agents().size(); ++i) s &= dep_closure(m, atoms, m.agent_id(f.agents()[i]), w);
      } else {
        s = StateSet::full(m.size());
        for (const auto& a : f.agents()) s &= m.cell(m.agent_id(a), w);
      }
      const StateSet body = extension(m, f.child());
      const StateSet bad = s - body;
      if (auto u = bad.first()) {
        out.push_back("state " + m.state_name(*u) + " is accessible from " + m.state_name(w) + " and falsifies " +
                      print(f.child()));
        explain(m, f.child(), *u, out, depth + 1);
      }
      return;
    }
    case Op::Share: {
      Model next = share_update(m, w, m.agent_id(f.sender()), m.agent_id(f.receiver())).with_point(w);
      out.push_back("after [" + f.sender() + ">" + f.receiver() + "]" + at + " the model is:");
      out.push_back(save_model(next));
      out.push_back(print(f.child()) + " fails there" + at);
      explain(next, f.child(), w, out, depth + 1);
      return;
    }
    case Op::ResolveInfo: {
      Model next = resolve_update(m, f.agents()).with_point(w);
      out.push_back("after " + print(f).substr(0, print(f).find('}') + 1) + " the model is:");
      out.push_back(save_model(next));
      explain(next, f.child(), w, out, depth + 1);
      return;
    }
    case Op::Ideal:
      out.push_back("no ideal pair leaves " + m.state_name(w));
      return;
    case Op::Ok:
      out.push_back("no state in " + f.agents()[0] + "'s cell is ideally related to " + m.state_name(w));
      return;
    default:
      explain(m, expand(f), w, out, depth);
      return;
  }
}

CheckResult Evaluator::check(const PointedModel& pm, const Formula& f) {
  CheckResult r;
  const Formula g = contains_macro(f) ? expand(f) : f;
  r.value = holds(pm.model, g, pm.point);
  if (!r.value) {
    ++depth_;
    DepthGuard guard{depth_, &scratch_};
    explain(pm.model, g, pm.point, r.witness, 0);
  }
  return r;
}

StateSet extension(const Model& m, const Formula& f) { return Evaluator().extension(m, f); }
bool global_truth(const Model& m, const Formula& f) { return Evaluator().global_truth(m, f); }
CheckResult check(const PointedModel& pm, const Formula& f) { return Evaluator().check(pm, f); }

}  // namespace kpool
