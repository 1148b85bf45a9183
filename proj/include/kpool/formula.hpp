// Formulas of the knowledge-pooling language.
//
// Primitive constructors are the Boolean connectives, individual and
// agent-dependent knowledge K{b|a1,...,ak}, distributed knowledge D{G},
// the sharing box [a>b], information resolution Ri{G}, the ideal constant O
// and the per-agent permissibility atom Ok{a}. Everybody-knows, knowledge
// resolution and the deontic shorthands are macros removed by expand().
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kpool {

using Agent = std::string;

enum class Op {
  Atom,
  Top,
  Bot,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Know,         // agents = {knower, deps...}
  Dist,         // agents = group
  Share,        // agents = {sender, receiver}
  ResolveInfo,  // agents = group
  Ideal,
  Ok,  // agents = {a}
  // macros
  Everybody,            // E{G}
  ResolveKnow,          // Rk{G}
  ResolveKnowFrom,      // Rk{a;G}, agents = {a, G...}
  PermitKnow,           // P{a}
  OughtKnow,            // Ob{a}
  PermitShare,          // Perm(a>b), no body
  Meta,                 // schema metavariable, name = PHI/PSI/CHI
};

bool is_macro(Op op);
bool is_modal(Op op);

class Formula {
 public:
  static Formula atom(std::string name);
  static Formula top();
  static Formula bot();
  static Formula neg(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  /// Throws std::invalid_argument when deps repeats an agent or contains the knower.
  static Formula know(Agent knower, std::vector<Agent> deps, Formula body);
  static Formula know(Agent knower, Formula body) { return know(std::move(knower), {}, std::move(body)); }
  static Formula dist(std::vector<Agent> group, Formula body);
  static Formula share(Agent sender, Agent receiver, Formula body);
  static Formula resolve_info(std::vector<Agent> group, Formula body);
  static Formula ideal();
  static Formula ok(Agent a);

  static Formula everybody(std::vector<Agent> group, Formula body);
  static Formula resolve_knowledge(std::vector<Agent> group, Formula body);
  /// Requires `first` to be a member of `group`.
  static Formula resolve_knowledge_from(Agent first, std::vector<Agent> group, Formula body);
  static Formula permit_know(Agent a, Formula body);
  static Formula ought_know(Agent a, Formula body);
  static Formula permit_share(Agent sender, Agent receiver);
  static Formula meta(std::string name);

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  const std::vector<Agent>& agents() const { return node_->agents; }
  const std::vector<Formula>& children() const { return node_->kids; }
  const Formula& child(std::size_t i = 0) const { return node_->kids[i]; }

  // role accessors (valid only for the matching ops)
  const Agent& knower() const { return node_->agents.front(); }
  std::vector<Agent> deps() const { return {node_->agents.begin() + 1, node_->agents.end()}; }
  const Agent& sender() const { return node_->agents[0]; }
  const Agent& receiver() const { return node_->agents[1]; }

  std::size_t hash() const { return node_->hash; }
  /// True if this formula or a subformula is a macro operator.
  bool has_macro() const { return node_->macro; }
  std::size_t size() const;
  bool same_node(const Formula& o) const { return node_ == o.node_; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Agent> agents;
    std::vector<Formula> kids;
    std::size_t hash;
    bool macro;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, std::string name, std::vector<Agent> agents, std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Canonical concrete syntax; binary connectives are always parenthesized so
/// that parse(print(f)) == f.
std::string print(const Formula& f);

/// Removes every macro. `notes`, when given, receives one line per degenerate
/// expansion (e.g. Rk over a single agent).
Formula expand(const Formula& f, std::vector<std::string>* notes = nullptr);

/// Atoms, negation and conjunction only.
bool is_boolean_positive(const Formula& f);

std::set<std::string> atoms_of(const Formula& f);
std::set<Agent> agents_of(const Formula& f);
bool mentions_deontic(const Formula& f);
bool contains_macro(const Formula& f);

}  // namespace kpool
