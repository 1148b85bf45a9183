#include "kpool/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace kpool {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)); }

void require_group(const std::vector<Agent>& g, const char* what) {
  if (g.empty()) throw std::invalid_argument(std::string("empty agent group in ") + what);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g[i] == g[j]) throw std::invalid_argument("duplicate agent '" + g[i] + "' in " + what);
}

}  // namespace

bool is_macro(Op op) {
  switch (op) {
    case Op::Everybody:
    case Op::ResolveKnow:
    case Op::ResolveKnowFrom:
    case Op::PermitKnow:
    case Op::OughtKnow:
    case Op::PermitShare:
      return true;
    default:
      return false;
  }
}

bool is_modal(Op op) {
  switch (op) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Imp:
    case Op::Iff:
    case Op::Meta:
      return false;
    default:
      return true;
  }
}

Formula Formula::make(Op op, std::string name, std::vector<Agent> agents, std::vector<Formula> kids) {
  std::size_t h = std::hash<int>{}(static_cast<int>(op));
  h = mix(h, std::hash<std::string>{}(name));
  for (const auto& a : agents) h = mix(h, std::hash<std::string>{}(a));
  bool macro = is_macro(op);
  for (const auto& k : kids) {
    h = mix(h, k.hash());
    macro = macro || k.has_macro();
  }
  return Formula(std::make_shared<const Node>(Node{op, std::move(name), std::move(agents), std::move(kids), h, macro}));
}

Formula Formula::atom(std::string name) { return make(Op::Atom, std::move(name), {}, {}); }
Formula Formula::top() { return make(Op::Top, {}, {}, {}); }
Formula Formula::bot() { return make(Op::Bot, {}, {}, {}); }
Formula Formula::neg(Formula f) { return make(Op::Not, {}, {}, {std::move(f)}); }
Formula Formula::conj(Formula l, Formula r) { return make(Op::And, {}, {}, {std::move(l), std::move(r)}); }
Formula Formula::disj(Formula l, Formula r) { return make(Op::Or, {}, {}, {std::move(l), std::move(r)}); }
Formula Formula::imp(Formula l, Formula r) { return make(Op::Imp, {}, {}, {std::move(l), std::move(r)}); }
Formula Formula::iff(Formula l, Formula r) { return make(Op::Iff, {}, {}, {std::move(l), std::move(r)}); }

Formula Formula::know(Agent knower, std::vector<Agent> deps, Formula body) {
  std::vector<Agent> all{std::move(knower)};
  all.insert(all.end(), deps.begin(), deps.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i] == all[j])
        throw std::invalid_argument("dependency list of K{" + all[0] + "|...} repeats '" + all[j] +
                                    "' or names the knower");
  return make(Op::Know, {}, std::move(all), {std::move(body)});
}

Formula Formula::dist(std::vector<Agent> group, Formula body) {
  require_group(group, "D{...}");
  return make(Op::Dist, {}, std::move(group), {std::move(body)});
}

Formula Formula::share(Agent sender, Agent receiver, Formula body) {
  return make(Op::Share, {}, {std::move(sender), std::move(receiver)}, {std::move(body)});
}

Formula Formula::resolve_info(std::vector<Agent> group, Formula body) {
  require_group(group, "Ri{...}");
  return make(Op::ResolveInfo, {}, std::move(group), {std::move(body)});
}

Formula Formula::ideal() { return make(Op::Ideal, {}, {}, {}); }
Formula Formula::ok(Agent a) { return make(Op::Ok, {}, {std::move(a)}, {}); }

Formula Formula::everybody(std::vector<Agent> group, Formula body) {
  require_group(group, "E{...}");
  return make(Op::Everybody, {}, std::move(group), {std::move(body)});
}

Formula Formula::resolve_knowledge(std::vector<Agent> group, Formula body) {
  require_group(group, "Rk{...}");
  return make(Op::ResolveKnow, {}, std::move(group), {std::move(body)});
}

Formula Formula::resolve_knowledge_from(Agent first, std::vector<Agent> group, Formula body) {
  require_group(group, "Rk{a;...}");
  if (std::find(group.begin(), group.end(), first) == group.end())
    throw std::invalid_argument("Rk{" + first + ";...}: '" + first + "' is not a member of the group");
  std::vector<Agent> all{std::move(first)};
  all.insert(all.end(), group.begin(), group.end());
  return make(Op::ResolveKnowFrom, {}, std::move(all), {std::move(body)});
}

Formula Formula::permit_know(Agent a, Formula body) { return make(Op::PermitKnow, {}, {std::move(a)}, {std::move(body)}); }
Formula Formula::ought_know(Agent a, Formula body) { return make(Op::OughtKnow, {}, {std::move(a)}, {std::move(body)}); }
Formula Formula::permit_share(Agent sender, Agent receiver) {
  return make(Op::PermitShare, {}, {std::move(sender), std::move(receiver)}, {});
}
Formula Formula::meta(std::string name) { return make(Op::Meta, std::move(name), {}, {}); }

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& k : node_->kids) n += k.size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->op != b.node_->op) return false;
  return a.node_->name == b.node_->name && a.node_->agents == b.node_->agents && a.node_->kids == b.node_->kids;
}

namespace {

std::string join(const std::vector<Agent>& v, std::size_t from = 0) {
  std::string s;
  for (std::size_t i = from; i < v.size(); ++i) {
    if (i > from) s += ',';
    s += v[i];
  }
  return s;
}

void print_to(std::ostringstream& os, const Formula& f) {
  auto binary = [&](const char* sym) {
    os << '(';
    print_to(os, f.child(0));
    os << ' ' << sym << ' ';
    print_to(os, f.child(1));
    os << ')';
  };
  const auto& ag = f.agents();
  switch (f.op()) {
    case Op::Atom:
    case Op::Meta:
      os << f.name();
      return;
    case Op::Top:
      os << "true";
      return;
    case Op::Bot:
      os << "false";
      return;
    case Op::Not:
      os << '~';
      break;
    case Op::And:
      return binary("&");
    case Op::Or:
      return binary("|");
    case Op::Imp:
      return binary("->");
    case Op::Iff:
      return binary("<->");
    case Op::Know:
      os << "K{" << ag[0];
      if (ag.size() > 1) os << '|' << join(ag, 1);
      os << '}';
      break;
    case Op::Dist:
      os << "D{" << join(ag) << '}';
      break;
    case Op::Share:
      os << '[' << ag[0] << '>' << ag[1] << ']';
      break;
    case Op::ResolveInfo:
      os << "Ri{" << join(ag) << '}';
      break;
    case Op::Ideal:
      os << 'O';
      return;
    case Op::Ok:
      os << "Ok{" << ag[0] << '}';
      return;
    case Op::Everybody:
      os << "E{" << join(ag) << '}';
      break;
    case Op::ResolveKnow:
      os << "Rk{" << join(ag) << '}';
      break;
    case Op::ResolveKnowFrom:
      os << "Rk{" << ag[0] << ';' << join(ag, 1) << '}';
      break;
    case Op::PermitKnow:
      os << "P{" << ag[0] << '}';
      break;
    case Op::OughtKnow:
      os << "Ob{" << ag[0] << '}';
      break;
    case Op::PermitShare:
      os << "Perm(" << ag[0] << '>' << ag[1] << ')';
      return;
  }
  print_to(os, f.child(0));
}

Formula conj_all(std::vector<Formula> parts) {
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Formula::conj(acc, parts[i]);
  return acc;
}

Formula share_chain(const std::vector<std::pair<Agent, Agent>>& steps, Formula body) {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) body = Formula::share(it->first, it->second, body);
  return body;
}

}  // namespace

std::string print(const Formula& f) {
  std::ostringstream os;
  print_to(os, f);
  return os.str();
}

Formula expand(const Formula& f, std::vector<std::string>* notes) {
  const auto& ag = f.agents();
  auto sub = [&](std::size_t i) { return expand(f.child(i), notes); };
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
    case Op::Ideal:
    case Op::Ok:
    case Op::Meta:
      return f;
    case Op::Not:
      return Formula::neg(sub(0));
    case Op::And:
      return Formula::conj(sub(0), sub(1));
    case Op::Or:
      return Formula::disj(sub(0), sub(1));
    case Op::Imp:
      return Formula::imp(sub(0), sub(1));
    case Op::Iff:
      return Formula::iff(sub(0), sub(1));
    case Op::Know:
      return Formula::know(ag[0], f.deps(), sub(0));
    case Op::Dist:
      return Formula::dist(ag, sub(0));
    case Op::Share:
      return Formula::share(ag[0], ag[1], sub(0));
    case Op::ResolveInfo:
      return Formula::resolve_info(ag, sub(0));
    case Op::Everybody: {
      Formula body = sub(0);
      std::vector<Formula> parts;
      for (const auto& a : ag) parts.push_back(Formula::know(a, body));
      return conj_all(std::move(parts));
    }
    case Op::ResolveKnow:
    case Op::ResolveKnowFrom: {
      std::vector<Agent> order;
      if (f.op() == Op::ResolveKnowFrom) {
        order.push_back(ag[0]);
        for (std::size_t i = 1; i < ag.size(); ++i)
          if (ag[i] != ag[0]) order.push_back(ag[i]);
      } else {
        order = ag;
      }
      if (order.size() == 1 && notes)
        notes->push_back("degenerate " + print(f) + ": single-agent group, expanded to its body");
      std::vector<std::pair<Agent, Agent>> steps;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) steps.emplace_back(order[i], order[i + 1]);
      if (f.op() == Op::ResolveKnow)
        for (std::size_t i = order.size(); i-- > 1;) steps.emplace_back(order[i], order[i - 1]);
      return share_chain(steps, sub(0));
    }
    case Op::PermitKnow:
      return Formula::conj(Formula::know(ag[0], sub(0)), Formula::ok(ag[0]));
    case Op::OughtKnow:
      return Formula::neg(Formula::conj(Formula::know(ag[0], Formula::neg(sub(0))), Formula::ok(ag[0])));
    case Op::PermitShare:
      return Formula::share(ag[0], ag[1], Formula::ok(ag[1]));
  }
  return f;
}

bool is_boolean_positive(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
      return true;
    case Op::Not:
      return is_boolean_positive(f.child(0));
    case Op::And:
      return is_boolean_positive(f.child(0)) && is_boolean_positive(f.child(1));
    default:
      return false;
  }
}

namespace {
template <class F>
void visit(const Formula& f, F&& fn) {
  fn(f);
  for (const auto& k : f.children()) visit(k, fn);
}
}  // namespace

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (g.op() == Op::Atom) out.insert(g.name());
  });
  return out;
}

std::set<Agent> agents_of(const Formula& f) {
  std::set<Agent> out;
  visit(f, [&](const Formula& g) { out.insert(g.agents().begin(), g.agents().end()); });
  return out;
}

bool mentions_deontic(const Formula& f) {
  bool found = false;
  visit(f, [&](const Formula& g) {
    switch (g.op()) {
      case Op::Ideal:
      case Op::Ok:
      case Op::PermitKnow:
      case Op::OughtKnow:
      case Op::PermitShare:
        found = true;
        break;
      default:
        break;
    }
  });
  return found;
}

bool contains_macro(const Formula& f) { return f.has_macro(); }

}  // namespace kpool
