#include "kpool/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kpool/error.hpp"

namespace kpool {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ModelError("'" + what + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ModelError("'" + what + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::pair<StateId, StateId> state_pair(const json& p, const std::vector<std::string>& states, const std::string& where) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
    throw ModelError(where + ": pairs must be two-element arrays of state names");
  auto find = [&](const std::string& s) {
    for (StateId i = 0; i < states.size(); ++i)
      if (states[i] == s) return i;
    throw ModelError(where + ": unknown state '" + s + "'");
  };
  return {find(p[0].get<std::string>()), find(p[1].get<std::string>())};
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

Model load_model(std::string_view text, const LoadOptions& opts) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model file must be a JSON object");
  static const std::set<std::string> known{"states", "agents", "atoms", "relations", "valuation", "ideal", "point"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) throw ModelError("unknown key '" + key + "'");
  for (const char* req : {"states", "agents"})
    if (!doc.contains(req)) throw ModelError(std::string("missing key '") + req + "'");

  auto states = string_list(doc["states"], "states");
  auto agents = string_list(doc["agents"], "agents");
  std::vector<std::string> atoms = doc.contains("atoms") ? string_list(doc["atoms"], "atoms") : std::vector<std::string>{};
  const std::size_t n = states.size();

  std::vector<Partition> rels;
  json relations = doc.value("relations", json::object());
  if (!relations.is_object()) throw ModelError("'relations' must be an object");
  for (const auto& [name, _] : relations.items())
    if (std::find(agents.begin(), agents.end(), name) == agents.end())
      throw ModelError("relations: unknown agent '" + name + "'");
  for (const auto& a : agents) {
    UnionFind uf(n);
    std::set<std::pair<StateId, StateId>> given;
    if (relations.contains(a)) {
      const auto& pairs = relations[a];
      if (!pairs.is_array()) throw ModelError("relations." + a + " must be an array of pairs");
      for (const auto& p : pairs) {
        auto [s, u] = state_pair(p, states, "relations." + a);
        given.insert({s, u});
        uf.unite(s, u);
      }
    }
    std::vector<std::size_t> labels(n);
    for (StateId s = 0; s < n; ++s) labels[s] = uf.find(s);
    Partition part(labels);
    if (opts.strict) {
      for (StateId s = 0; s < n; ++s)
        part.cell(s).for_each([&](StateId u) {
          if (!given.count({s, u}))
            throw ModelError("strict mode: relation of '" + a + "' is not an equivalence relation; missing (" +
                             states[s] + "," + states[u] + ")");
        });
    }
    rels.push_back(std::move(part));
  }

  std::vector<StateSet> valuation(atoms.size(), StateSet(n));
  json val = doc.value("valuation", json::object());
  if (!val.is_object()) throw ModelError("'valuation' must be an object");
  for (const auto& [sname, list] : val.items()) {
    auto it = std::find(states.begin(), states.end(), sname);
    if (it == states.end()) throw ModelError("valuation: unknown state '" + sname + "'");
    for (const auto& p : string_list(list, "valuation." + sname)) {
      auto at = std::find(atoms.begin(), atoms.end(), p);
      if (at == atoms.end()) throw ModelError("valuation." + sname + ": unknown atom '" + p + "'");
      valuation[static_cast<std::size_t>(at - atoms.begin())].insert(static_cast<StateId>(it - states.begin()));
    }
  }

  std::optional<Model::Ideal> ideal;
  if (doc.contains("ideal")) {
    const auto& pairs = doc["ideal"];
    if (!pairs.is_array()) throw ModelError("'ideal' must be an array of pairs");
    if (pairs.empty()) throw ModelError("ideal relation is empty");
    ideal.emplace(n, StateSet(n));
    for (const auto& p : pairs) {
      auto [s, u] = state_pair(p, states, "ideal");
      (*ideal)[s].insert(u);
      (*ideal)[u].insert(s);
    }
  }

  std::optional<StateId> point;
  if (doc.contains("point")) {
    if (!doc["point"].is_string()) throw ModelError("'point' must be a state name");
    auto it = std::find(states.begin(), states.end(), doc["point"].get<std::string>());
    if (it == states.end()) throw ModelError("point: unknown state '" + doc["point"].get<std::string>() + "'");
    point = static_cast<StateId>(it - states.begin());
  }

  return Model(std::move(states), std::move(agents), std::move(atoms), std::move(rels), std::move(valuation),
               std::move(ideal), point);
}

Model load_model_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str(), opts);
}

std::string save_model(const Model& m, int indent) {
  ordered_json doc;
  doc["states"] = m.states();
  doc["agents"] = m.agents();
  doc["atoms"] = m.atoms();
  ordered_json rels = ordered_json::object();
  for (AgentId a = 0; a < m.agent_count(); ++a) {
    ordered_json pairs = ordered_json::array();
    for (StateId s = 0; s < m.size(); ++s)
      m.cell(a, s).for_each([&](StateId u) { pairs.push_back({m.state_name(s), m.state_name(u)}); });
    rels[m.agents()[a]] = std::move(pairs);
  }
  doc["relations"] = std::move(rels);
  ordered_json val = ordered_json::object();
  for (StateId s = 0; s < m.size(); ++s) {
    ordered_json list = ordered_json::array();
    for (std::size_t p = 0; p < m.atom_count(); ++p)
      if (m.holds(p, s)) list.push_back(m.atoms()[p]);
    val[m.state_name(s)] = std::move(list);
  }
  doc["valuation"] = std::move(val);
  if (m.has_ideal()) {
    ordered_json pairs = ordered_json::array();
    for (StateId s = 0; s < m.size(); ++s)
      m.ideal_at(s).for_each([&](StateId u) { pairs.push_back({m.state_name(s), m.state_name(u)}); });
    doc["ideal"] = std::move(pairs);
  }
  if (m.point()) doc["point"] = m.state_name(*m.point());
  return doc.dump(indent);
}

void save_model_file(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write '" + path + "'");
  out << save_model(m) << '\n';
}

}  // namespace kpool
