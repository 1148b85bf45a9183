#include "kpool/refinement.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>

namespace kpool {

namespace {

using Color = std::size_t;
using Signature = std::vector<std::size_t>;
constexpr std::size_t kSep = std::numeric_limits<std::size_t>::max();

std::size_t count_colors(const std::vector<Color>& c) {
  std::vector<Color> v(c);
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

// Renumbers by sorted signature, so new colors are ordered consistently with
// the old ones (every signature starts with the old color).
std::vector<Color> renumber(const std::vector<Signature>& sigs) {
  std::map<Signature, Color> ids;
  for (const auto& s : sigs) ids.emplace(s, 0);
  Color next = 0;
  for (auto& [_, id] : ids) id = next++;
  std::vector<Color> out(sigs.size());
  for (std::size_t i = 0; i < sigs.size(); ++i) out[i] = ids.at(sigs[i]);
  return out;
}

std::vector<Color> valuation_colors(const Model& m) {
  std::vector<Signature> sigs(m.size());
  for (StateId s = 0; s < m.size(); ++s)
    for (std::size_t p = 0; p < m.atom_count(); ++p) sigs[s].push_back(m.holds(p, s) ? 1 : 0);
  return renumber(sigs);
}

// One refinement round. `multiset` keeps colour multiplicities (needed for
// isomorphism invariants); without it cells contribute colour sets, which is
// what bisimilarity cares about.
std::vector<Color> refine_once(const Model& m, const std::vector<Color>& color, bool multiset, bool use_ideal) {
  const std::size_t n = m.size();
  std::vector<Signature> sigs(n);
  for (StateId s = 0; s < n; ++s) {
    Signature& sig = sigs[s];
    sig.push_back(color[s]);
    auto add_set = [&](const StateSet& set) {
      std::vector<Color> cs;
      set.for_each([&](StateId u) { cs.push_back(color[u]); });
      std::sort(cs.begin(), cs.end());
      if (!multiset) cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
      sig.push_back(kSep);
      sig.insert(sig.end(), cs.begin(), cs.end());
    };
    for (AgentId a = 0; a < m.agent_count(); ++a) add_set(m.cell(a, s));
    if (use_ideal && m.has_ideal()) add_set(m.ideal_at(s));
  }
  return renumber(sigs);
}

std::vector<Color> refine_fixpoint(const Model& m, std::vector<Color> color, bool multiset, bool use_ideal) {
  std::size_t k = count_colors(color);
  for (;;) {
    auto next = refine_once(m, color, multiset, use_ideal);
    std::size_t k2 = count_colors(next);
    color = std::move(next);
    if (k2 == k) return color;
    k = k2;
  }
}

using Code = std::vector<std::uint32_t>;

Code encode(const Model& m, const std::vector<StateId>& order, std::optional<StateId> point) {
  const std::size_t n = m.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  Code c;
  c.push_back(static_cast<std::uint32_t>(n));
  c.push_back(point ? static_cast<std::uint32_t>(pos[*point]) : 0xffffffffu);
  for (std::size_t p = 0; p < m.atom_count(); ++p)
    for (std::size_t i = 0; i < n; ++i) c.push_back(m.holds(p, order[i]) ? 1u : 0u);
  for (AgentId a = 0; a < m.agent_count(); ++a) {
    std::map<std::size_t, std::uint32_t> relabel;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, _] = relabel.try_emplace(m.rel(a).block_of(order[i]), static_cast<std::uint32_t>(relabel.size()));
      c.push_back(it->second);
    }
  }
  c.push_back(m.has_ideal() ? 1u : 0u);
  if (m.has_ideal())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c.push_back(m.ideal_at(order[i]).contains(order[j]) ? 1u : 0u);
  return c;
}

struct Search {
  const Model& m;
  std::optional<StateId> point;
  std::optional<Code> best;
  std::vector<StateId> best_order;

  void run(std::vector<Color> color) {
    color = refine_fixpoint(m, std::move(color), true, true);
    const std::size_t n = m.size();
    std::vector<std::size_t> count(n, 0);
    for (auto c : color) ++count[c];
    std::optional<Color> target;
    for (Color c = 0; c < n; ++c)
      if (count[c] > 1) {
        target = c;
        break;
      }
    if (!target) {
      std::vector<StateId> order(n);
      for (StateId s = 0; s < n; ++s) order[color[s]] = s;
      Code code = encode(m, order, point);
      if (!best || code < *best) {
        best = std::move(code);
        best_order = std::move(order);
      }
      return;
    }
    for (StateId s = 0; s < n; ++s) {
      if (color[s] != *target) continue;
      std::vector<Color> next(n);
      for (StateId x = 0; x < n; ++x) next[x] = 2 * color[x] + (color[x] == *target && x != s ? 1 : 0);
      run(std::move(next));
    }
  }
};

}  // namespace

Partition atoms_partition(const Model& m) {
  return Partition(refine_fixpoint(m, valuation_colors(m), false, false));
}

StateSet dep_closure(const Model& m, const Partition& atoms, AgentId a, StateId w) {
  StateSet out(m.size());
  std::vector<bool> seen(atoms.block_count(), false);
  m.cell(a, w).for_each([&](StateId u) {
    auto b = atoms.block_of(u);
    if (!seen[b]) {
      seen[b] = true;
      out |= atoms.block(b);
    }
  });
  return out;
}

StateSet dep_closure(const Model& m, AgentId a, StateId w) { return dep_closure(m, atoms_partition(m), a, w); }

CanonicalForm canonical_form(const Model& m, std::optional<StateId> point) {
  std::vector<Signature> init(m.size());
  for (StateId s = 0; s < m.size(); ++s) {
    init[s].push_back(point && *point == s ? 0 : 1);
    for (std::size_t p = 0; p < m.atom_count(); ++p) init[s].push_back(m.holds(p, s) ? 1 : 0);
  }
  Search search{m, point, std::nullopt, {}};
  search.run(renumber(init));

  std::string enc;
  for (const auto& a : m.agents()) enc += a + ',';
  enc += ';';
  for (const auto& p : m.atoms()) enc += p + ',';
  enc += ';';
  for (auto x : *search.best)
    for (int k = 0; k < 4; ++k) enc.push_back(static_cast<char>((x >> (8 * k)) & 0xffu));
  return CanonicalForm{std::move(search.best_order), std::move(enc)};
}

std::string fingerprint(const PointedModel& pm) { return canonical_form(pm.model, pm.point).encoding; }
std::string fingerprint(const Model& m) { return canonical_form(m, std::nullopt).encoding; }

}  // namespace kpool
