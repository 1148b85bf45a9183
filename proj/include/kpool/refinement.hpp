// Definability atoms, dependence closure and canonical forms.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpool/model.hpp"

namespace kpool {

/// Coarsest partition that respects the valuation and in which states of one
/// block see the same set of blocks through every agent's relation. These are
/// the modal-equivalence classes of the static language. The ideal relation
/// is not consulted.
Partition atoms_partition(const Model& m);

/// cl_a(w): union of the atoms blocks meeting rel[a][w]. Together with the
/// block relation it determines the dependence equivalence at w:
/// s ~ u iff both lie in cl_a(w) or they share a block.
StateSet dep_closure(const Model& m, const Partition& atoms, AgentId a, StateId w);
StateSet dep_closure(const Model& m, AgentId a, StateId w);

struct CanonicalForm {
  /// order[i] is the state placed at canonical position i.
  std::vector<StateId> order;
  std::string encoding;
};

/// Minimal encoding over all state orderings compatible with iterated colour
/// refinement (individualization-refinement search). Equal encodings iff the
/// (pointed) models are isomorphic with the same agent and atom names.
CanonicalForm canonical_form(const Model& m, std::optional<StateId> point);

std::string fingerprint(const PointedModel& pm);
/// Unpointed variant; ignores the model's designated point.
std::string fingerprint(const Model& m);

}  // namespace kpool
