// JSON model files.
//
//   { "states": ["s0", ...], "agents": ["a", ...], "atoms": ["p", ...],
//     "relations": { "a": [["s0","s1"], ...], ... },
//     "valuation": { "s0": ["p","q"], ... },
//     "ideal": [["s1","s0"], ...],      (optional)
//     "point": "s0" }                    (optional)
#pragma once

#include <string>
#include <string_view>

#include "kpool/model.hpp"

namespace kpool {

struct LoadOptions {
  /// Require every relation pair list to already be an equivalence relation
  /// instead of closing it.
  bool strict = false;
};

/// Throws ModelError on malformed input or violated invariants.
Model load_model(std::string_view text, const LoadOptions& opts = {});
Model load_model_file(const std::string& path, const LoadOptions& opts = {});

/// Full pair lists (reflexive pairs included) so the output also loads in
/// strict mode; the ideal is written in both directions.
std::string save_model(const Model& m, int indent = 2);
void save_model_file(const Model& m, const std::string& path);

}  // namespace kpool
