#pragma once

#include <string_view>

#include "kpool/formula.hpp"

namespace kpool {

struct ParseOptions {
  /// Accept schema metavariables PHI/PSI/CHI and single-capital meta-agents (A, B, C, ...).
  bool allow_meta = false;
};

/// Parses the concrete syntax:
///
///   formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
///   or := and ("|" and)* ; and := unary ("&" unary)* ; unary := "~" unary | modal
///   modal := "K{" AGENT ("|" AGENTLIST)? "}" unary | "D{" AGENTLIST "}" unary
///          | "E{" AGENTLIST "}" unary | "[" AGENT ">" AGENT "]" unary
///          | "Ri{" AGENTLIST "}" unary | "Rk{" AGENTLIST "}" unary
///          | "Rk{" AGENT ";" AGENTLIST "}" unary | "P{" AGENT "}" unary
///          | "Ob{" AGENT "}" unary | "Perm(" AGENT ">" AGENT ")"
///          | "O" | "Ok{" AGENT "}" | "true" | "false" | ATOM | "(" formula ")"
///
/// Throws ParseError carrying line and column.
Formula parse(std::string_view text, const ParseOptions& opts = {});

/// [a-z][a-zA-Z0-9_]* and not a reserved word.
bool is_agent_name(std::string_view s);
bool is_atom_name(std::string_view s);

}  // namespace kpool
