// Model generation and semantic checking of axiom schemata.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kpool/formula.hpp"
#include "kpool/model.hpp"

namespace kpool {

struct GenConfig {
  std::size_t max_states = 5;
  std::size_t agents = 3;
  std::size_t atoms = 3;
  bool deontic = false;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
};

/// Deterministic in (cfg.seed, index). Agents are a, b, c, ..., atoms p, q,
/// r, s, ..., states s0, s1, .... Relations are random partitions; a deontic
/// model gets a random non-empty symmetric ideal inside the union of the
/// relations.
Model gen_model(const GenConfig& cfg, std::size_t index);

struct EnumConfig {
  std::size_t max_states = 3;
  std::size_t agents = 2;
  std::size_t atoms = 2;
  bool deontic = false;
};

/// Every model with 1..max_states states up to isomorphism, smallest first.
/// `fn` returns false to stop early. Returns the number of models visited.
std::size_t enumerate_models(const EnumConfig& cfg, const std::function<bool(const Model&)>& fn);
/// Cached full enumeration.
const std::vector<Model>& enumerated_models(const EnumConfig& cfg);

enum class Expect { Valid, Invalid, Open };
enum class SchemaKind {
  Axiom,        // globally true on every model
  Witness,      // infinitary disjunction checked through the canonical witness set
  Rule,         // premise globally true => conclusion globally true, per model
  Conditioned,  // axiom restricted to models meeting a semantic premise
};
enum class Verdict { ValidOnSample, Countermodel };

struct SchemaInfo {
  std::string name;
  SchemaKind kind;
  Expect expect;
  bool deontic;
  std::string statement;
};

/// Library in report order.
const std::vector<SchemaInfo>& schema_library();
const SchemaInfo* find_schema(const std::string& name);

struct Countermodel {
  Model model;
  Formula instance;
  StateId state = 0;
  std::string tier;  // "random #<i>" or "exhaustive"
  std::string note;  // rule premise, witness failure detail
};

struct LabReport {
  SchemaInfo schema;
  std::size_t models = 0;
  std::size_t instances = 0;
  Verdict verdict = Verdict::ValidOnSample;
  std::optional<Countermodel> countermodel;

  /// Valid schemas must hold on the sample, invalid ones must be refuted.
  /// Open schemas and rule-form checks never count against the build.
  bool as_expected() const;
  /// "rule-form failure (per-model)", "open-question finding", ... or empty.
  std::string label() const;
  std::string format(bool with_model = true) const;
};

struct LabConfig {
  GenConfig random;
  bool exhaustive = true;
  EnumConfig valid_tier{3, 2, 2, false};
  EnumConfig invalid_tier{4, 2, 2, true};
};

/// Throws std::invalid_argument for an unknown name.
LabReport check_schema(const std::string& name, const LabConfig& cfg = {});

struct GoldenFact {
  std::string id;
  std::string model;  // "pool", "pool_deontic" or "resolution"
  std::string formula;
  bool expected;
  std::string state = "s0";
};

struct GoldenResult {
  GoldenFact fact;
  bool actual = false;
  double millis = 0;
  bool pass() const { return actual == fact.expected; }
  std::string format() const;
};

const std::vector<GoldenFact>& golden_facts();
std::vector<GoldenResult> run_golden();
/// Built-in models: "pool", "pool_deontic", "resolution".
Model builtin_model(const std::string& name);

/// Compares the Ok{a} reading of the permission operators with the literal
/// ~K{a}~O reading on the built-in deontic facts.
std::vector<std::string> ok_reading_report();

struct SuiteResult {
  std::vector<GoldenResult> golden;
  std::vector<LabReport> schemas;
  bool ok() const;
};

SuiteResult run_suite(const LabConfig& cfg = {});

}  // namespace kpool
