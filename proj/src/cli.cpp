#include "kpool/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "kpool/error.hpp"
#include "kpool/lab.hpp"
#include "kpool/model_io.hpp"
#include "kpool/norms.hpp"
#include "kpool/parser.hpp"
#include "kpool/semantics.hpp"
#include "kpool/update.hpp"

namespace kpool::cli {

namespace {

StateId pick_state(const Model& m, const std::string& name) {
  if (!name.empty()) return m.state_id(name);
  return PointedModel::at_default(m).point;
}

std::vector<ShareStep> parse_shares(const std::string& spec) {
  std::vector<ShareStep> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    const auto gt = item.find('>');
    if (gt == std::string::npos || gt == 0 || gt + 1 == item.size())
      throw Error("bad share step '" + item + "', expected sender>receiver");
    out.emplace_back(item.substr(0, gt), item.substr(gt + 1));
  }
  if (out.empty()) throw Error("empty share list");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checker for knowledge pooling and permission"};
  app.name("kpool");
  app.require_subcommand(1);

  std::string model_path, formula, state, share, out_path, goal, schema = "all";
  std::size_t max_len = 4, samples = 500, max_states = 5;
  std::uint64_t seed = 1;
  bool free = false, strict = false, no_exhaustive = false, golden_only = false, quiet = false, list = false;

  auto* check = app.add_subcommand("check", "Evaluate a formula at a state");
  check->add_option("--model", model_path, "Model file")->required();
  check->add_option("--formula", formula, "Formula")->required();
  check->add_option("--state", state, "State (default: the model's point)");

  auto* update = app.add_subcommand("update", "Apply share updates at the point");
  update->add_option("--model", model_path, "Model file")->required();
  update->add_option("--share", share, "Steps a>b[,c>d...]")->required();
  update->add_option("--out", out_path, "Output file (default: stdout)");
  update->add_option("--state", state, "State to update at (default: the model's point)");

  auto* planc = app.add_subcommand("plan", "Search for a share sequence reaching a goal");
  planc->add_option("--model", model_path, "Model file")->required();
  planc->add_option("--goal", goal, "Goal formula")->required();
  planc->add_option("--max", max_len, "Maximum plan length")->capture_default_str();
  planc->add_option("--state", state, "Point (default: the model's point)");
  planc->add_flag("--free", free, "Do not require permissible steps");

  auto* lab = app.add_subcommand("lab", "Check axiom schemata on generated models");
  lab->add_option("--schema", schema, "Schema name or 'all'")->capture_default_str();
  lab->add_option("--seed", seed, "Random seed")->capture_default_str();
  lab->add_option("--samples", samples, "Random models per schema")->capture_default_str();
  lab->add_option("--max-states", max_states, "States per random model")->capture_default_str();
  lab->add_flag("--no-exhaustive", no_exhaustive, "Skip the exhaustive small-model tiers");
  lab->add_flag("--quiet", quiet, "Omit countermodel files from the report");
  lab->add_flag("--list", list, "List schema names and exit");

  auto* examples = app.add_subcommand("examples", "Run the golden facts and the schema suite");
  examples->add_flag("--golden-only", golden_only, "Skip the schema suite");

  auto* validate = app.add_subcommand("validate", "Validate a model file");
  validate->add_option("--model", model_path, "Model file")->required();
  validate->add_flag("--strict", strict, "Require relations to be listed as full equivalences");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (check->parsed()) {
      const Model m = load_model_file(model_path);
      const Formula f = parse(formula);
      const auto r = kpool::check(PointedModel{m, pick_state(m, state)}, f);
      out << (r.value ? "true" : "false") << '\n';
      for (const auto& line : r.witness) out << "  " << line << '\n';
      return r.value ? 0 : 1;
    }

    if (update->parsed()) {
      const Model m = load_model_file(model_path);
      const StateId w = pick_state(m, state);
      PointedModel pm = apply_sequence(PointedModel{m, w}, parse_shares(share));
      Model result = pm.model.with_point(m.point());
      try {
        result.validate(true);
      } catch (const ModelError& e) {
        err << "warning: " << e.what() << '\n';
      }
      if (out_path.empty()) out << save_model(result) << '\n';
      else save_model_file(result, out_path);
      return 0;
    }

    if (planc->parsed()) {
      const Model m = load_model_file(model_path);
      const Formula g = parse(goal);
      PlanOptions opts;
      opts.max_len = max_len;
      opts.require_permissible = !free;
      const auto p = plan(PointedModel{m, pick_state(m, state)}, g, opts);
      if (!p) {
        out << "no plan\n";
        return 1;
      }
      out << format_plan(*p);
      return 0;
    }

    if (lab->parsed()) {
      if (list) {
        for (const auto& s : schema_library()) out << s.name << "  " << s.statement << '\n';
        return 0;
      }
      LabConfig cfg;
      cfg.random.seed = seed;
      cfg.random.samples = samples;
      cfg.random.max_states = max_states;
      cfg.exhaustive = !no_exhaustive;
      std::vector<std::string> names;
      if (schema == "all")
        for (const auto& s : schema_library()) names.push_back(s.name);
      else if (!find_schema(schema))
        throw Error("unknown schema '" + schema + "'");
      else
        names.push_back(schema);
      bool ok = true;
      for (const auto& n : names) {
        const auto r = check_schema(n, cfg);
        ok = ok && r.as_expected();
        out << r.format(!quiet) << std::flush;
      }
      return ok ? 0 : 1;
    }

    if (examples->parsed()) {
      SuiteResult suite;
      suite.golden = run_golden();
      for (const auto& g : suite.golden) out << g.format() << '\n';
      for (const auto& line : ok_reading_report()) out << line << '\n';
      if (!golden_only) {
        for (const auto& s : schema_library()) {
          suite.schemas.push_back(check_schema(s.name));
          out << suite.schemas.back().format(false) << std::flush;
        }
      }
      const auto passed = std::count_if(suite.golden.begin(), suite.golden.end(), [](const auto& g) { return g.pass(); });
      out << "golden " << passed << "/" << suite.golden.size() << " passed\n";
      return suite.ok() ? 0 : 1;
    }

    if (validate->parsed()) {
      const Model m = load_model_file(model_path, LoadOptions{strict});
      out << "valid states=" << m.size() << " agents=" << m.agent_count() << " atoms=" << m.atom_count()
          << " ideal=" << (m.has_ideal() ? "yes" : "no") << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace kpool::cli
