#include <gtest/gtest.h>

#include "kpool/lab.hpp"
#include "kpool/model_io.hpp"
#include "kpool/refinement.hpp"
#include "kpool/semantics.hpp"

using namespace kpool;

namespace {

LabConfig small() {
  LabConfig cfg;
  cfg.random.samples = 60;
  return cfg;
}

}  // namespace

TEST(GenModel, Deterministic) {
  GenConfig cfg;
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(save_model(gen_model(cfg, i)), save_model(gen_model(cfg, i)));
  cfg.seed = 2;
  bool differs = false;
  for (std::size_t i = 0; i < 20; ++i) differs = differs || save_model(gen_model(cfg, i)) != save_model(gen_model(GenConfig{}, i));
  EXPECT_TRUE(differs);
}

TEST(GenModel, DeonticIdealIsInsideTheRelations) {
  GenConfig cfg;
  cfg.deontic = true;
  for (std::size_t i = 0; i < 200; ++i) {
    const Model m = gen_model(cfg, i);
    ASSERT_TRUE(m.has_ideal());
    bool any = false;
    for (StateId w = 0; w < m.size(); ++w) {
      any = any || !m.ideal_at(w).empty();
      m.ideal_at(w).for_each([&](StateId u) {
        EXPECT_TRUE(m.ideal_at(u).contains(w));
        bool linked = false;
        for (AgentId a = 0; a < m.agent_count(); ++a) linked = linked || m.rel(a).same_block(w, u);
        EXPECT_TRUE(linked);
      });
    }
    EXPECT_TRUE(any);
    EXPECT_NO_THROW(m.validate());
  }
}

TEST(GenModel, SingleState) {
  GenConfig cfg;
  cfg.max_states = 1;
  const Model m = gen_model(cfg, 3);
  EXPECT_EQ(m.size(), 1u);
  for (AgentId a = 0; a < m.agent_count(); ++a) EXPECT_EQ(m.rel(a).block_count(), 1u);
}

TEST(GenModel, RejectsZeroStates) {
  GenConfig cfg;
  cfg.max_states = 0;
  EXPECT_THROW(gen_model(cfg, 0), std::invalid_argument);
}

TEST(Enumerate, NoIsomorphicDuplicates) {
  std::set<std::string> seen;
  const auto& models = enumerated_models(EnumConfig{3, 2, 1, false});
  for (const auto& m : models) EXPECT_TRUE(seen.insert(fingerprint(m)).second);
  EXPECT_FALSE(models.empty());
}

TEST(Enumerate, DeonticModelsCarryIdeals) {
  std::size_t n = enumerate_models(EnumConfig{2, 1, 1, true}, [](const Model& m) {
    EXPECT_TRUE(m.has_ideal());
    return true;
  });
  EXPECT_GT(n, 0u);
}

TEST(Lab, LibraryNamesAreUnique) {
  std::set<std::string> names;
  for (const auto& s : schema_library()) EXPECT_TRUE(names.insert(s.name).second) << s.name;
  EXPECT_NE(find_schema("Sharing"), nullptr);
  EXPECT_EQ(find_schema("nope"), nullptr);
}

TEST(Lab, SharingIsValidOnSample) {
  const auto r = check_schema("Sharing", small());
  EXPECT_EQ(r.verdict, Verdict::ValidOnSample);
  EXPECT_FALSE(r.countermodel);
  EXPECT_GT(r.models, 60u);
  EXPECT_GT(r.instances, 0u);
}

TEST(Lab, IntIsValidOnSample) { EXPECT_EQ(check_schema("Int", small()).verdict, Verdict::ValidOnSample); }

TEST(Lab, Fcp1HasCountermodel) {
  const auto r = check_schema("FCP1", small());
  ASSERT_EQ(r.verdict, Verdict::Countermodel);
  ASSERT_TRUE(r.countermodel);
  EXPECT_EQ(r.countermodel->tier, "exhaustive");
  EXPECT_FALSE(Evaluator().holds(r.countermodel->model, r.countermodel->instance, r.countermodel->state));
  EXPECT_TRUE(r.as_expected());
}

TEST(Lab, PermRecipientCountermodelMeetsThePremise) {
  const auto r = check_schema("Perm-Recipient", small());
  ASSERT_TRUE(r.countermodel);
  EXPECT_NE(r.countermodel->note.find("premise"), std::string::npos);
  EXPECT_LE(r.countermodel->model.size(), 4u);
}

TEST(Lab, UnknownSchema) { EXPECT_THROW(check_schema("Nope"), std::invalid_argument); }

TEST(Lab, ReportFormat) {
  const auto ok = check_schema("Inv", small());
  EXPECT_EQ(ok.format().rfind("SCHEMA Inv models=", 0), 0u);
  EXPECT_NE(ok.format().find("verdict=valid-on-sample"), std::string::npos);
  const auto bad = check_schema("P-5", small()).format();
  EXPECT_NE(bad.find("verdict=countermodel"), std::string::npos);
  EXPECT_NE(bad.find("\"states\""), std::string::npos);
  EXPECT_NE(bad.find("instance="), std::string::npos);
  EXPECT_NE(bad.find(" state="), std::string::npos);
}

TEST(Lab, RuleFailuresAreLabelled) {
  LabReport r;
  r.schema = *find_schema("N_s");
  r.verdict = Verdict::Countermodel;
  EXPECT_EQ(r.label(), "rule-form failure (per-model)");
  EXPECT_TRUE(r.as_expected());
  r.schema = *find_schema("Rep");
  EXPECT_EQ(r.label(), "open-question finding");
  EXPECT_TRUE(r.as_expected());
  r.schema = *find_schema("Int");
  EXPECT_FALSE(r.as_expected());
}

TEST(Lab, ReportsAreDeterministic) {
  EXPECT_EQ(check_schema("Rev", small()).format(), check_schema("Rev", small()).format());
  EXPECT_EQ(check_schema("P-4", small()).format(), check_schema("P-4", small()).format());
}

TEST(Lab, OkReadingReport) {
  const auto lines = ok_reading_report();
  ASSERT_FALSE(lines.empty());
  for (const auto& l : lines) EXPECT_EQ(l.rfind("READING ", 0), 0u);
}
