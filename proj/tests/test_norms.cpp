#include <gtest/gtest.h>

#include "kpool/error.hpp"
#include "kpool/norms.hpp"
#include "kpool/parser.hpp"
#include "support.hpp"

using namespace kpool;

namespace {

PointedModel deontic() { return PointedModel::at_default(test::pool_deontic()); }

}  // namespace

TEST(Permission, DirectShareFromA) { EXPECT_TRUE(permissible_share(deontic(), "a", "c")); }

TEST(Permission, BToCAfterAToC) {
  const auto pm = apply_sequence(deontic(), {{"a", "c"}});
  EXPECT_FALSE(permissible_share(pm, "b", "c"));
}

TEST(Permission, SelfShareEqualsOk) {
  const auto pm = deontic();
  for (const auto& a : pm.model.agents())
    EXPECT_EQ(permissible_share(pm, a, a), Evaluator().holds(pm.model, Formula::ok(a), pm.point));
}

TEST(Permission, NeedsIdeal) {
  EXPECT_THROW(permissible_share(PointedModel::at_default(test::pool()), "a", "c"), EvalError);
}

TEST(Planner, PermissibleOneStep) {
  const auto p = plan(deontic(), parse("K{c}(p->q)"), PlanOptions{3, true});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->steps, (std::vector<ShareStep>{{"a", "c"}}));
  EXPECT_EQ(p->verdicts, std::vector<bool>{true});
  EXPECT_TRUE(p->achieved);
}

TEST(Planner, NoPermissiblePlanForPToR) {
  EXPECT_FALSE(plan(deontic(), parse("K{c}(p->r)"), PlanOptions{4, true}));
}

TEST(Planner, FreePlanHasLengthTwo) {
  const auto p = plan(deontic(), parse("K{c}(p->r)"), PlanOptions{2, false});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->steps.size(), 2u);
  EXPECT_TRUE(p->achieved);
  EXPECT_TRUE(replay(deontic(), p->steps, parse("K{c}(p->r)")).achieved);
}

TEST(Planner, AToCThenBToCReachesPToR) {
  const auto r = replay(deontic(), {{"a", "c"}, {"b", "c"}}, parse("K{c}(p->r)"));
  EXPECT_TRUE(r.achieved);
  EXPECT_EQ(r.verdicts, (std::vector<bool>{true, false}));
}

TEST(Planner, GoalAlreadyTrue) {
  const auto p = plan(deontic(), parse("K{a}(p->q)"));
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->steps.empty());
}

TEST(Planner, ZeroLength) { EXPECT_FALSE(plan(deontic(), parse("K{c}(p->q)"), PlanOptions{0, true})); }

TEST(Planner, Deterministic) {
  const auto a = plan(deontic(), parse("K{c}(p->r)"), PlanOptions{3, false});
  const auto b = plan(deontic(), parse("K{c}(p->r)"), PlanOptions{3, false});
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->steps, b->steps);
}

TEST(Planner, RequiresIdealWhenPermissible) {
  EXPECT_THROW(plan(PointedModel::at_default(test::pool()), parse("K{c}p")), EvalError);
  EXPECT_NO_THROW(plan(PointedModel::at_default(test::pool()), parse("K{c}p"), PlanOptions{2, false}));
}

TEST(Planner, FormatPlan) {
  const auto p = plan(deontic(), parse("K{c}(p->q)"));
  ASSERT_TRUE(p);
  EXPECT_EQ(format_plan(*p), "1: a > c  permissible=true\ngoal=K{c}(p -> q) achieved=true\n");
}

TEST(Planner, FreePlansExistForKnownBooleanFacts) {
  // Any Boolean-positive fact known by some agent can be pooled into c.
  const auto pm = deontic();
  for (const char* f : {"p & q", "~(p & ~q)", "q & r", "~(q & ~r)"}) {
    const auto phi = parse(f);
    bool known = false;
    for (const auto& a : pm.model.agents()) known = known || Evaluator().holds(pm.model, Formula::know(a, phi), 0);
    if (!known) continue;
    EXPECT_TRUE(plan(pm, Formula::know("c", phi), PlanOptions{4, false})) << f;
  }
}
