#include <gtest/gtest.h>

#include "kpool/error.hpp"
#include "kpool/update.hpp"
#include "support.hpp"

using namespace kpool;

namespace {

std::vector<std::vector<std::string>> blocks(const Model& m, const Agent& a) {
  std::vector<std::vector<std::string>> out;
  for (const auto& b : m.rel(m.agent_id(a)).blocks()) {
    std::vector<std::string> names;
    b.for_each([&](StateId s) { names.push_back(m.state_name(s)); });
    out.push_back(names);
  }
  std::sort(out.begin(), out.end());
  return out;
}

using Blocks = std::vector<std::vector<std::string>>;

}  // namespace

TEST(ShareUpdate, PoolAToC) {
  const Model m = test::pool();
  const Model after = share_update(m, m.state_id("s0"), "a", "c");
  EXPECT_EQ(blocks(after, "c"), (Blocks{{"s0", "s1", "s2"}, {"s3"}, {"s4"}}));
  EXPECT_EQ(after.rel(m.agent_id("a")), m.rel(m.agent_id("a")));
  EXPECT_EQ(after.rel(m.agent_id("b")), m.rel(m.agent_id("b")));
  EXPECT_EQ(after.valuation(), m.valuation());
}

TEST(ShareUpdate, PoolBToC) {
  const Model m = test::pool();
  const Model after = share_update(m, m.state_id("s0"), "b", "c");
  EXPECT_EQ(blocks(after, "c"), (Blocks{{"s0", "s3", "s4"}, {"s1"}, {"s2"}}));
}

TEST(ShareUpdate, OnlyTheReceiverCellChanges) {
  // b's cell of w is {0,1}; the other b-cell {2,3} must survive untouched.
  const Model m({"w", "x", "y", "z"}, {"a", "b"}, {"p"},
                {Partition::discrete(4), Partition(std::vector<std::size_t>{0, 0, 1, 1})},
                {StateSet::singleton(4, 0) | StateSet::singleton(4, 2)});
  const Model after = share_update(m, 0, "a", "b");
  EXPECT_FALSE(after.rel(1).same_block(0, 1));
  EXPECT_TRUE(after.rel(1).same_block(2, 3));
}

TEST(ShareUpdate, SelfShareIsIdentity) {
  const Model m = test::pool();
  for (StateId w = 0; w < m.size(); ++w) EXPECT_TRUE(share_update(m, w, "a", "a") == m);
}

TEST(ShareUpdate, PostconditionsOnPool) {
  const Model m = test::pool();
  for (AgentId a = 0; a < 3; ++a)
    for (AgentId b = 0; b < 3; ++b)
      for (StateId w = 0; w < m.size(); ++w) {
        const auto check = check_share_postconditions(m, share_update(m, w, a, b), a, b);
        EXPECT_TRUE(check.ok()) << check.detail;
      }
}

TEST(ShareUpdate, ReceiverAloneIsNotAPreservedGroup) {
  const Model m = test::pool();
  const AgentId a = m.agent_id("a"), b = m.agent_id("b"), c = m.agent_id("c");
  const Model after = share_update(m, 0, a, c);
  EXPECT_FALSE(after.rel(c) == m.rel(c));
  EXPECT_EQ(after.rel(a).meet(after.rel(c)), m.rel(a).meet(m.rel(c)));
  EXPECT_EQ(after.rel(a).meet(after.rel(b)), m.rel(a).meet(m.rel(b)));
  EXPECT_TRUE(check_share_postconditions(m, after, a, c).ok());
}

TEST(ShareUpdate, UnknownAgent) { EXPECT_THROW(share_update(test::pool(), 0, "a", "z"), ModelError); }

TEST(ResolveUpdate, Resolution) {
  const Model m = test::resolution();
  const Model after = resolve_update(m, std::vector<Agent>{"a", "b"});
  EXPECT_EQ(blocks(after, "a"), (Blocks{{"s0"}, {"s1"}, {"s2"}, {"s3"}}));
  EXPECT_EQ(blocks(after, "b"), (Blocks{{"s0"}, {"s1"}, {"s2"}, {"s3"}}));
}

TEST(ResolveUpdate, SingletonIsIdentity) {
  const Model m = test::pool();
  EXPECT_TRUE(resolve_update(m, std::vector<Agent>{"a"}) == m);
}

TEST(ResolveUpdate, PoolWholeGroup) {
  const Model m = test::pool();
  const Model after = resolve_update(m, std::vector<Agent>{"a", "b", "c"});
  EXPECT_EQ(after.cell(0, 0).count(), 1u);
  EXPECT_EQ(after.rel(0), after.rel(2));
}

TEST(ResolveUpdate, EmptyGroupThrows) { EXPECT_THROW(resolve_update(test::pool(), std::vector<AgentId>{}), ModelError); }

TEST(ApplySequence, TwoSharesIntoC) {
  const auto pm = apply_sequence(PointedModel::at_default(test::pool()), {{"a", "c"}, {"b", "c"}});
  EXPECT_EQ(pm.point, 0u);
  EXPECT_EQ(pm.model.cell(2, 0).count(), 1u);
}

TEST(ApplySequence, EmptyIsIdentity) {
  const auto pm = PointedModel::at_default(test::pool());
  EXPECT_TRUE(apply_sequence(pm, {}).model == pm.model);
}
