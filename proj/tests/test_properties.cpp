#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "kpool/lab.hpp"
#include "kpool/parser.hpp"
#include "kpool/refinement.hpp"
#include "kpool/semantics.hpp"
#include "kpool/update.hpp"
#include "support.hpp"

using namespace kpool;

namespace {

constexpr std::size_t kCases = 300;

Model random_model(std::size_t i, bool deontic = false, std::size_t max_states = 5) {
  GenConfig cfg;
  cfg.seed = 77;
  cfg.max_states = max_states;
  cfg.deontic = deontic;
  return gen_model(cfg, i);
}

}  // namespace

TEST(Property, ParserRoundTrip) {
  std::mt19937_64 rng(11);
  test::FormulaGen gen;
  gen.deontic = true;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Formula f = gen(rng, 1 + static_cast<int>(i % 5));
    const std::string text = print(f);
    EXPECT_EQ(parse(text), f) << text;
    EXPECT_EQ(print(parse(text)), text);
  }
}

TEST(Property, ExpandIsIdempotent) {
  std::mt19937_64 rng(12);
  test::FormulaGen gen;
  gen.deontic = true;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Formula e = expand(gen(rng, 4));
    EXPECT_FALSE(contains_macro(e));
    EXPECT_EQ(expand(e), e);
  }
}

TEST(Property, S5Instances) {
  std::mt19937_64 rng(13);
  test::FormulaGen gen;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = random_model(i);
    const Formula phi = gen(rng, 2);
    const Agent a = gen.pick(rng);
    const auto g = gen.group(rng);
    Evaluator ev;
    for (const Formula& k : {Formula::know(a, phi), Formula::dist(g, phi)}) {
      auto box = [&](const Formula& x) { return k.op() == Op::Know ? Formula::know(a, x) : Formula::dist(g, x); };
      EXPECT_TRUE(ev.global_truth(m, Formula::imp(k, phi))) << print(k);
      EXPECT_TRUE(ev.global_truth(m, Formula::imp(k, box(k)))) << print(k);
      EXPECT_TRUE(ev.global_truth(m, Formula::imp(Formula::neg(k), box(Formula::neg(k))))) << print(k);
    }
  }
}

TEST(Property, BooleanInvarianceUnderUpdate) {
  std::mt19937_64 rng(14);
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = random_model(i, false, 6);
    const Formula phi = test::boolean_positive(rng, m.atoms(), 3);
    const StateId w = std::uniform_int_distribution<StateId>(0, m.size() - 1)(rng);
    const AgentId a = std::uniform_int_distribution<AgentId>(0, m.agent_count() - 1)(rng);
    const AgentId b = std::uniform_int_distribution<AgentId>(0, m.agent_count() - 1)(rng);
    Evaluator ev;
    EXPECT_EQ(ev.extension(share_update(m, w, a, b), phi), ev.extension(m, phi));
    EXPECT_TRUE(ev.global_truth(m, Formula::iff(phi, Formula::share(m.agents()[a], m.agents()[b], phi))));
  }
}

TEST(Property, MemoConsistency) {
  std::mt19937_64 rng(15);
  test::FormulaGen gen;
  gen.deontic = true;
  Evaluator shared;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = random_model(i, true, 4);
    const Formula f = gen(rng, 3);
    Evaluator plain(false);
    const StateSet memo = shared.extension(m, f);
    EXPECT_EQ(memo, plain.extension(m, f)) << print(f);
    EXPECT_EQ(memo, shared.extension(m, f));
  }
}

TEST(Property, FingerprintPermutationInvariance) {
  std::mt19937_64 rng(16);
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = random_model(i, i % 2 == 0, 6);
    std::vector<StateId> perm(m.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Model p = test::permute(m, perm);
    EXPECT_EQ(fingerprint(m), fingerprint(p));
    const StateId w = std::uniform_int_distribution<StateId>(0, m.size() - 1)(rng);
    const StateId pw = static_cast<StateId>(std::find(perm.begin(), perm.end(), w) - perm.begin());
    EXPECT_EQ(fingerprint(PointedModel{m, w}), fingerprint(PointedModel{p, pw}));
  }
}

TEST(Property, PermutedModelsAgreeOnFormulas) {
  std::mt19937_64 rng(17);
  test::FormulaGen gen;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = random_model(i, false, 5);
    std::vector<StateId> perm(m.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Model p = test::permute(m, perm);
    const Formula f = gen(rng, 3);
    const StateSet a = extension(m, f), b = extension(p, f);
    for (StateId j = 0; j < m.size(); ++j) EXPECT_EQ(b.contains(j), a.contains(perm[j])) << print(f);
  }
}

TEST(Property, SharePostconditionsOnRandomDraws) {
  std::mt19937_64 rng(18);
  GenConfig cfg;
  cfg.max_states = 6;
  for (std::size_t i = 0; i < 1000; ++i) {
    cfg.agents = 1 + i % 3;
    const Model m = gen_model(cfg, i);
    const StateId w = std::uniform_int_distribution<StateId>(0, m.size() - 1)(rng);
    const AgentId a = std::uniform_int_distribution<AgentId>(0, m.agent_count() - 1)(rng);
    const AgentId b = std::uniform_int_distribution<AgentId>(0, m.agent_count() - 1)(rng);
    const auto check = check_share_postconditions(m, share_update(m, w, a, b), a, b);
    EXPECT_TRUE(check.ok()) << check.detail;
  }
}

TEST(Property, ResolutionGivesEveryMemberTheMeet) {
  std::mt19937_64 rng(19);
  test::FormulaGen gen;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = random_model(i);
    const auto g = gen.group(rng);
    const Model r = resolve_update(m, g);
    Partition meet = m.rel(m.agent_id(g[0]));
    for (const auto& a : g) meet = meet.meet(m.rel(m.agent_id(a)));
    for (const auto& a : m.agents()) {
      const bool member = std::find(g.begin(), g.end(), a) != g.end();
      EXPECT_EQ(r.rel(m.agent_id(a)), member ? meet : m.rel(m.agent_id(a)));
    }
  }
}

TEST(Property, ReceiverKeepsPairsInsideSenderCell) {
  std::mt19937_64 rng(20);
  GenConfig cfg;
  cfg.max_states = 6;
  for (std::size_t i = 0; i < kCases; ++i) {
    const Model m = gen_model(cfg, i);
    const StateId w = std::uniform_int_distribution<StateId>(0, m.size() - 1)(rng);
    const AgentId a = std::uniform_int_distribution<AgentId>(0, m.agent_count() - 1)(rng);
    const AgentId b = std::uniform_int_distribution<AgentId>(0, m.agent_count() - 1)(rng);
    const Model after = share_update(m, w, a, b);
    const StateSet cell = m.cell(a, w);
    cell.for_each([&](StateId s) {
      cell.for_each([&](StateId u) {
        if (m.rel(b).same_block(s, u)) EXPECT_TRUE(after.rel(b).same_block(s, u));
      });
    });
  }
}
