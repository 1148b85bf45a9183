#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kpool/cli.hpp"
#include "support.hpp"

using namespace kpool;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kPool = test::data_path("pool.json");
const std::string kDeontic = test::data_path("pool_deontic.json");

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kpool_test_" + name)).string();
}

}  // namespace

TEST(Cli, CheckTrue) {
  const auto r = run({"check", "--model", kPool, "--formula", "K{c|a,b}(p->r)", "--state", "s0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
}

TEST(Cli, CheckFalsePrintsWitness) {
  const auto r = run({"check", "--model", kPool, "--formula", "K{c}(p->q)"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("false\n", 0), 0u);
  EXPECT_GT(r.out.size(), 6u);
}

TEST(Cli, ParseErrorExitsTwo) {
  const auto r = run({"check", "--model", kPool, "--formula", "K{c}(p->"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kPool}).code, 2);
  EXPECT_EQ(run({"check", "--model", "/nonexistent.json", "--formula", "p"}).code, 2);
  EXPECT_EQ(run({"check", "--model", kPool, "--formula", "p", "--state", "s9"}).code, 2);
}

TEST(Cli, PlanNoPlan) {
  const auto r = run({"plan", "--model", kDeontic, "--goal", "K{c}(p->r)", "--max", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "no plan\n");
}

TEST(Cli, PlanFound) {
  const auto r = run({"plan", "--model", kDeontic, "--goal", "K{c}(p->q)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1: a > c  permissible=true\ngoal=K{c}(p -> q) achieved=true\n");
}

TEST(Cli, PlanFree) {
  const auto r = run({"plan", "--model", kDeontic, "--goal", "K{c}(p->r)", "--max", "2", "--free"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("achieved=true"), std::string::npos);
}

TEST(Cli, UpdateThenCheckEqualsBoxedCheck) {
  const std::string out = temp_file("update.json");
  for (const std::string steps : {"a>c", "b>c", "a>c,b>c", "c>a"}) {
    ASSERT_EQ(run({"update", "--model", kPool, "--share", steps, "--out", out}).code, 0);
    std::string box;
    for (std::size_t i = 0; i < steps.size(); i += 4) box += "[" + steps.substr(i, 3) + "]";
    for (const std::string f : {"K{c}(p->q)", "K{c}(q->r)", "K{c|a}(p->r)", "D{a,c}p", "K{b}~K{c}p"}) {
      const auto direct = run({"check", "--model", out, "--formula", f});
      const auto boxed = run({"check", "--model", kPool, "--formula", box + "(" + f + ")"});
      EXPECT_EQ(direct.out.substr(0, 5), boxed.out.substr(0, 5)) << steps << " " << f;
      EXPECT_EQ(direct.code, boxed.code);
    }
  }
  std::filesystem::remove(out);
}

TEST(Cli, UpdateWarnsWhenIdealLosesCover) {
  // The ideal pair u-v is covered only by b's link, which a>b deletes.
  const std::string model = temp_file("cover.json");
  {
    std::ofstream f(model);
    f << R"({"states": ["u", "v"], "agents": ["a", "b"], "atoms": ["p"],
      "relations": {"b": [["u", "v"]]}, "valuation": {"u": ["p"]},
      "ideal": [["u", "v"]], "point": "u"})";
  }
  const auto r = run({"update", "--model", model, "--share", "a>b"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("\"states\""), std::string::npos);
  std::filesystem::remove(model);
}

TEST(Cli, UpdateBadStep) { EXPECT_EQ(run({"update", "--model", kPool, "--share", "a-c"}).code, 2); }

TEST(Cli, Validate) {
  const auto r = run({"validate", "--model", kDeontic});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid states=5 agents=3 atoms=3 ideal=yes\n");
  EXPECT_EQ(run({"validate", "--model", kPool, "--strict"}).code, 2);
}

TEST(Cli, LabSingleSchema) {
  const auto r = run({"lab", "--schema", "Inv", "--samples", "20"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("SCHEMA Inv ", 0), 0u);
  EXPECT_EQ(run({"lab", "--schema", "Nope"}).code, 2);
}

TEST(Cli, LabList) {
  const auto r = run({"lab", "--list"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Sharing"), std::string::npos);
}

TEST(Cli, ExamplesGoldenOnly) {
  const auto r = run({"examples", "--golden-only"});
  EXPECT_NE(r.out.find("GOLDEN know.Ka1"), std::string::npos);
  EXPECT_NE(r.out.find("golden "), std::string::npos);
}
