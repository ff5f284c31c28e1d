#include <filesystem>
#include <fstream>
#include <sstream>

#include "carnot/cli.hpp"
#include "carnot/io.hpp"
#include "helpers.hpp"

using namespace carnot;
using namespace carnot::test;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, BchProduct) {
  CliRun r = run({"bch", "--group", "heisenberg1", "--p", "1,0,0", "--q", "0,1,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1,1,1/2\n");
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"bch", "--group", "heisenberg1", "--p", "1,0"}).code, 2);
  EXPECT_EQ(run({"bch", "--group", "heisenberg1", "--p", "1,0", "--q", "0,1,0"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"approximate", "--f", "sin(x)"}).code, 2);
  EXPECT_EQ(run({"approximate", "--f", "x", "--mode", "sideways"}).code, 2);
  CliRun missing_seed = run({"mc-solve", "--g", "x*y", "--p", "0.2,0.3,0"});
  EXPECT_EQ(missing_seed.code, 2);
  EXPECT_NE(missing_seed.err.find("--seed"), std::string::npos);
  EXPECT_EQ(run({"group-info", "--group", "nonsense"}).code, 2);
}

TEST(Cli, ComputationErrorsExitOne) {
  CliRun r = run({"approximate", "--group", "heisenberg1", "--k", "3", "--f", "x", "--d", "poly:y + x/2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("OffTriangular"), std::string::npos);
  CliRun g = run({"approximate", "--k", "3", "--f", "x", "--d", "graph:x"});
  EXPECT_EQ(g.code, 1);
  EXPECT_NE(g.err.find("BadGraph"), std::string::npos);
}

TEST(Cli, ApproximateReport) {
  CliRun r = run({"approximate", "--group", "heisenberg1", "--k", "3", "--f", "x", "--d", "flat", "--free", "zero"});
  ASSERT_EQ(r.code, 0) << r.err;
  GroupPtr h = builtin_group("heisenberg1");
  ApproxResult back = approx_result_from_json(Json::parse(r.out), h);
  EXPECT_EQ(back.p, poly("x*y/2", h));
  for (const auto& [w, v] : back.residuals) EXPECT_EQ(v, 0);
  CliRun general = run({"approximate", "--k", "3", "--f", "x", "--d", "t^2", "--mode", "general"});
  EXPECT_EQ(general.code, 0) << general.err;
}

TEST(Cli, FreeAssignmentFile) {
  GroupPtr h = builtin_group("heisenberg1");
  FreeAssignment free;
  free[poly("t", h).terms().begin()->first] = 1;
  auto path = std::filesystem::temp_directory_path() / "carnot_free_test.json";
  std::ofstream(path) << free_assignment_to_json(free, h).dump();
  CliRun r = run({"approximate", "--k", "3", "--f", "x", "--free", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["P_text"], "t");
  std::filesystem::remove(path);
}

TEST(Cli, OtherSubcommands) {
  CliRun info = run({"group-info", "--group", "engel"});
  ASSERT_EQ(info.code, 0);
  EXPECT_EQ(Json::parse(info.out)["homogeneous_dimension"], 7);
  CliRun apply = run({"apply", "--f", "y*t"});
  ASSERT_EQ(apply.code, 0);
  EXPECT_EQ(Json::parse(apply.out)["result"]["text"], "x");
  CliRun word = run({"apply", "--f", "x*y", "--word", "1,2"});
  EXPECT_EQ(Json::parse(word.out)["result"]["text"], "1");
  CliRun taylor = run({"taylor", "--f", "y*sin(t) - x^2/3 + t", "--k", "8"});
  EXPECT_EQ(Json::parse(taylor.out)["taylor"]["text"], "-1/3*x^2 + t + y*t - 1/6*y*t^3");
  CliRun comp = run({"companions", "--k", "2"});
  EXPECT_EQ(Json::parse(comp.out)["dimension"], 4);
  CliRun scan = run({"char-scan", "--d", "phi:-t", "--seed", "1"});
  EXPECT_EQ(Json::parse(scan.out)["characteristic"], true);
  CliRun decay = run({"verify-decay", "--u", "y*x^3", "--seed", "1"});
  EXPECT_NEAR(Json::parse(decay.out)["slope"].get<double>(), 4, 0.2);
  CliRun barrier = run({"verify-barrier", "--seed", "1"});
  EXPECT_EQ(barrier.code, 0) << barrier.err;
}

TEST(Cli, SeededRunsAreByteIdentical) {
  std::vector<std::string> args{"mc-solve", "--g", "x*y", "--p", "0.2,0.3,0", "--seed", "4", "--n-paths", "500", "--dt", "1e-3"};
  CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto path = std::filesystem::temp_directory_path() / "carnot_cli_out.json";
  args.push_back("--out");
  args.push_back(path.string());
  CliRun c = run(args);
  EXPECT_TRUE(c.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), a.out);
  std::filesystem::remove(path);
}
