#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "coalsim/cli.hpp"

using namespace coalsim;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(COALSIM_DEMO_DIR) + "/" + name; }

}  // namespace

TEST(Cli, EvalLoop) {
  const auto r = run({"eval", model("loop_p.json"), "x", "<> p"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(run({"eval", model("loop_p.json"), "x", "<> ~p"}).code, 1);
}

TEST(Cli, EvalErrors) {
  EXPECT_EQ(run({"eval", model("loop_p.json"), "x", "<> (p"}).code, 2);
  EXPECT_EQ(run({"eval", model("loop_p.json"), "nowhere", "p"}).code, 2);
  EXPECT_EQ(run({"eval", model("missing.json"), "x", "p"}).code, 2);
  EXPECT_EQ(run({"--sig", "graded:0..2", "eval", model("loop_p.json"), "x", "p"}).code, 2);
}

TEST(Cli, Usage) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"nstep", model("loop_p.json"), model("loop_p.json")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ClosureAddsOnePair) {
  const auto r = run({"closure", model("closure_rel.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x1 y1\nx1 y2\nx2 y1\nx2 y2\n4 pairs\n");
}

TEST(Cli, TbisimNonTransportable) {
  const auto r = run({"tbisim", model("dist_split.json"), model("dist_point.json"), model("dist_partial_rel.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "no coupling\n");
}

TEST(Cli, TbisimKripke) {
  const auto r = run({"--json", "tbisim", model("kripke_fork.json"), model("kripke_single.json"), model("fork_rel.json")});
  EXPECT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["found"].get<bool>());
  EXPECT_EQ(j["couplings"][0]["value"]["succ"], Json::array({"a|c", "b|c"}));
}

TEST(Cli, CheckSim) {
  const auto fork = model("kripke_fork.json"), single = model("kripke_single.json"), rel = model("fork_rel.json");
  EXPECT_EQ(run({"check-sim", fork, single, rel}).code, 0);
  EXPECT_EQ(run({"check-sim", fork, single, rel, "--bi"}).code, 0);
  EXPECT_EQ(run({"check-sim", fork, single, rel, "--up-to-difunctional"}).code, 0);
  EXPECT_EQ(run({"check-sim", fork, single, rel, "--bi", "--n", "3"}).code, 0);
  const auto deadlock = run({"--sig", "kripke:diamond", "check-sim", model("loop_p.json"), model("kripke_single.json"),
                             model("loop_to_c.json")});
  EXPECT_EQ(deadlock.code, 1);
  EXPECT_EQ(deadlock.out, "fails (1 violation)\n  forward x -> c: <> {x}\n");
}

TEST(Cli, GreatestAndNstep) {
  const auto a = model("cycle_p.json"), b = model("loop_p.json");
  EXPECT_EQ(run({"greatest-bisim", a, b}).out, "u x\nv x\n2 pairs\n");
  EXPECT_EQ(run({"greatest-sim", a, b, "--n", "2"}).code, 0);
  const auto n = run({"nstep", a, b, "--n", "3"});
  EXPECT_EQ(n.code, 0);
  EXPECT_EQ(n.out, "1 block\nu x\nv x\n2 pairs\n");
  EXPECT_EQ(run({"greatest-bisim", model("kripke_fork.json"), model("loop_p.json")}).code, 1);
}

TEST(Cli, BehaviouralWitness) {
  const std::string path = ::testing::TempDir() + "coalsim_witness.json";
  const auto r = run({"behavioural", model("graded_two.json"), model("graded_split.json"), "--witness", path});
  EXPECT_EQ(r.code, 0);
  const Json w = read_json_file(path);
  EXPECT_EQ(w["kappa1"]["x"], w["kappa2"]["y"]);
  EXPECT_EQ(w["chi"][w["kappa1"]["x"].get<std::string>()].size(), 1u);
  std::remove(path.c_str());
  EXPECT_EQ(run({"--sig", "kripke:diamond", "behavioural", model("loop_p.json"), model("cycle_p.json")}).code, 2);
}

TEST(Cli, Randtest) {
  const auto r = run({"randtest", "stability", "--trials", "20", "--seed", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("stability: PASS (80 trials)", 0), 0u);
  EXPECT_EQ(run({"randtest", "bogus"}).code, 2);
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> calls{
      {"--json", "randtest", "oracle", "--trials", "15", "--seed", "9"},
      {"--json", "behavioural", model("cycle_p.json"), model("loop_p.json")},
      {"generate", "--kind", "distribution", "--seed", "17", "--max-states", "5"},
      {"--json", "properties"},
  };
  for (const auto& args : calls) EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, GenerateIsLoadable) {
  for (const char* kind : {"kripke", "multiset", "distribution", "neighborhood"}) {
    const auto r = run({"generate", "--kind", kind, "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NO_THROW(validate(coalgebra_from_json(Json::parse(r.out))));
  }
  EXPECT_EQ(run({"generate", "--kind", "tree"}).code, 2);
}
