#include <gtest/gtest.h>

#include "models.hpp"

using namespace coalsim;
using namespace fixtures;

TEST(Image, Examples) {
  Relation s(3, 3);
  EXPECT_EQ(members(image(s, make_set(3, {0}))), std::vector<State>{});
  s.insert(0, 1);
  EXPECT_EQ(members(image(s, make_set(3, {0}))), std::vector<State>{1});
  s.insert(0, 2);
  EXPECT_EQ(members(image(s, make_set(3, {0}))), (std::vector<State>{1, 2}));
}

TEST(Simulation, IsomorphismGraph) {
  const Coalgebra c = forked();
  EXPECT_TRUE(is_simulation(Relation::identity(3), c, c, sig("kripke:diamond", c, c)).holds);
}

TEST(Simulation, DeadlockWitness) {
  const Coalgebra c = live(), d = deadlock();
  const auto rep = is_simulation(rel(c, d, {{"x", "y"}}), c, d, sig("kripke:diamond", c, d));
  ASSERT_FALSE(rep.holds);
  ASSERT_EQ(rep.violations.size(), 1u);
  const auto& v = rep.violations[0];
  EXPECT_EQ(v.direction, Direction::Forward);
  EXPECT_EQ(c.name(v.from), "x");
  EXPECT_EQ(d.name(v.to), "y");
  EXPECT_EQ(v.modality, Modality::diamond());
  EXPECT_EQ(v.subset, std::vector<State>{0});
}

TEST(Simulation, ForkIntoSingle) {
  const Coalgebra c = forked(), d = single();
  const Relation s = rel(c, d, {{"x", "y"}, {"a", "c"}, {"b", "c"}});
  EXPECT_TRUE(is_simulation(s, c, d, sig("kripke:box,diamond", c, d)).holds);
  EXPECT_TRUE(oracle::simulation(s, c, d, sig("kripke:box,diamond", c, d).modalities).holds);
  EXPECT_TRUE(is_bisimulation(s, c, d, sig("kripke:box,diamond", c, d)).holds);
}

TEST(Bisimulation, EmptyAndMorphism) {
  const Coalgebra c = forked(), d = single();
  EXPECT_TRUE(is_bisimulation(Relation(3, 2), c, d, sig("kripke:box,diamond", c, d)).holds);
  EXPECT_TRUE(is_bisimulation(Relation::graph({0, 1, 1}, 2), c, d, sig("kripke:box,diamond", c, d)).holds);
}

TEST(Bisimulation, DroppedBoxRequirement) {
  const Coalgebra c = forked(), d = single();
  const Relation s = rel(c, d, {{"x", "y"}, {"a", "c"}});
  const auto box = sig("kripke:box", c, d);
  EXPECT_TRUE(is_simulation(s, c, d, box).holds);
  const auto rep = is_bisimulation(s, c, d, box);
  ASSERT_FALSE(rep.holds);
  EXPECT_EQ(rep.violations.front().direction, Direction::Backward);
  EXPECT_EQ(d.name(rep.violations.front().from), "y");
  EXPECT_EQ(rep.violations.front().modality, Modality::box());
}

TEST(Simulation, ReportsAreDeterministic) {
  const Coalgebra c = forked(), d = single();
  const Relation full = Relation::full(3, 2);
  const auto s = sig("kripke:box,diamond", c, d);
  EXPECT_EQ(report_to_json(is_bisimulation(full, c, d, s), c, d).dump(),
            report_to_json(is_bisimulation(full, c, d, s), c, d).dump());
}

TEST(Simulation, SignatureKindMismatch) {
  const Coalgebra c = forked(), d = dist_point();
  EXPECT_THROW(is_simulation(Relation(3, 2), c, d, sig("kripke:diamond", c, c)), Error);
}

TEST(GreatestSimulation, ContainsIdentity) {
  const Coalgebra c = forked();
  const Relation g = greatest_simulation(c, c, sig("kripke:box,diamond", c, c));
  EXPECT_TRUE(Relation::identity(3).is_subset_of(g));
  EXPECT_TRUE(is_simulation(g, c, c, sig("kripke:box,diamond", c, c)).holds);
}

TEST(GreatestSimulation, DeadlockSimulatedByAll) {
  const Coalgebra c = deadlock(), d = forked();
  const Relation g = greatest_simulation(c, d, sig("kripke:diamond", c, d));
  for (State y = 0; y < d.size(); ++y) EXPECT_TRUE(g.contains(0, y));
}

TEST(GreatestSimulation, MatchesUnionOracle) {
  const Coalgebra c = forked(), d = single();
  for (const char* lit : {"kripke:diamond", "kripke:box", "kripke:box,diamond"}) {
    const auto s = sig(lit, c, d);
    EXPECT_EQ(greatest_simulation(c, d, s), oracle::union_of_simulations(c, d, s.modalities, false)) << lit;
    EXPECT_EQ(greatest_bisimulation(c, d, s), oracle::union_of_simulations(c, d, s.modalities, true)) << lit;
  }
}

TEST(GreatestBisimulation, ClassicalKripke) {
  const Coalgebra c = from(R"({"functor":"kripke","atoms":["p"],"states":["u","v","w"],"transition":{
    "u":{"props":["p"],"succ":["v","w"]},"v":{"props":[],"succ":["u"]},"w":{"props":[],"succ":[]}}})");
  const Coalgebra d = from(R"({"functor":"kripke","atoms":["p"],"states":["s","t","r"],"transition":{
    "s":{"props":["p"],"succ":["t","r"]},"t":{"props":[],"succ":["s"]},"r":{"props":[],"succ":["r"]}}})");
  const auto s = sig("kripke:box,diamond,atoms", c, d);
  EXPECT_EQ(greatest_bisimulation(c, d, s), oracle::kripke_bisimilarity(c, d));
}

TEST(GreatestSimulation, DiamondAloneIsCoarser) {
  // ◇ cannot see that the deadlocked x lacks successors; □ can
  const Coalgebra c = deadlock(), d = live();
  const Relation diamond = greatest_simulation(c, d, sig("kripke:diamond", c, d));
  const Relation both = greatest_simulation(c, d, sig("kripke:box,diamond", c, d));
  EXPECT_TRUE(both.is_subset_of(diamond));
  EXPECT_TRUE(diamond.contains(0, 0));
  EXPECT_FALSE(both.contains(0, 0));
}

TEST(GreatestBisimulation, DiamondAloneIsClassical) {
  // forth for S and for its converse is already the classical condition
  const Coalgebra c = from(R"({"functor":"kripke","atoms":[],"states":["x","a","b"],"transition":{
    "x":{"props":[],"succ":["a","b"]},"a":{"props":[],"succ":["a"]},"b":{"props":[],"succ":[]}}})");
  const Coalgebra d = from(R"({"functor":"kripke","atoms":[],"states":["y","c","e"],"transition":{
    "y":{"props":[],"succ":["c"]},"c":{"props":[],"succ":["c"]},"e":{"props":[],"succ":[]}}})");
  const Relation diamond = greatest_bisimulation(c, d, sig("kripke:diamond", c, d));
  EXPECT_EQ(diamond, greatest_bisimulation(c, d, sig("kripke:box,diamond", c, d)));
  EXPECT_EQ(diamond, greatest_bisimulation(c, d, sig("kripke:box", c, d)));
  EXPECT_EQ(diamond, oracle::kripke_bisimilarity(c, d));
  EXPECT_FALSE(diamond.contains(0, 0));
  EXPECT_TRUE(diamond.contains(1, 1));
}

TEST(NChain, ZeroIsFull) {
  const Coalgebra c = forked(), d = single();
  const auto chain = n_simulation_chain(c, d, sig("kripke:diamond", c, d), 0);
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0], Relation::full(3, 2));
}

TEST(NChain, DescendingAndDepthThree) {
  const Coalgebra c = chain(4, "x"), d = chain(3, "y");
  const auto s = sig("kripke:diamond", c, d);
  const auto rs = n_simulation_chain(c, d, s, 4);
  for (std::size_t k = 1; k < rs.size(); ++k) EXPECT_TRUE(rs[k].is_subset_of(rs[k - 1]));
  EXPECT_TRUE(rs[2].contains(0, 0));
  EXPECT_FALSE(rs[3].contains(0, 0));
  // ◇◇◇⊤ separates them
  const Formula f = parse_formula("<> <> <> true", s);
  EXPECT_TRUE(eval(f, c, 0));
  EXPECT_FALSE(eval(f, d, 0));

  const Relation pair = rel(c, d, {{"x0", "y0"}});
  EXPECT_TRUE(is_n_simulation(pair, c, d, s, 0));
  EXPECT_TRUE(is_n_simulation(pair, c, d, s, 2));
  EXPECT_FALSE(is_n_simulation(pair, c, d, s, 3));
  EXPECT_EQ(is_n_simulation(pair, c, d, s, 3), oracle::is_n_simulation(pair, c, d, s.modalities, 3));
}

TEST(NChain, SimulationsAreNSimulations) {
  const Coalgebra c = forked(), d = single();
  const auto s = sig("kripke:box,diamond", c, d);
  const Relation g = greatest_simulation(c, d, s);
  for (std::size_t n = 0; n < 5; ++n) EXPECT_TRUE(is_n_simulation(g, c, d, s, n));
}

TEST(Difunctional, Closure) {
  Relation s(2, 2);
  s.insert(0, 0);
  s.insert(1, 0);
  s.insert(1, 1);
  EXPECT_FALSE(is_difunctional(s));
  const Relation r = difunctional_closure(s);
  EXPECT_EQ(r.size(), 4u);
  EXPECT_TRUE(r.contains(0, 1));
  EXPECT_TRUE(is_difunctional(r));
  EXPECT_EQ(difunctional_closure(r), r);
  EXPECT_EQ(r, oracle::difunctional_closure(s));
  EXPECT_TRUE(difunctional_closure(Relation(3, 2)).empty());
}

TEST(UpToDifunctional, SinglePairOfABisimulation) {
  // u ↔ v ↔ w all pairwise linked by a 2-cycle; one pair closes to the rest
  const Coalgebra c = from(R"({"functor":"kripke","atoms":[],"states":["a","b"],"transition":{
    "a":{"props":[],"succ":["b"]},"b":{"props":[],"succ":["a"]}}})");
  const Coalgebra d = from(R"({"functor":"kripke","atoms":[],"states":["u","v","w"],"transition":{
    "u":{"props":[],"succ":["v"]},"v":{"props":[],"succ":["w"]},"w":{"props":[],"succ":["v"]}}})");
  const auto s = sig("kripke:box,diamond", c, d);
  const Relation bis = greatest_bisimulation(c, d, s);
  ASSERT_TRUE(is_bisimulation(bis, c, d, s).holds);
  const Relation sub = rel(c, d, {{"a", "u"}, {"b", "v"}, {"a", "w"}});
  EXPECT_FALSE(is_bisimulation(rel(c, d, {{"a", "u"}, {"b", "v"}}), c, d, s).holds);
  EXPECT_TRUE(is_bisimulation_up_to_difunctionality(bis, c, d, s).holds);
  EXPECT_EQ(is_bisimulation_up_to_difunctionality(sub, c, d, s).holds,
            is_bisimulation(difunctional_closure(sub), c, d, s).holds);
}

TEST(UpToDifunctional, FailsWhenClosureFails) {
  const Coalgebra c = forked(), d = single();
  const auto s = sig("kripke:box,diamond", c, d);
  const Relation bad = rel(c, d, {{"x", "c"}});
  EXPECT_FALSE(is_bisimulation(difunctional_closure(bad), c, d, s).holds);
  EXPECT_FALSE(is_bisimulation_up_to_difunctionality(bad, c, d, s).holds);
}

TEST(FastPath, AgreesOnHandInstances) {
  const Coalgebra c = forked(), d = single();
  const Relation s = rel(c, d, {{"x", "y"}, {"a", "c"}});
  for (const char* lit : {"kripke:diamond", "kripke:box"}) {
    const auto g = sig(lit, c, d);
    const auto fast = fast_simulation_verdict(s, c, d, g);
    ASSERT_TRUE(fast.has_value());
    EXPECT_EQ(*fast, is_simulation(s, c, d, g).holds) << lit;
  }
}

TEST(BaseBound, DefaultIsSixteen) {
  // the override is read once per process; the CLI test covers it
  if (std::getenv("COALSIM_MAX_BASE") == nullptr) EXPECT_EQ(max_exhaustive_base(), 16u);
}
