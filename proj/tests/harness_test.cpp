#include <fstream>

#include <gtest/gtest.h>

#include "models.hpp"

using namespace coalsim;
using namespace fixtures;

TEST(Generator, SingleDeadlock) {
  GeneratorConfig cfg;
  cfg.kind = FunctorKind{Kind::Kripke, {}};
  cfg.min_states = cfg.max_states = 1;
  cfg.branching = 0;
  const Coalgebra c = generate_coalgebra(cfg);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(values_equal(c.at(0), make_kripke({}, {})));
}

TEST(Generator, Deterministic) {
  for (Kind k : props::kAllKinds) {
    GeneratorConfig cfg = props::config_for(k, 42, {});
    EXPECT_EQ(coalgebra_to_json(generate_coalgebra(cfg)).dump(), coalgebra_to_json(generate_coalgebra(cfg)).dump());
  }
}

TEST(Generator, DenominatorCap) {
  GeneratorConfig cfg;
  cfg.kind = FunctorKind{Kind::Distribution, {}};
  cfg.denominator_cap = 4;
  cfg.max_states = 6;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cfg.seed = seed;
    const Coalgebra c = generate_coalgebra(cfg);
    EXPECT_NO_THROW(validate(c));
    for (const auto& v : c.transition()) {
      Rational sum = 0;
      for (const auto& [s, m] : std::get<DistValue>(v).mass) {
        EXPECT_LE(m.denominator(), 4);
        sum += m;
      }
      EXPECT_EQ(sum, Rational(1));
    }
  }
}

TEST(Generator, RejectsBadRange) {
  GeneratorConfig cfg;
  cfg.min_states = 3;
  cfg.max_states = 2;
  EXPECT_THROW(generate_coalgebra(cfg), ValidationError);
}

TEST(Oracle, EmptyRelationHolds) {
  const Coalgebra c = forked(), d = single();
  EXPECT_TRUE(oracle::simulation(Relation(3, 2), c, d, sig("kripke:box,diamond", c, d).modalities).holds);
}

TEST(Oracle, FullRelationOnIncompatibleModels) {
  const Coalgebra c = live(), d = deadlock();
  const auto s = sig("kripke:diamond", c, d);
  const auto brute = oracle::simulation(Relation::full(1, 1), c, d, s.modalities);
  const auto engine = is_simulation(Relation::full(1, 1), c, d, s);
  ASSERT_FALSE(brute.holds);
  ASSERT_FALSE(engine.holds);
  EXPECT_EQ(brute.first->from, engine.violations.front().from);
  EXPECT_EQ(brute.first->to, engine.violations.front().to);
  EXPECT_EQ(brute.first->modality, engine.violations.front().modality);
}

TEST(Oracle, CarrierBound) {
  const Coalgebra c = chain(13, "x");
  EXPECT_THROW(oracle::simulation(Relation(13, 13), c, c, {Modality::diamond()}), BudgetExceeded);
}

TEST(Properties, ManifestFileMatchesRegistry) {
  EXPECT_EQ(read_json_file(COALSIM_MANIFEST), property_manifest());
}

TEST(Properties, UnknownId) { EXPECT_THROW(run_property_suite("no-such-property", 1, 1), ValidationError); }

TEST(Properties, StabilityFiveHundred) {
  const auto rep = run_property_suite("stability", 500, 7);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.trials, 500u * 4);
}

TEST(Properties, DifunctionalFiveHundred) {
  const auto rep = run_property_suite("prop-difunctional", 500, 7);
  EXPECT_TRUE(rep.passed()) << report_to_json(rep).dump();
}

TEST(Properties, OpenProblemIsReportOnly) {
  const auto rep = run_property_suite("open-problem-search", 30, 7);
  EXPECT_TRUE(rep.report_only);
  EXPECT_TRUE(rep.passed());
}

TEST(Properties, ReportsAreDeterministic) {
  EXPECT_EQ(report_to_json(run_property_suite("oracle", 40, 11)).dump(),
            report_to_json(run_property_suite("oracle", 40, 11)).dump());
}

TEST(Properties, SingleKind) {
  const auto rep = run_property_suite("functor-laws", 20, 3, Kind::Neighborhood);
  EXPECT_EQ(rep.trials, 20u);
  EXPECT_EQ(rep.trials_per_kind.at("neighborhood"), 20u);
}

class EveryProperty : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryProperty, PassesSmallRun) {
  const auto rep = run_property_suite(GetParam(), 60, 2024);
  EXPECT_TRUE(rep.passed()) << report_to_json(rep).dump();
  EXPECT_GT(rep.trials, 0u);
}

namespace {

std::vector<std::string> property_ids() {
  std::vector<std::string> ids;
  for (const auto& p : property_registry()) ids.push_back(p.id);
  return ids;
}

}  // namespace

INSTANTIATE_TEST_SUITE_P(Registry, EveryProperty, ::testing::ValuesIn(property_ids()),
                         [](const auto& info) {
                           std::string name = info.param;
                           std::replace(name.begin(), name.end(), '-', '_');
                           return name;
                         });
