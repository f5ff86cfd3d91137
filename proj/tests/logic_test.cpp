#include <gtest/gtest.h>

#include "models.hpp"

using namespace coalsim;
using namespace fixtures;

namespace {

LambdaSignature kripke_sig(const Coalgebra& c) { return parse_signature("kripke:box,diamond,atoms", {&c}); }

Coalgebra pq_model() {
  return from(R"({"functor":"kripke","atoms":["p","q"],"states":["x"],"transition":{"x":{"props":["p"],"succ":[]}}})");
}

}  // namespace

TEST(Parse, Literal) {
  const Coalgebra c = pq_model();
  EXPECT_EQ(parse_formula("true", kripke_sig(c)), Formula::top());
  EXPECT_EQ(parse_formula("false", kripke_sig(c)), Formula::bot());
}

TEST(Parse, NestedModalities) {
  const Coalgebra c = pq_model();
  const Formula f = parse_formula("<> (p & [] q)", kripke_sig(c));
  const Formula expected =
      Formula::modal(Modality::diamond(), Formula::conj(Formula::atom("p"), Formula::modal(Modality::box(), Formula::atom("q"))));
  EXPECT_EQ(f, expected);
  EXPECT_EQ(to_string(f), to_string(expected));
}

TEST(Parse, Probabilistic) {
  const Coalgebra c = dist_point();
  const auto sig = parse_signature("prob:L(1/2)", {&c});
  EXPECT_EQ(parse_formula("L(1/2) true", sig), Formula::modal(Modality::at_least(Rational(1, 2)), Formula::top()));
}

TEST(Parse, Precedence) {
  const Coalgebra c = pq_model();
  const auto sig = kripke_sig(c);
  EXPECT_EQ(parse_formula("p | q & ~p", sig),
            Formula::disj(Formula::atom("p"), Formula::conj(Formula::atom("q"), Formula::neg(Formula::atom("p")))));
  EXPECT_EQ(parse_formula("p -> q", sig), Formula::implies(Formula::atom("p"), Formula::atom("q")));
}

TEST(Parse, ErrorsCarryPosition) {
  const Coalgebra c = pq_model();
  try {
    parse_formula("<> (p", kripke_sig(c));
    FAIL() << "expected a syntax error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(parse_formula("p &", kripke_sig(c)), ParseError);
  EXPECT_THROW(parse_formula("p q", kripke_sig(c)), ParseError);
}

TEST(Parse, UnknownModality) {
  const Coalgebra c = pq_model();
  EXPECT_THROW(parse_formula("<2> true", kripke_sig(c)), UnknownModality);
  EXPECT_THROW(parse_formula("r", kripke_sig(c)), UnknownModality);
  const auto diamond_only = parse_signature("kripke:diamond", {&c});
  EXPECT_THROW(parse_formula("[] true", diamond_only), UnknownModality);
}

TEST(Rank, Examples) {
  const Coalgebra c = pq_model();
  const auto sig = kripke_sig(c);
  EXPECT_EQ(rank(Formula::top()), 0u);
  EXPECT_EQ(rank(parse_formula("p & q", sig)), 1u);
  // atoms count one level, so the innermost q adds to the depth
  EXPECT_EQ(rank(parse_formula("<> (p & [] q)", sig)), 3u);
  EXPECT_EQ(rank(parse_formula("<> true", sig)), 1u);
  EXPECT_EQ(rank(parse_formula("~ [] <> false", sig)), 2u);
}

TEST(Positive, Examples) {
  const Coalgebra c = pq_model();
  const auto sig = kripke_sig(c);
  EXPECT_TRUE(is_positive(parse_formula("<> p | [] q", sig)));
  EXPECT_FALSE(is_positive(parse_formula("~p", sig)));
  EXPECT_TRUE(is_positive(parse_formula("true", sig)));
  EXPECT_FALSE(is_positive(parse_formula("p -> q", sig)));
}

TEST(Eval, TopEverywhere) {
  const Coalgebra c = forked();
  for (State x = 0; x < c.size(); ++x) EXPECT_TRUE(eval(Formula::top(), c, x));
}

TEST(Eval, SelfLoop) {
  const Coalgebra c = loop_p();
  const auto sig = kripke_sig(c);
  EXPECT_TRUE(eval(parse_formula("<> p", sig), c, 0));
  EXPECT_TRUE(eval(parse_formula("[] [] p", sig), c, 0));
  EXPECT_FALSE(eval(parse_formula("<> ~p", sig), c, 0));
}

TEST(Eval, Graded) {
  const Coalgebra c = from(R"({"functor":"multiset","states":["u"],"transition":{"u":{"u":2}}})");
  const auto sig = parse_signature("graded:0..3", {&c});
  EXPECT_TRUE(eval(parse_formula("<1> true", sig), c, 0));
  EXPECT_FALSE(eval(parse_formula("<2> true", sig), c, 0));
}

TEST(Eval, Probabilistic) {
  const Coalgebra c = dist_split();
  const auto sig = parse_signature("prob:L(1/2),M(1/2)", {&c});
  const State x = c.index_of("x");
  EXPECT_TRUE(eval(parse_formula("L(1/2) true", sig), c, x));
  EXPECT_TRUE(eval(parse_formula("M(1/2) true", sig), c, x));
  EXPECT_TRUE(eval(parse_formula("L(1/2) ~ L(1/2) M(1/2) false", sig), c, x));
}

TEST(Eval, KindMismatchThrows) {
  const Coalgebra c = loop_p();
  EXPECT_THROW(eval(Formula::modal(Modality::graded(1), Formula::top()), c, 0), Error);
}

TEST(Eval, ExtensionIsPointwise) {
  const Coalgebra c = forked();
  const auto sig = parse_signature("kripke:box,diamond", {&c});
  const StateSet ext = extension(parse_formula("<> true", sig), c);
  EXPECT_TRUE(ext.test(c.index_of("x")));
  EXPECT_FALSE(ext.test(c.index_of("a")));
  EXPECT_FALSE(ext.test(c.index_of("b")));
}
