#ifndef COALSIM_PROPERTIES_HPP
#define COALSIM_PROPERTIES_HPP

// Cross-module randomized properties. Each property runs a number of
// trials per functor kind; trial i of kind k draws from its own seed, so a
// counterexample can be replayed from (property, kind, seed) alone.

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coalsim/behavioural.hpp"
#include "coalsim/eval.hpp"
#include "coalsim/formula.hpp"
#include "coalsim/io.hpp"
#include "coalsim/lifting.hpp"
#include "coalsim/oracle.hpp"
#include "coalsim/random.hpp"
#include "coalsim/relation.hpp"
#include "coalsim/simulation.hpp"

namespace coalsim {

struct TrialContext {
  Kind kind = Kind::Kripke;
  std::uint64_t seed = 0;
  Rng rng;
  std::map<std::string, std::size_t> counters;  // property-specific tallies

  void count(const std::string& what, std::size_t n = 1) { counters[what] += n; }
};

/// A trial returns a counterexample description, or nullopt.
using TrialFn = std::function<std::optional<Json>(TrialContext&)>;

struct PropertyInfo {
  std::string id;
  std::string statement;
  std::vector<Kind> kinds;
  bool report_only = false;
  TrialFn trial;
};

struct PropertyRunReport {
  std::string name;
  std::string statement;
  bool report_only = false;
  std::size_t trials = 0;  // total over kinds
  std::map<std::string, std::size_t> trials_per_kind;
  std::map<std::string, std::size_t> counters;
  std::vector<Json> counterexamples;
  double elapsed_seconds = 0;

  bool passed() const { return report_only || counterexamples.empty(); }
};

namespace props {

inline const std::vector<Kind> kAllKinds{Kind::Kripke, Kind::Multiset, Kind::Distribution, Kind::Neighborhood};
inline const std::vector<Kind> kPullbackKinds{Kind::Kripke, Kind::Multiset, Kind::Distribution};

struct GenOptions {
  std::size_t min_states = 1;
  std::size_t max_states = 5;
  bool finite_weights = false;  // no ∞ multiset weights
};

inline GeneratorConfig config_for(Kind k, std::uint64_t seed, const GenOptions& o) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.kind = FunctorKind{k, k == Kind::Kripke ? std::vector<std::string>{"p", "q"} : std::vector<std::string>{}};
  cfg.min_states = o.min_states;
  cfg.max_states = o.max_states;
  cfg.branching = 3;
  cfg.denominator_cap = 4;
  cfg.weight_cap = 3;
  cfg.infinite_percent = o.finite_weights ? 0 : 10;
  cfg.max_minimals = 3;
  return cfg;
}

inline Coalgebra model(TrialContext& ctx, const GenOptions& o = {}) {
  return generate_coalgebra(config_for(ctx.kind, ctx.rng(), o));
}

inline std::vector<std::string> signature_literals(Kind k, bool separating_only) {
  switch (k) {
    case Kind::Kripke:
      if (separating_only) return {"kripke:box,diamond,atoms", "kripke:box,atoms", "kripke:diamond,atoms"};
      return {"kripke:box,diamond,atoms", "kripke:box,atoms", "kripke:diamond,atoms", "kripke:box", "kripke:diamond",
              "kripke:box,diamond", "kripke:diamond,p"};
    case Kind::Multiset:
      if (separating_only) return {"graded:auto"};
      return {"graded:auto", "graded:0..0", "graded:0..1", "graded:0..2"};
    case Kind::Distribution:
      if (separating_only) return {"prob:auto-grid", "prob:auto-grid-more"};
      return {"prob:auto-grid", "prob:auto-grid-more", "prob:L(1/2)", "prob:L(1/3),M(1/2)", "prob:M(0)"};
    case Kind::Neighborhood: return {"nbhd:box"};
  }
  return {};
}

inline LambdaSignature pick_signature(TrialContext& ctx, const std::vector<const Coalgebra*>& models,
                                      bool separating_only) {
  const auto lits = signature_literals(ctx.kind, separating_only);
  return parse_signature(lits[uniform(ctx.rng, 0, lits.size() - 1)], models);
}

/// Largest simulation (or bisimulation) inside `start`: a cheap source of
/// random, usually non-greatest, simulations.
inline Relation largest_within(Relation start, const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                               bool both) {
  while (true) {
    Relation next = detail::refine(start, c, d, sig, both);
    if (next == start) return start;
    start = std::move(next);
  }
}

/// A relation worth testing: random, a random part of the greatest
/// bisimulation, or a simulation carved out of a random relation.
inline Relation interesting_relation(TrialContext& ctx, const Coalgebra& c, const Coalgebra& d,
                                     const LambdaSignature& sig) {
  switch (uniform(ctx.rng, 0, 3)) {
    case 0: return random_relation(ctx.rng, c.size(), d.size(), static_cast<unsigned>(uniform(ctx.rng, 10, 70)));
    case 1: return random_subrelation(ctx.rng, greatest_bisimulation(c, d, sig), 60);
    case 2: return greatest_bisimulation(c, d, sig);
    default:
      return largest_within(random_relation(ctx.rng, c.size(), d.size(), 70), c, d, sig, coin(ctx.rng, 50));
  }
}

inline Json merged(Json a, const Json& b) {
  a.update(b);
  return a;
}

inline Json instance(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig) {
  return Json{{"signature", sig.literal}, {"c", coalgebra_to_json(c)}, {"d", coalgebra_to_json(d)}};
}

inline Json with_relation(Json j, const Relation& s, const Coalgebra& c, const Coalgebra& d) {
  j["relation"] = relation_to_json(s, c.states(), d.states());
  return j;
}

inline Modality random_modality(TrialContext& ctx) {
  switch (ctx.kind) {
    case Kind::Kripke: {
      const std::uint64_t r = uniform(ctx.rng, 0, 3);
      if (r == 0) return Modality::box();
      if (r == 1) return Modality::diamond();
      return Modality::prop(r == 2 ? "p" : "q");
    }
    case Kind::Multiset: return Modality::graded(uniform(ctx.rng, 0, 5));
    case Kind::Distribution: {
      const auto den = static_cast<std::int64_t>(uniform(ctx.rng, 1, 6));
      const Rational p(static_cast<std::int64_t>(uniform(ctx.rng, 0, static_cast<std::uint64_t>(den))), den);
      return coin(ctx.rng, 50) ? Modality::at_least(p) : Modality::more_than(p);
    }
    case Kind::Neighborhood: return Modality::nbhd_box();
  }
  return Modality::box();
}

inline StateSet random_set(TrialContext& ctx, std::size_t n) {
  StateSet a(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(ctx.rng, 50)) a.set(i);
  return a;
}

inline StateSet preimage_of(const std::vector<State>& f, const StateSet& b) {
  StateSet a(f.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    if (b.test(f[x])) a.set(x);
  return a;
}

inline std::vector<std::string> set_names(const StateSet& a) {
  std::vector<std::string> out;
  for (State s : members(a)) out.push_back(std::to_string(s));
  return out;
}

inline Json value_json(const FunctorValue& v, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return value_to_json(v, names);
}

/// Every pair of S preserves every formula in `formulas` from c to d.
inline std::optional<Json> check_preservation(TrialContext& ctx, const Relation& s, const Coalgebra& c,
                                              const Coalgebra& d, const LambdaSignature& sig,
                                              const std::vector<Formula>& formulas) {
  for (const auto& f : formulas) {
    const StateSet ec = extension(f, c), ed = extension(f, d);
    for (auto [x, y] : s.pairs()) {
      ctx.count("triples");
      if (ec.test(x) && !ed.test(y))
        return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"formula", to_string(f)}, {"x", c.name(x)}, {"y", d.name(y)}});
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- trials

inline std::optional<Json> oracle_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, {1, 6}), d = model(ctx, {1, 6});
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const Relation s = interesting_relation(ctx, c, d, sig);
  const auto engine = is_simulation(s, c, d, sig);
  const auto brute = oracle::simulation(s, c, d, sig.modalities);
  ctx.count(engine.holds ? "holds" : "fails");
  bool agree = engine.holds == brute.holds;
  // both route their first failure to the least violating pair
  if (agree && !engine.holds)
    agree = engine.violations.front().from == brute.first->from && engine.violations.front().to == brute.first->to;
  if (!agree)
    return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"engine", engine.holds}, {"oracle", brute.holds}});
  return std::nullopt;
}

inline std::optional<Json> fast_path_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, {1, 6}), d = model(ctx, {1, 6});
  std::vector<std::string> lits;
  switch (ctx.kind) {
    case Kind::Kripke: lits = {"kripke:diamond,atoms", "kripke:box,atoms", "kripke:box,diamond,atoms"}; break;
    case Kind::Multiset: lits = {"graded:auto"}; break;
    case Kind::Distribution: lits = {coin(ctx.rng, 50) ? "prob:auto-grid" : "prob:auto-grid-more"}; break;
    case Kind::Neighborhood: lits = {"nbhd:box"}; break;
  }
  for (const auto& lit : lits) {
    const auto sig = parse_signature(lit, {&c, &d});
    const Relation s = interesting_relation(ctx, c, d, sig);
    const auto fast = fast_simulation_verdict(s, c, d, sig);
    const bool generic = is_simulation(s, c, d, sig).holds;
    ctx.count("checks:" + lit);
    if (!fast || *fast != generic)
      return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"generic", generic}, {"fast", fast ? Json(*fast) : Json("not applicable")}});
  }
  return std::nullopt;
}

inline std::optional<Json> preservation_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = coin(ctx.rng, 25) ? c : model(ctx);
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const Relation s = coin(ctx.rng, 70) ? greatest_simulation(c, d, sig)
                                       : largest_within(random_relation(ctx.rng, c.size(), d.size(), 60), c, d, sig,
                                                        false);
  std::vector<Formula> fs;
  for (int i = 0; i < 6; ++i) fs.push_back(random_formula(ctx.rng, sig, 4, true));
  return check_preservation(ctx, s, c, d, sig, fs);
}

inline std::optional<Json> rank_preservation_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = model(ctx);
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const std::size_t n = uniform(ctx.rng, 0, 4);
  const Relation s = n_simulation_chain(c, d, sig, n).back();
  std::vector<Formula> fs;
  for (int i = 0; i < 6; ++i) fs.push_back(random_formula(ctx.rng, sig, n, true));
  auto bad = check_preservation(ctx, s, c, d, sig, fs);
  if (bad) (*bad)["n"] = n;
  return bad;
}

inline std::optional<Json> n_step_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = model(ctx);
  const std::size_t n = uniform(ctx.rng, 0, 5);
  const Relation steps = n_step_partition(c, d, n).restrict();
  // ≈ₙ is an n-bisimulation for every signature
  const auto any_sig = pick_signature(ctx, {&c, &d}, false);
  if (!is_n_bisimulation(steps, c, d, any_sig, n) || !is_n_simulation(steps, c, d, any_sig, n) ||
      !is_n_simulation(steps.converse(), d, c, any_sig, n))
    return merged(instance(c, d, any_sig), Json{{"n", n}, {"failure", "n-step equivalence is not an n-bisimulation"}});
  const auto sig = pick_signature(ctx, {&c, &d}, true);
  const Relation greatest = greatest_n_bisimulation(c, d, sig, n);
  if (!(greatest == steps))
    return merged(instance(c, d, sig), Json{{"n", n},
                                           {"greatest_n_bisimulation", relation_to_json(greatest, c.states(), d.states())},
                                           {"n_step", relation_to_json(steps, c.states(), d.states())}});
  // the weaker mutual reading always contains it
  if (!steps.is_subset_of(greatest_mutual_n_simulation(c, d, sig, n)))
    return merged(instance(c, d, sig), Json{{"n", n}, {"failure", "n-step equivalence outside mutual n-similarity"}});
  ctx.count("instances");
  return std::nullopt;
}

inline std::optional<Json> soundness_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = coin(ctx.rng, 30) ? c : model(ctx);
  const auto sig = pick_signature(ctx, {&c, &d}, true);
  try {
    const auto res = behavioural_equivalence(c, d, sig);
    if (!verify_witness(res.witness, c, d))
      return merged(instance(c, d, sig), Json{{"failure", "witness maps are not morphisms"}});
    ctx.count(res.relation.empty() ? "empty" : "nonempty");
  } catch (const InternalCheckFailure& e) {
    return merged(instance(c, d, sig), Json{{"failure", e.what()}});
  }
  return std::nullopt;
}

inline std::optional<Json> completeness_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = model(ctx);
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const Relation equiv = stable_partition(c, d).restrict();
  if (!is_bisimulation(equiv, c, d, sig).holds)
    return merged(with_relation(instance(c, d, sig), equiv, c, d), Json{{"failure", "behavioural equivalence is not a bisimulation"}});
  return std::nullopt;
}

inline std::optional<Json> difunctional_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, {1, 6}), d = model(ctx, {1, 6});
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const Relation s = interesting_relation(ctx, c, d, sig);
  const Relation closure = difunctional_closure(s);
  if (!(closure == oracle::difunctional_closure(s)) || !is_difunctional(closure) || !s.is_subset_of(closure))
    return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", "closure disagrees with components"}});
  const bool upto = is_bisimulation_up_to_difunctionality(s, c, d, sig).holds;
  const bool plain = is_bisimulation(closure, c, d, sig).holds;
  ctx.count(upto ? "up-to holds" : "up-to fails");
  if (upto != plain)
    return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"up_to", upto}, {"closure_bisimulation", plain}});
  return std::nullopt;
}

inline GenOptions coupling_sizes(Kind k) {
  // neighbourhood couplings are found by enumeration over few cells
  return k == Kind::Neighborhood ? GenOptions{1, 3, true} : GenOptions{1, 5, true};
}

inline std::optional<Json> t_implies_lambda_trial(TrialContext& ctx) {
  const auto sizes = coupling_sizes(ctx.kind);
  const Coalgebra c = model(ctx, sizes), d = model(ctx, sizes);
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  Relation s = interesting_relation(ctx, c, d, sig);
  if (ctx.kind == Kind::Neighborhood)
    while (s.size() > 3) s = random_subrelation(ctx.rng, s, 70);
  try {
    if (auto k = t_bisimulation_check(s, c, d)) {
      ctx.count("couplings");
      if (!verify_coupling(*k, c, d) || !is_bisimulation(s, c, d, sig).holds)
        return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", "coupling without Λ-bisimulation"}});
    }
    if (ctx.kind != Kind::Neighborhood || difunctional_closure(s).size() <= 4)
      if (auto k = t_bisim_up_to_difunctionality_check(s, c, d)) {
        ctx.count("up-to couplings");
        if (!verify_coupling(*k, c, d) || !is_bisimulation_up_to_difunctionality(s, c, d, sig).holds)
          return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", "up-to coupling without up-to Λ-bisimulation"}});
      }
  } catch (const BudgetExceeded&) {
    ctx.count("over budget");
  }
  return std::nullopt;
}

/// Coupling search outcome cross-checked against the Hall-condition oracle.
inline std::optional<std::string> coupling_mismatch(const Relation& s, const Relation& cells, const Coalgebra& c,
                                                    const Coalgebra& d, const std::optional<Coupling>& found) {
  bool all = true;
  for (auto [x, y] : s.pairs()) all = all && oracle::coupling_exists(c.at(x), d.at(y), cells);
  if (found.has_value() != all) return std::string("coupling search disagrees with transport oracle");
  if (found && !verify_coupling(*found, c, d)) return std::string("coupling fails its marginals");
  return std::nullopt;
}

/// Difunctional bisimulations admit couplings; up-to bisimulations admit
/// up-to couplings.
inline std::optional<Json> t_bisim_check_relation(TrialContext& ctx, const Relation& s, const Coalgebra& c,
                                                  const Coalgebra& d, const LambdaSignature& sig) {
  const bool dif = is_difunctional(s);
  const auto plain = t_bisimulation_check(s, c, d);
  if (auto bad = coupling_mismatch(s, s, c, d, plain))
    return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", *bad}});
  if (dif && is_bisimulation(s, c, d, sig).holds) {
    ctx.count("difunctional bisimulations");
    if (!plain)
      return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", "difunctional Λ-bisimulation without coupling"}});
  }
  if (is_bisimulation_up_to_difunctionality(s, c, d, sig).holds) {
    ctx.count("up-to bisimulations");
    const auto upto = t_bisim_up_to_difunctionality_check(s, c, d);
    if (auto bad = coupling_mismatch(s, difunctional_closure(s), c, d, upto))
      return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", *bad}});
    if (!upto)
      return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", "up-to Λ-bisimulation without up-to coupling"}});
  }
  return std::nullopt;
}

inline std::optional<Json> t_bisim_trial(TrialContext& ctx) {
  {
    // every relation between two small models
    const Coalgebra c = model(ctx, {1, 3, true}), d = model(ctx, {1, 3, true});
    const auto sig = pick_signature(ctx, {&c, &d}, true);
    std::optional<Json> bad;
    oracle::for_each_relation(c.size(), d.size(), [&](const Relation& s) {
      if (!bad) bad = t_bisim_check_relation(ctx, s, c, d, sig);
      ctx.count("exhaustive relations");
    });
    if (bad) return bad;
  }
  const Coalgebra c = model(ctx, {4, 6, true}), d = model(ctx, {4, 6, true});
  const auto sig = pick_signature(ctx, {&c, &d}, true);
  ctx.count("random larger instances");
  return t_bisim_check_relation(ctx, interesting_relation(ctx, c, d, sig), c, d, sig);
}

inline std::optional<Json> up_to_soundness_trial(TrialContext& ctx) {
  const auto sizes = coupling_sizes(ctx.kind);
  const Coalgebra c = model(ctx, sizes), d = model(ctx, sizes);
  const auto sig = pick_signature(ctx, {&c, &d}, true);
  Relation s = interesting_relation(ctx, c, d, sig);
  if (ctx.kind == Kind::Neighborhood)
    while (difunctional_closure(s).size() > 4) s = random_subrelation(ctx.rng, s, 70);
  const auto k = t_bisim_up_to_difunctionality_check(s, c, d);
  if (!k) return std::nullopt;
  ctx.count("up-to couplings");
  const Relation equiv = behavioural_equivalence(c, d, sig).relation;
  if (!s.is_subset_of(equiv))
    return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"failure", "pair outside behavioural equivalence"}});
  return std::nullopt;
}

inline std::optional<Json> functor_laws_trial(TrialContext& ctx) {
  const auto cfg = config_for(ctx.kind, 0, {});
  const std::size_t n = uniform(ctx.rng, 1, 6), m = uniform(ctx.rng, 1, 6), k = uniform(ctx.rng, 1, 6);
  const FunctorValue t = random_value(cfg, n, ctx.rng);
  std::vector<State> id(n);
  std::iota(id.begin(), id.end(), State{0});
  if (!values_equal(relabel(t, id), t)) return Json{{"value", value_json(t, n)}, {"failure", "identity law"}};
  const auto f = random_map(ctx.rng, n, m), g = random_map(ctx.rng, m, k);
  std::vector<State> gf(n);
  for (std::size_t x = 0; x < n; ++x) gf[x] = g[f[x]];
  if (!values_equal(relabel(relabel(t, f), g), relabel(t, gf)))
    return Json{{"value", value_json(t, n)}, {"f", f}, {"g", g}, {"failure", "composition law"}};
  const std::size_t big = n + uniform(ctx.rng, 0, 3);
  const auto inj = random_injection(ctx.rng, n, big);
  const FunctorValue u = coin(ctx.rng, 20) ? t : random_value(cfg, n, ctx.rng);
  if (values_equal(t, u) != values_equal(relabel(t, inj), relabel(u, inj)))
    return Json{{"t", value_json(t, n)}, {"u", value_json(u, n)}, {"injection", inj}, {"failure", "injectivity"}};
  ctx.count("samples");
  return std::nullopt;
}

inline std::optional<Json> naturality_trial(TrialContext& ctx) {
  const auto cfg = config_for(ctx.kind, 0, {});
  const std::size_t n = uniform(ctx.rng, 1, 6), m = uniform(ctx.rng, 1, 6);
  const FunctorValue t = random_value(cfg, n, ctx.rng);
  const auto f = random_map(ctx.rng, n, m);
  const Modality h = random_modality(ctx);
  const StateSet b = random_set(ctx, m);
  if (satisfies(relabel(t, f), h, b) != satisfies(t, h, preimage_of(f, b)))
    return Json{{"value", value_json(t, n)}, {"f", f}, {"modality", to_string(h)}, {"set", set_names(b)},
                {"failure", "naturality"}};
  // monotony: A ⊆ A ∪ extra
  const StateSet a = random_set(ctx, n);
  const StateSet bigger = a | random_set(ctx, n);
  if (satisfies(t, h, a) && !satisfies(t, h, bigger))
    return Json{{"value", value_json(t, n)}, {"modality", to_string(h)}, {"set", set_names(a)},
                {"superset", set_names(bigger)}, {"failure", "monotony"}};
  ctx.count("samples");
  return std::nullopt;
}

inline std::optional<Json> base_guarantee_trial(TrialContext& ctx) {
  const auto cfg = config_for(ctx.kind, 0, {});
  const std::size_t n = uniform(ctx.rng, 1, 6);
  const FunctorValue t = random_value(cfg, n, ctx.rng);
  const StateSet b = make_set(n, base(t));
  const Modality h = random_modality(ctx);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    StateSet a(n, mask);
    if (satisfies(t, h, a) != satisfies(t, h, a & b))
      return Json{{"value", value_json(t, n)}, {"modality", to_string(h)}, {"set", set_names(a)}};
  }
  return std::nullopt;
}

inline std::optional<Json> lambda_preorder_trial(TrialContext& ctx) {
  const auto cfg = config_for(ctx.kind, 0, {});
  const std::size_t n = uniform(ctx.rng, 1, 3);
  std::vector<FunctorValue> vs;
  for (int i = 0; i < 3; ++i) vs.push_back(random_value(cfg, n, ctx.rng));
  // a one-state-per-value model to bind the signature to
  std::vector<std::string> names;
  std::vector<FunctorValue> trans;
  for (std::size_t i = 0; i < std::max<std::size_t>(n, 3); ++i) {
    names.push_back("s" + std::to_string(i));
    trans.push_back(i < 3 ? vs[i] : vs[0]);
  }
  const Coalgebra holder(cfg.kind, names, trans);
  const auto sig = pick_signature(ctx, {&holder}, false);
  auto leq_oracle = [&](const FunctorValue& t, const FunctorValue& u) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
      for (const auto& h : sig.modalities)
        if (oracle::holds(t, h, oracle::subset_of_mask(mask, n)) && !oracle::holds(u, h, oracle::subset_of_mask(mask, n)))
          return false;
    return true;
  };
  const auto& [t, u, v] = std::tie(vs[0], vs[1], vs[2]);
  const bool tu = lambda_leq(t, u, sig), uv = lambda_leq(u, v, sig), tv = lambda_leq(t, v, sig);
  if (!lambda_leq(t, t, sig) || (tu && uv && !tv) || tu != leq_oracle(t, u) || uv != leq_oracle(u, v))
    return Json{{"signature", sig.literal}, {"t", value_json(t, n)}, {"u", value_json(u, n)}, {"v", value_json(v, n)}};
  if (tu && uv) ctx.count("chains");
  return std::nullopt;
}

inline std::optional<Json> separation_trial(TrialContext& ctx) {
  const auto cfg = config_for(ctx.kind, 0, {});
  const std::size_t n = uniform(ctx.rng, 1, 4);
  const FunctorValue t = random_value(cfg, n, ctx.rng);
  const FunctorValue u = coin(ctx.rng, 15) ? t : random_value(cfg, n, ctx.rng);
  std::vector<std::string> names;
  std::vector<FunctorValue> trans;
  for (std::size_t i = 0; i < std::max<std::size_t>(n, 2); ++i) {
    names.push_back("s" + std::to_string(i));
    trans.push_back(i == 1 ? u : t);
  }
  const Coalgebra holder(cfg.kind, names, trans);
  const auto sig = pick_signature(ctx, {&holder}, true);
  const auto pair = distinguishing_pair(t, u, sig);
  if (pair.has_value() == values_equal(t, u))
    return Json{{"signature", sig.literal}, {"t", value_json(t, n)}, {"u", value_json(u, n)},
                {"distinguished", pair.has_value()}};
  if (pair && satisfies(t, pair->first, make_set(n, pair->second)) ==
                  satisfies(u, pair->first, make_set(n, pair->second)))
    return Json{{"signature", sig.literal}, {"failure", "reported pair does not distinguish"}};
  return std::nullopt;
}

inline std::optional<Json> stability_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = model(ctx), e = model(ctx);
  const auto sig = pick_signature(ctx, {&c, &d, &e}, false);
  auto some_sim = [&](const Coalgebra& a, const Coalgebra& b) {
    return largest_within(random_relation(ctx.rng, a.size(), b.size(), 80), a, b, sig, false);
  };
  const Relation s1 = some_sim(c, d), s2 = some_sim(c, d), t = some_sim(d, e);
  Json base = Json{{"signature", sig.literal}, {"c", coalgebra_to_json(c)}, {"d", coalgebra_to_json(d)}};
  if (!is_simulation(s1 | s2, c, d, sig).holds) return merged(base, Json{{"failure", "union"}});
  if (!is_simulation(s1.compose(t), c, e, sig).holds)
    return merged(base, Json{{"e", coalgebra_to_json(e)}, {"failure", "composition"}});
  if (!is_simulation(Relation::identity(c.size()), c, c, sig).holds) return merged(base, Json{{"failure", "identity"}});
  const Relation eq = greatest_bisimulation(c, c, sig);
  if (!(eq == eq.converse()) || !Relation::identity(c.size()).is_subset_of(eq) || !eq.compose(eq).is_subset_of(eq))
    return merged(base, Json{{"failure", "greatest bisimulation on one model is not an equivalence"}});
  return std::nullopt;
}

/// The quotient of c by its behavioural equivalence, with the quotient map.
inline std::pair<Coalgebra, std::vector<State>> quotient_of(const Coalgebra& c) {
  const QuotientResult q = quotient_witness(stable_partition(c, c).restrict(), c, c);
  const auto& w = std::get<QuotientWitness>(q);
  FunctorKind kind = c.kind();
  Coalgebra e(kind, block_names(w.block_count), w.chi);
  return {std::move(e), w.kappa1};
}

/// c embedded into a larger random model by an injective morphism.
inline std::pair<Coalgebra, std::vector<State>> extension_of(TrialContext& ctx, const Coalgebra& c) {
  const std::size_t big = c.size() + uniform(ctx.rng, 0, 3);
  const auto f = random_injection(ctx.rng, c.size(), big);
  const auto cfg = config_for(ctx.kind, 0, {});
  std::vector<std::string> names;
  std::vector<FunctorValue> trans;
  for (std::size_t i = 0; i < big; ++i) {
    names.push_back("e" + std::to_string(i));
    trans.push_back(random_value(cfg, big, ctx.rng));
  }
  for (State x = 0; x < c.size(); ++x) trans[f[x]] = relabel(c.at(x), f);
  return {Coalgebra(c.kind(), names, trans), f};
}

inline std::optional<Json> morphism_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx);
  const auto sig = pick_signature(ctx, {&c}, false);
  auto [e, f] = coin(ctx.rng, 50) ? quotient_of(c) : extension_of(ctx, c);
  const Relation g = Relation::graph(f, e.size());
  if (!is_bisimulation(g, c, e, sig).holds)
    return merged(instance(c, e, sig), Json{{"map", f}, {"failure", "graph of a morphism is not a bisimulation"}});
  if (!is_lambda_homomorphism(f, c, e, sig))
    return merged(instance(c, e, sig), Json{{"map", f}, {"failure", "morphism is not a homomorphism"}});
  return std::nullopt;
}

inline std::optional<Json> homomorphism_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx), d = model(ctx);
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const auto f = random_map(ctx.rng, c.size(), d.size());
  const bool hom = is_lambda_homomorphism(f, c, d, sig);
  const bool sim = is_simulation(Relation::graph(f, d.size()), c, d, sig).holds;
  ctx.count(hom ? "homomorphisms" : "non-homomorphisms");
  if (hom != sim) return merged(instance(c, d, sig), Json{{"map", f}, {"homomorphism", hom}, {"graph_simulation", sim}});
  return std::nullopt;
}

inline GenOptions tiny(TrialContext& ctx) {
  // |X|·|Y| ≤ 9 keeps relation enumeration at 512
  (void)ctx;
  return GenOptions{1, 3, false};
}

inline std::optional<Json> n_chain_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, tiny(ctx)), d = model(ctx, tiny(ctx));
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  const std::size_t n = uniform(ctx.rng, 0, 3);
  for (int i = 0; i < 4; ++i) {
    const Relation s = random_relation(ctx.rng, c.size(), d.size(), static_cast<unsigned>(uniform(ctx.rng, 20, 90)));
    const bool engine = is_n_simulation(s, c, d, sig, n);
    if (engine != oracle::is_n_simulation(s, c, d, sig.modalities, n))
      return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"n", n}, {"engine", engine}});
    const bool engine_bi = is_n_bisimulation(s, c, d, sig, n);
    if (engine_bi != oracle::is_n_simulation(s, c, d, sig.modalities, n, true))
      return merged(with_relation(instance(c, d, sig), s, c, d), Json{{"n", n}, {"engine_bisimulation", engine_bi}});
    ctx.count(engine ? "n-simulations" : "non-n-simulations");
    ctx.count(engine_bi ? "n-bisimulations" : "non-n-bisimulations");
  }
  return std::nullopt;
}

inline std::optional<Json> greatest_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, tiny(ctx)), d = model(ctx, tiny(ctx));
  const auto sig = pick_signature(ctx, {&c, &d}, false);
  if (!(greatest_simulation(c, d, sig) == oracle::union_of_simulations(c, d, sig.modalities, false)))
    return merged(instance(c, d, sig), Json{{"failure", "greatest simulation"}});
  if (!(greatest_bisimulation(c, d, sig) == oracle::union_of_simulations(c, d, sig.modalities, true)))
    return merged(instance(c, d, sig), Json{{"failure", "greatest bisimulation"}});
  if (ctx.kind == Kind::Kripke) {
    const Coalgebra a = model(ctx, {1, 7}), b = model(ctx, {1, 7});
    const auto full = parse_signature(coin(ctx.rng, 50) ? "kripke:box,atoms" : "kripke:diamond,atoms", {&a, &b});
    if (!(greatest_bisimulation(a, b, full) == oracle::kripke_bisimilarity(a, b)))
      return merged(instance(a, b, full), Json{{"failure", "differs from classical bisimilarity"}});
  }
  return std::nullopt;
}

inline std::optional<Json> eval_laws_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, {1, 8});
  const auto sig = pick_signature(ctx, {&c}, false);
  const Formula f = random_formula(ctx.rng, sig, 3, false), g = random_formula(ctx.rng, sig, 3, false);
  const StateSet ef = extension(f, c), eg = extension(g, c);
  Json where{{"signature", sig.literal}, {"c", coalgebra_to_json(c)}, {"f", to_string(f)}, {"g", to_string(g)}};
  if (extension(Formula::neg(f), c) != ~ef) return merged(where, Json{{"failure", "negation"}});
  if (extension(Formula::conj(f, g), c) != (ef & eg)) return merged(where, Json{{"failure", "conjunction"}});
  if (extension(Formula::disj(f, g), c) != (ef | eg)) return merged(where, Json{{"failure", "disjunction"}});
  if (extension(Formula::implies(f, g), c) != (~ef | eg)) return merged(where, Json{{"failure", "implication"}});
  if (ctx.kind == Kind::Kripke) {
    const StateSet dia = extension(Formula::modal(Modality::diamond(), f), c);
    const StateSet box = extension(Formula::modal(Modality::box(), f), c);
    for (State x = 0; x < c.size(); ++x) {
      const auto& succ = std::get<KripkeValue>(c.at(x)).succ;
      bool some = false, all = true;
      for (State s : succ) {
        some = some || ef.test(s);
        all = all && ef.test(s);
      }
      if (dia.test(x) != some || box.test(x) != all) return merged(where, Json{{"failure", "successor semantics"}});
    }
  }
  return std::nullopt;
}

/// Rank by explicit stack, independent of the recursive definition.
inline std::size_t rank_by_stack(const Formula& f) {
  std::size_t best = 0;
  std::vector<std::pair<Formula, std::size_t>> stack{{f, 0}};
  while (!stack.empty()) {
    auto [g, depth] = stack.back();
    stack.pop_back();
    switch (g.tag()) {
      case Formula::Tag::Top:
      case Formula::Tag::Bot: best = std::max(best, depth); break;
      case Formula::Tag::Neg: stack.emplace_back(g.child(), depth); break;
      case Formula::Tag::And:
      case Formula::Tag::Or:
        stack.emplace_back(g.left(), depth);
        stack.emplace_back(g.right(), depth);
        break;
      case Formula::Tag::Modal:
        if (g.has_child()) stack.emplace_back(g.child(), depth + 1);
        else best = std::max(best, depth + 1);
        break;
    }
  }
  return best;
}

inline std::optional<Json> parse_roundtrip_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, {1, 2});
  const auto sig = pick_signature(ctx, {&c}, false);
  const Formula f = random_formula(ctx.rng, sig, 5, coin(ctx.rng, 50), 20);
  const std::string text = to_string(f);
  try {
    if (!(parse_formula(text, sig) == f)) return Json{{"signature", sig.literal}, {"formula", text}, {"failure", "round trip"}};
  } catch (const Error& e) {
    return Json{{"signature", sig.literal}, {"formula", text}, {"failure", e.what()}};
  }
  if (rank(f) != rank_by_stack(f)) return Json{{"formula", text}, {"rank", rank(f)}, {"oracle", rank_by_stack(f)}};
  return std::nullopt;
}

inline std::optional<Json> generator_trial(TrialContext& ctx) {
  const auto cfg = config_for(ctx.kind, ctx.rng(), {1, 6});
  const Coalgebra a = generate_coalgebra(cfg), b = generate_coalgebra(cfg);
  if (coalgebra_to_json(a) != coalgebra_to_json(b)) return Json{{"seed", cfg.seed}, {"failure", "not deterministic"}};
  try {
    validate(a);
  } catch (const ValidationError& e) {
    return Json{{"model", coalgebra_to_json(a)}, {"failure", e.what()}};
  }
  for (const auto& v : a.transition()) {
    const auto* nv = std::get_if<NbhdValue>(&v);
    if (nv ? std::any_of(nv->minimals.begin(), nv->minimals.end(),
                         [&](const std::vector<State>& m) { return m.size() > cfg.branching; })
           : base(v).size() > cfg.branching)
      return Json{{"model", coalgebra_to_json(a)}, {"failure", "branching cap"}};
    if (const auto* dv = std::get_if<DistValue>(&v))
      for (const auto& e : dv->mass)
        if (e.second.denominator() > cfg.denominator_cap)
          return Json{{"model", coalgebra_to_json(a)}, {"failure", "denominator cap"}};
  }
  return std::nullopt;
}

/// Searches for Λ-bisimulations (difunctional or not) that admit no
/// coupling. Findings are reported, never asserted.
inline std::optional<Json> open_problem_trial(TrialContext& ctx) {
  const Coalgebra c = model(ctx, {1, 3, true}), d = model(ctx, {1, 3, true});
  const auto sig = pick_signature(ctx, {&c, &d}, true);
  std::optional<Json> found;
  oracle::for_each_relation(c.size(), d.size(), [&](const Relation& s) {
    if (found || !is_bisimulation(s, c, d, sig).holds) return;
    ctx.count(is_difunctional(s) ? "difunctional bisimulations" : "non-difunctional bisimulations");
    if (!t_bisimulation_check(s, c, d))
      found = merged(with_relation(instance(c, d, sig), s, c, d),
                     Json{{"note", "Λ-bisimulation without a coupling"}, {"difunctional", is_difunctional(s)}});
  });
  return found;
}

}  // namespace props

/// Every known property, in manifest order.
inline const std::vector<PropertyInfo>& property_registry() {
  using namespace props;
  static const std::vector<PropertyInfo> registry{
      {"oracle", "base-restricted simulation check agrees with full subset quantification", kAllKinds, false,
       oracle_trial},
      {"fast-path", "functor-specific simulation characterisations agree with the generic check", kAllKinds, false,
       fast_path_trial},
      {"preservation", "simulations preserve positive formulas", kAllKinds, false, preservation_trial},
      {"rank-preservation", "n-simulations preserve positive formulas of rank at most n", kAllKinds, false,
       rank_preservation_trial},
      {"n-step", "n-step equivalence is an n-bisimulation, and is the greatest one for separating signatures",
       kAllKinds, false, n_step_trial},
      {"soundness", "greatest bisimulation, stabilised partition and quotient witness agree", kAllKinds, false,
       soundness_trial},
      {"completeness", "behavioural equivalence is a bisimulation", kAllKinds, false, completeness_trial},
      {"prop-difunctional", "bisimulation up to difunctionality iff the difunctional closure is a bisimulation",
       kAllKinds, false, difunctional_trial},
      {"t-implies-lambda", "T-bisimulations (up to difunctionality) are Λ-bisimulations (up to difunctionality)",
       kAllKinds, false, t_implies_lambda_trial},
      {"t-bisim", "difunctional Λ-bisimulations are T-bisimulations for weak-pullback-preserving functors",
       kPullbackKinds, false, t_bisim_trial},
      {"up-to-soundness", "T-bisimulations up to difunctionality relate only behaviourally equivalent states",
       kAllKinds, false, up_to_soundness_trial},
      {"functor-laws", "relabelling preserves identities, composition and injectivity", kAllKinds, false,
       functor_laws_trial},
      {"naturality", "predicate liftings are natural and monotone", kAllKinds, false, naturality_trial},
      {"base-guarantee", "satisfaction only reads the part of a predicate inside the base", kAllKinds, false,
       base_guarantee_trial},
      {"lambda-preorder", "the Λ-ordering is a preorder and matches full quantification", kAllKinds, false,
       lambda_preorder_trial},
      {"separation", "separating signatures distinguish distinct values", kAllKinds, false, separation_trial},
      {"stability", "simulations are closed under union, composition and contain identities", kAllKinds, false,
       stability_trial},
      {"homomorphism", "a map is a Λ-homomorphism iff its graph is a Λ-simulation", kAllKinds, false,
       homomorphism_trial},
      {"morphism", "graphs of coalgebra morphisms are Λ-bisimulations", kAllKinds, false, morphism_trial},
      {"n-simulation-chain", "containment in the greatest chain decides the existential n-simulation definition",
       kAllKinds, false, n_chain_trial},
      {"greatest-simulation", "fixpoint results equal the union of all (bi)simulations", kAllKinds, false,
       greatest_trial},
      {"eval-laws", "evaluation respects Boolean connectives and Kripke successor semantics", kAllKinds, false,
       eval_laws_trial},
      {"parse-roundtrip", "printing then parsing returns the same formula; rank matches", kAllKinds, false,
       parse_roundtrip_trial},
      {"generator", "generated models are deterministic per seed, valid and within caps", kAllKinds, false,
       generator_trial},
      {"open-problem-search", "search for Λ-bisimulations that are not T-bisimulations (report only)",
       std::vector<Kind>{Kind::Kripke, Kind::Distribution}, true, open_problem_trial},
  };
  return registry;
}

inline const PropertyInfo& find_property(std::string_view id) {
  for (const auto& p : property_registry())
    if (p.id == id) return p;
  throw ValidationError("unknown property '" + std::string(id) + "'");
}

/// Manifest of property ids and what each one tests.
inline Json property_manifest() {
  Json props = Json::array();
  for (const auto& p : property_registry()) {
    Json kinds = Json::array();
    for (Kind k : p.kinds) kinds.push_back(kind_name(k));
    props.push_back(Json{{"id", p.id}, {"statement", p.statement}, {"kinds", kinds}, {"report_only", p.report_only}});
  }
  return Json{{"properties", props}};
}

/// Runs `trials` trials of a property for each of its kinds (or only for
/// `only`). Trial i of kind k uses derive_seed(seed + k, i).
inline PropertyRunReport run_property_suite(std::string_view name, std::size_t trials, std::uint64_t seed,
                                            std::optional<Kind> only = std::nullopt) {
  const PropertyInfo& info = find_property(name);
  PropertyRunReport rep;
  rep.name = info.id;
  rep.statement = info.statement;
  rep.report_only = info.report_only;
  const auto start = std::chrono::steady_clock::now();
  for (Kind k : info.kinds) {
    if (only && *only != k) continue;
    for (std::size_t i = 0; i < trials; ++i) {
      TrialContext ctx;
      ctx.kind = k;
      ctx.seed = derive_seed(seed + static_cast<std::uint64_t>(k), i);
      ctx.rng.seed(ctx.seed);
      auto bad = info.trial(ctx);
      ++rep.trials;
      ++rep.trials_per_kind[kind_name(k)];
      for (const auto& [what, n] : ctx.counters) rep.counters[what] += n;
      if (bad) {
        Json entry{{"kind", kind_name(k)}, {"trial", i}, {"seed", ctx.seed}};
        entry.update(*bad);
        rep.counterexamples.push_back(std::move(entry));
      }
    }
  }
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline Json report_to_json(const PropertyRunReport& r) {
  return Json{{"property", r.name},
              {"statement", r.statement},
              {"report_only", r.report_only},
              {"trials", r.trials},
              {"trials_per_kind", r.trials_per_kind},
              {"counters", r.counters},
              {"counterexamples", r.counterexamples},
              {"passed", r.passed()}};
}

}  // namespace coalsim

#endif  // COALSIM_PROPERTIES_HPP
