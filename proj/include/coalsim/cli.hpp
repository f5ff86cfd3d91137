#ifndef COALSIM_CLI_HPP
#define COALSIM_CLI_HPP

// Command-line front end. run_cli is the whole program minus main(), so
// tests can drive it with in-memory streams.
//
// Exit status: 0 holds / found, 1 fails / none, 2 usage or input error.

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coalsim/behavioural.hpp"
#include "coalsim/eval.hpp"
#include "coalsim/formula.hpp"
#include "coalsim/io.hpp"
#include "coalsim/properties.hpp"
#include "coalsim/random.hpp"
#include "coalsim/simulation.hpp"

namespace coalsim {

namespace cli {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string sig;
  bool json = false;
};

inline LambdaSignature bind_signature(const Globals& g, const std::vector<const Coalgebra*>& models) {
  return g.sig.empty() ? default_signature(models) : parse_signature(g.sig, models);
}

inline void print_pairs(std::ostream& out, const Relation& r, const Coalgebra& c, const Coalgebra& d) {
  for (auto [x, y] : r.pairs()) out << c.name(x) << ' ' << d.name(y) << '\n';
  out << r.size() << (r.size() == 1 ? " pair\n" : " pairs\n");
}

inline std::string subset_text(const std::vector<State>& members, const std::vector<std::string>& names) {
  std::string s = "{";
  for (std::size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + names.at(members[i]);
  return s + "}";
}

inline void print_report(std::ostream& out, const SimulationReport& rep, const Coalgebra& c, const Coalgebra& d) {
  if (rep.holds) {
    out << "holds\n";
    return;
  }
  out << "fails (" << rep.total_violations << (rep.total_violations == 1 ? " violation)\n" : " violations)\n");
  for (const auto& v : rep.violations) {
    const bool fwd = v.direction == Direction::Forward;
    const auto& from = fwd ? c : d;
    const auto& to = fwd ? d : c;
    out << "  " << (fwd ? "forward " : "backward ") << from.name(v.from) << " -> " << to.name(v.to) << ": "
        << to_string(v.modality) << ' ' << subset_text(v.subset, from.states()) << '\n';
  }
}

/// A relation file read on its own: carriers are the names in order of
/// first appearance.
struct NamedRelation {
  std::vector<std::string> left, right;
  Relation relation;
};

inline NamedRelation read_named_relation(const Json& j) {
  const Json& pairs = detail::member(j, "pairs", "relation");
  if (!pairs.is_array()) throw ValidationError("relation: \"pairs\" must be an array");
  NamedRelation nr;
  std::vector<std::pair<State, State>> idx;
  auto slot = [](std::vector<std::string>& names, const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it != names.end()) return static_cast<State>(it - names.begin());
    names.push_back(n);
    return static_cast<State>(names.size() - 1);
  };
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw ValidationError("relation: each pair must be [left, right]");
    const State x = slot(nr.left, p[0].get<std::string>());
    const State y = slot(nr.right, p[1].get<std::string>());
    idx.emplace_back(x, y);
  }
  nr.relation = Relation::from_pairs(nr.left.size(), nr.right.size(), idx);
  return nr;
}

inline Kind parse_kind(const std::string& name) {
  auto k = kind_from_name(name);
  if (!k) throw ValidationError("unknown functor kind '" + name + "'");
  return *k;
}

}  // namespace cli

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Coalgebraic simulation and bisimulation checker", "coalsim"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--sig", g.sig, "Modal signature, e.g. kripke:box,diamond,atoms");
  app.add_flag("--json", g.json, "Machine-readable output");

  std::string model_a, model_b, rel_file, state, formula, witness_out, property;
  bool bi = false, up_to = false;
  std::size_t n = 0, trials = 100;
  std::uint64_t seed = 1;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula at a state");
  eval_cmd->add_option("MODEL", model_a)->required();
  eval_cmd->add_option("STATE", state)->required();
  eval_cmd->add_option("FORMULA", formula)->required();

  auto* check_cmd = app.add_subcommand("check-sim", "Check that a relation is a (bi)simulation");
  check_cmd->add_option("C", model_a)->required();
  check_cmd->add_option("D", model_b)->required();
  check_cmd->add_option("REL", rel_file)->required();
  check_cmd->add_flag("--bi", bi, "Check both directions");
  auto* check_n = check_cmd->add_option("--n", n, "Depth bound (n-simulation)");
  check_cmd->add_flag("--up-to-difunctional", up_to, "Bisimulation up to difunctionality");

  auto* gsim_cmd = app.add_subcommand("greatest-sim", "Largest simulation");
  auto* gbis_cmd = app.add_subcommand("greatest-bisim", "Largest bisimulation");
  CLI::Option* greatest_n[2];
  int slot = 0;
  for (auto* cmd : {gsim_cmd, gbis_cmd}) {
    cmd->add_option("C", model_a)->required();
    cmd->add_option("D", model_b)->required();
    greatest_n[slot++] = cmd->add_option("--n", n, "Depth bound");
  }

  auto* nstep_cmd = app.add_subcommand("nstep", "n-step equivalence partition");
  nstep_cmd->add_option("C", model_a)->required();
  nstep_cmd->add_option("D", model_b)->required();
  nstep_cmd->add_option("--n", n, "Depth")->required();

  auto* beh_cmd = app.add_subcommand("behavioural", "Behavioural equivalence with cross-checks");
  beh_cmd->add_option("C", model_a)->required();
  beh_cmd->add_option("D", model_b)->required();
  beh_cmd->add_option("--witness", witness_out, "Write the quotient witness here");

  auto* closure_cmd = app.add_subcommand("closure", "Difunctional closure of a relation");
  closure_cmd->add_option("REL", rel_file)->required();

  auto* tb_cmd = app.add_subcommand("tbisim", "Search a T-bisimulation coupling");
  tb_cmd->add_option("C", model_a)->required();
  tb_cmd->add_option("D", model_b)->required();
  tb_cmd->add_option("REL", rel_file)->required();
  tb_cmd->add_flag("--up-to-difunctional", up_to, "Couple over the difunctional closure");

  auto* rt_cmd = app.add_subcommand("randtest", "Run a randomized property");
  rt_cmd->add_option("PROPERTY", property)->required();
  rt_cmd->add_option("--trials", trials, "Trials per functor kind");
  rt_cmd->add_option("--seed", seed, "Seed");

  app.add_subcommand("properties", "List property ids");

  std::string gen_kind = "kripke";
  std::size_t gen_min = 1, gen_max = 4;
  GeneratorConfig gen_cfg;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a random model");
  gen_cmd->add_option("--kind", gen_kind, "kripke | multiset | distribution | neighborhood");
  gen_cmd->add_option("--min-states", gen_min);
  gen_cmd->add_option("--max-states", gen_max);
  gen_cmd->add_option("--seed", gen_cfg.seed);
  gen_cmd->add_option("--branching", gen_cfg.branching);
  gen_cmd->add_option("--denominator-cap", gen_cfg.denominator_cap);
  gen_cmd->add_option("--weight-cap", gen_cfg.weight_cap);

  std::vector<const char*> argv{"coalsim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kHolds;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (eval_cmd->parsed()) {
      const Coalgebra c = load_coalgebra(model_a);
      const auto sig = bind_signature(g, {&c});
      const Formula f = parse_formula(formula, sig);
      const bool v = eval(f, c, c.index_of(state));
      if (g.json) out << Json{{"state", state}, {"formula", to_string(f)}, {"holds", v}}.dump() << '\n';
      else out << (v ? "true" : "false") << '\n';
      return v ? kHolds : kFails;
    }

    if (check_cmd->parsed()) {
      const Coalgebra c = load_coalgebra(model_a), d = load_coalgebra(model_b);
      const auto sig = bind_signature(g, {&c, &d});
      const Relation s = relation_from_json(read_json_file(rel_file), c, d);
      if (check_n->count() > 0) {
        const bool v = bi ? is_n_bisimulation(s, c, d, sig, n) : is_n_simulation(s, c, d, sig, n);
        if (g.json) out << Json{{"holds", v}, {"n", n}, {"bisimulation", bi}}.dump() << '\n';
        else out << (v ? "holds" : "fails") << '\n';
        return v ? kHolds : kFails;
      }
      SimulationReport rep = up_to ? is_bisimulation_up_to_difunctionality(s, c, d, sig)
                             : bi  ? is_bisimulation(s, c, d, sig)
                                   : is_simulation(s, c, d, sig);
      if (g.json) out << report_to_json(rep, c, d).dump() << '\n';
      else print_report(out, rep, c, d);
      return rep.holds ? kHolds : kFails;
    }

    for (int i = 0; i < 2; ++i) {
      auto* cmd = i == 0 ? gsim_cmd : gbis_cmd;
      if (!cmd->parsed()) continue;
      const Coalgebra c = load_coalgebra(model_a), d = load_coalgebra(model_b);
      const auto sig = bind_signature(g, {&c, &d});
      const bool bounded = greatest_n[i]->count() > 0;
      Relation r = i == 0 ? (bounded ? n_simulation_chain(c, d, sig, n).back() : greatest_simulation(c, d, sig))
                          : (bounded ? greatest_n_bisimulation(c, d, sig, n) : greatest_bisimulation(c, d, sig));
      if (g.json) out << relation_to_json(r, c.states(), d.states()).dump() << '\n';
      else print_pairs(out, r, c, d);
      return r.empty() ? kFails : kHolds;
    }

    if (nstep_cmd->parsed()) {
      const Coalgebra c = load_coalgebra(model_a), d = load_coalgebra(model_b);
      const Partition p = n_step_partition(c, d, n);
      const Relation r = p.restrict();
      if (g.json) {
        Json j = partition_to_json(p, c, d);
        j["relation"] = relation_to_json(r, c.states(), d.states());
        out << j.dump() << '\n';
      } else {
        out << p.block_count << (p.block_count == 1 ? " block\n" : " blocks\n");
        print_pairs(out, r, c, d);
      }
      return r.empty() ? kFails : kHolds;
    }

    if (beh_cmd->parsed()) {
      const Coalgebra c = load_coalgebra(model_a), d = load_coalgebra(model_b);
      const auto sig = bind_signature(g, {&c, &d});
      const BehaviouralResult res = behavioural_equivalence(c, d, sig);
      if (!witness_out.empty()) {
        std::ofstream w(witness_out);
        if (!w) throw ValidationError("cannot write '" + witness_out + "'");
        w << witness_to_json(res.witness, c, d).dump(2) << '\n';
      }
      if (g.json) {
        out << Json{{"relation", relation_to_json(res.relation, c.states(), d.states())},
                    {"partition", partition_to_json(res.partition, c, d)},
                    {"witness", witness_to_json(res.witness, c, d)}}
                   .dump()
            << '\n';
      } else {
        print_pairs(out, res.relation, c, d);
        out << "quotient: " << res.witness.block_count << " blocks, morphism equations verified\n";
      }
      return res.relation.empty() ? kFails : kHolds;
    }

    if (closure_cmd->parsed()) {
      const NamedRelation nr = read_named_relation(read_json_file(rel_file));
      const Relation r = difunctional_closure(nr.relation);
      if (g.json) {
        out << relation_to_json(r, nr.left, nr.right).dump() << '\n';
      } else {
        for (auto [x, y] : r.pairs()) out << nr.left[x] << ' ' << nr.right[y] << '\n';
        out << r.size() << (r.size() == 1 ? " pair\n" : " pairs\n");
      }
      return kHolds;
    }

    if (tb_cmd->parsed()) {
      const Coalgebra c = load_coalgebra(model_a), d = load_coalgebra(model_b);
      const Relation s = relation_from_json(read_json_file(rel_file), c, d);
      const auto k = up_to ? t_bisim_up_to_difunctionality_check(s, c, d) : t_bisimulation_check(s, c, d);
      if (g.json) {
        Json j{{"found", k.has_value()}};
        if (k) j.update(coupling_to_json(*k, c, d));
        out << j.dump() << '\n';
      } else if (k) {
        out << "coupling found\n";
        const Json cj = coupling_to_json(*k, c, d);
        for (const auto& e : cj["couplings"])
          out << "  " << e["pair"][0].get<std::string>() << ' ' << e["pair"][1].get<std::string>() << ": "
              << e["value"].dump() << '\n';
      } else {
        out << "no coupling\n";
      }
      return k ? kHolds : kFails;
    }

    if (rt_cmd->parsed()) {
      const PropertyRunReport rep = run_property_suite(property, trials, seed);
      if (g.json) {
        out << report_to_json(rep).dump() << '\n';
      } else {
        out << rep.name << ": " << (rep.report_only ? "REPORT" : rep.passed() ? "PASS" : "FAIL") << " ("
            << rep.trials << " trials)\n";
        for (const auto& [what, count] : rep.counters) out << "  " << what << ": " << count << '\n';
        if (!rep.counterexamples.empty())
          out << (rep.report_only ? "  FOUND " : "  counterexamples: ") << rep.counterexamples.size() << '\n'
              << "  first: " << rep.counterexamples.front().dump() << '\n';
      }
      return rep.passed() ? kHolds : kFails;
    }

    if (app.got_subcommand("properties")) {
      if (g.json) {
        out << property_manifest().dump() << '\n';
      } else {
        for (const auto& p : property_registry()) out << p.id << "  " << p.statement << '\n';
      }
      return kHolds;
    }

    if (gen_cmd->parsed()) {
      gen_cfg.kind = FunctorKind{parse_kind(gen_kind), {}};
      if (gen_cfg.kind.tag == Kind::Kripke) gen_cfg.kind.atoms = {"p", "q"};
      gen_cfg.min_states = gen_min;
      gen_cfg.max_states = gen_max;
      out << coalgebra_to_json(generate_coalgebra(gen_cfg)).dump(2) << '\n';
      return kHolds;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace coalsim

#endif  // COALSIM_CLI_HPP
