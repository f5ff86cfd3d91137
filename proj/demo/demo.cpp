// Walks through the library on the sample models in models/.

#include <iostream>

#include "coalsim/coalsim.hpp"

using namespace coalsim;

static Coalgebra model(const std::string& name) { return load_coalgebra(std::string(COALSIM_DEMO_DIR) + "/" + name); }

int main() {
  // a p-labelled 2-cycle unfolds to the same behaviour as a p-loop
  const Coalgebra cycle = model("cycle_p.json"), loop = model("loop_p.json");
  const auto kripke = parse_signature("kripke:box,diamond,atoms", {&cycle, &loop});
  const auto beh = behavioural_equivalence(cycle, loop, kripke);
  std::cout << "cycle vs loop: " << relation_to_json(beh.relation, cycle.states(), loop.states()).dump() << '\n';
  std::cout << "quotient: " << witness_to_json(beh.witness, cycle, loop).dump() << '\n';

  const Formula f = parse_formula("[] <> p", kripke);
  std::cout << to_string(f) << " at u: " << std::boolalpha << eval(f, cycle, cycle.index_of("u")) << '\n';

  // graded: one edge of weight 2 against two edges of weight 1
  const Coalgebra two = model("graded_two.json"), split = model("graded_split.json");
  const auto graded = parse_signature("graded:auto", {&two, &split});
  std::cout << "graded: "
            << relation_to_json(greatest_bisimulation(two, split, graded), two.states(), split.states()).dump()
            << '\n';

  // a relation that is a simulation for [] but not a bisimulation
  const Coalgebra fork = model("kripke_fork.json"), single = model("kripke_single.json");
  const Relation partial = relation_from_json(Json::parse(R"({"pairs":[["x","y"],["a","c"]]})"), fork, single);
  const auto box = parse_signature("kripke:box", {&fork, &single});
  std::cout << "box simulation: " << report_to_json(is_simulation(partial, fork, single, box), fork, single).dump()
            << '\n';
  std::cout << "box bisimulation: "
            << report_to_json(is_bisimulation(partial, fork, single, box), fork, single).dump() << '\n';

  // couplings
  const Relation full = relation_from_json(read_json_file(std::string(COALSIM_DEMO_DIR) + "/fork_rel.json"), fork, single);
  if (auto k = t_bisimulation_check(full, fork, single)) std::cout << "coupling: " << coupling_to_json(*k, fork, single).dump() << '\n';
  const Coalgebra halves = model("dist_split.json"), point = model("dist_point.json");
  const Relation stuck = relation_from_json(read_json_file(std::string(COALSIM_DEMO_DIR) + "/dist_partial_rel.json"), halves, point);
  std::cout << "distribution coupling exists: " << t_bisimulation_check(stuck, halves, point).has_value() << '\n';

  const auto rep = run_property_suite("stability", 25, 1);
  std::cout << rep.name << ": " << (rep.passed() ? "pass" : "FAIL") << " over " << rep.trials << " trials\n";
  return rep.passed() ? 0 : 1;
}
