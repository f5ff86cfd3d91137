// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// line fails. Trial counts and seeds are fixed; every check is exact.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "coalsim/coalsim.hpp"

using namespace coalsim;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Line {
  bool ok = true;
  std::string detail;
};

std::size_t min_per_kind(const PropertyRunReport& r) {
  std::size_t m = SIZE_MAX;
  for (const auto& [kind, n] : r.trials_per_kind) m = std::min(m, n);
  return r.trials_per_kind.empty() ? 0 : m;
}

std::size_t counter(const PropertyRunReport& r, const std::string& key) {
  auto it = r.counters.find(key);
  return it == r.counters.end() ? 0 : it->second;
}

std::string summary(const PropertyRunReport& r) {
  std::string s = r.name + " " + std::to_string(r.trials) + " trials, " +
                  std::to_string(r.counterexamples.size()) + " counterexamples";
  if (!r.counterexamples.empty()) s += "; first " + r.counterexamples.front().dump();
  return s;
}

// passes when every run is clean and each kind saw at least `per_kind` trials
Line suites(std::initializer_list<const char*> ids, std::size_t per_kind) {
  Line line;
  for (const char* id : ids) {
    const auto rep = run_property_suite(id, per_kind, kSeed);
    line.ok = line.ok && rep.passed() && min_per_kind(rep) >= per_kind;
    line.detail += (line.detail.empty() ? "" : " | ") + summary(rep);
  }
  return line;
}

Line preservation() {
  const auto rep = run_property_suite("preservation", 600, kSeed);
  const std::size_t triples = counter(rep, "triples");
  return {rep.passed() && triples >= 10000, summary(rep) + ", " + std::to_string(triples) + " triples"};
}

Line rank_preservation() {
  const auto rep = run_property_suite("rank-preservation", 600, kSeed);
  const std::size_t triples = counter(rep, "triples");
  return {rep.passed() && triples > 0, summary(rep) + ", " + std::to_string(triples) + " triples, n <= 4"};
}

Line t_bisim() {
  const auto rep = run_property_suite("t-bisim", 500, kSeed);
  const std::size_t larger = counter(rep, "random larger instances");
  const std::size_t exhaustive = counter(rep, "exhaustive relations");
  return {rep.passed() && larger >= 500 && exhaustive > 0,
          summary(rep) + ", " + std::to_string(exhaustive) + " exhaustive relations, " + std::to_string(larger) +
              " larger instances"};
}

// ------------------------------------------------------------ negative controls

Coalgebra load(const char* text) { return coalgebra_from_json(Json::parse(text)); }

Json negative_controls() {
  Json out = Json::object();
  {
    // x loops, y is deadlocked
    const Coalgebra c = load(R"({"functor":"kripke","atoms":[],"states":["x"],"transition":{"x":{"props":[],"succ":["x"]}}})");
    const Coalgebra d = load(R"({"functor":"kripke","atoms":[],"states":["y"],"transition":{"y":{"props":[],"succ":[]}}})");
    const Relation s = Relation::full(1, 1);
    const auto sig = parse_signature("kripke:diamond", {&c, &d});
    const auto q = quotient_witness(s, c, d);
    out["deadlock"] = Json{{"simulation", report_to_json(is_simulation(s, c, d, sig), c, d)},
                           {"quotient", conflict_to_json(std::get<QuotientConflict>(q), c, d, 1)}};
  }
  {
    // mass at b has nowhere to go
    const Coalgebra c = load(R"({"functor":"distribution","states":["x","a","b"],"transition":{
      "x":{"a":"1/2","b":"1/2"},"a":{"a":"1"},"b":{"b":"1"}}})");
    const Coalgebra d = load(R"({"functor":"distribution","states":["y","c"],"transition":{"y":{"c":"1"},"c":{"c":"1"}}})");
    const Relation s = relation_from_json(Json::parse(R"({"pairs":[["x","y"],["a","c"]]})"), c, d);
    const auto sig = parse_signature("prob:auto-grid", {&c, &d});
    const auto rep = is_bisimulation(s, c, d, sig);
    SimulationReport first;
    first.holds = rep.holds;
    first.total_violations = rep.total_violations;
    if (!rep.violations.empty()) first.violations.push_back(rep.violations.front());
    out["transport"] = Json{{"coupling", t_bisimulation_check(s, c, d).has_value()},
                            {"up_to_coupling", t_bisim_up_to_difunctionality_check(s, c, d).has_value()},
                            {"bisimulation", report_to_json(first, c, d)}};
  }
  {
    // x → {a,b}, y → {c}; relating only a with c drops the □ requirement
    const Coalgebra c = load(R"({"functor":"kripke","atoms":[],"states":["x","a","b"],"transition":{
      "x":{"props":[],"succ":["a","b"]},"a":{"props":[],"succ":[]},"b":{"props":[],"succ":[]}}})");
    const Coalgebra d = load(R"({"functor":"kripke","atoms":[],"states":["y","c"],"transition":{
      "y":{"props":[],"succ":["c"]},"c":{"props":[],"succ":[]}}})");
    const Relation s = relation_from_json(Json::parse(R"({"pairs":[["x","y"],["a","c"]]})"), c, d);
    const auto sig = parse_signature("kripke:box", {&c, &d});
    out["box"] = Json{{"simulation", report_to_json(is_simulation(s, c, d, sig), c, d)},
                      {"bisimulation", report_to_json(is_bisimulation(s, c, d, sig), c, d)}};
  }
  return out;
}

const char* const kFrozenControls =
    "{"
    R"j("deadlock":{"simulation":{"holds":false,"total_violations":1,"violations":[{"direction":"forward","from":"x","to":"y","modality":"<>","subset":["x"]}]},"quotient":{"block":"b0","first":{"side":"left","state":"x"},"second":{"side":"right","state":"y"},"first_value":{"props":[],"succ":["b0"]},"second_value":{"props":[],"succ":[]}}},)j"
    R"j("transport":{"coupling":false,"up_to_coupling":false,"bisimulation":{"holds":false,"total_violations":2,"violations":[{"direction":"forward","from":"x","to":"y","modality":"L(1/2)","subset":["b"]}]}},)j"
    R"j("box":{"simulation":{"holds":true,"total_violations":0,"violations":[]},"bisimulation":{"holds":false,"total_violations":1,"violations":[{"direction":"backward","from":"y","to":"x","modality":"[]","subset":["c"]}]}})j"
    "}";

Line controls() {
  const std::string first = negative_controls().dump();
  const std::string second = negative_controls().dump();
  const bool stable = first == second;
  const bool frozen = first == kFrozenControls;
  return {stable && frozen, std::string(stable ? "byte-stable" : "NOT byte-stable") +
                                (frozen ? ", matches frozen witnesses" : ", differs from frozen: " + first)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Line()> run;
  };
  const std::vector<Criterion> criteria{
      {"oracle equivalence", [] { return suites({"oracle"}, 1000); }},
      {"fast-path equivalence", [] { return suites({"fast-path"}, 1000); }},
      {"simulations preserve positive formulas", preservation},
      {"rank-bounded preservation", rank_preservation},
      {"greatest n-bisimulation equals n-step equivalence", [] { return suites({"n-step"}, 500); }},
      {"behavioural equivalence cross-checks", [] { return suites({"soundness", "completeness"}, 500); }},
      {"difunctional closure equivalence", [] { return suites({"prop-difunctional"}, 1000); }},
      {"couplings imply bisimulations", [] { return suites({"t-implies-lambda"}, 500); }},
      {"bisimulations admit couplings", t_bisim},
      {"functor laws and naturality", [] { return suites({"functor-laws", "naturality"}, 1000); }},
      {"negative controls", controls},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Line line;
    try {
      line = criteria[i].run();
    } catch (const std::exception& e) {
      line = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += line.ok ? 0 : 1;
    std::printf("%s %2zu %s: %s (%.1fs)\n", line.ok ? "PASS" : "FAIL", i + 1, criteria[i].name, line.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
