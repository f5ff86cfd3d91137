#ifndef COALSIM_IO_HPP
#define COALSIM_IO_HPP

// JSON formats for models, relations, reports and witnesses.
//
// Model:    {"functor": "kripke"|"multiset"|"distribution"|"neighborhood",
//            "atoms": [...],            (kripke only)
//            "states": [...],
//            "transition": {state: value}}
//   value:  kripke        {"props": [...], "succ": [...]}
//           multiset      {state: weight | "inf"}
//           distribution  {state: "n/d"}
//           neighborhood  {"minimals": [[state, ...], ...]}
// Relation: {"pairs": [[left, right], ...]}

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coalsim/behavioural.hpp"
#include "coalsim/functor.hpp"
#include "coalsim/relation.hpp"
#include "coalsim/simulation.hpp"

namespace coalsim {

using Json = nlohmann::ordered_json;

namespace detail {

inline State lookup(const std::unordered_map<std::string, State>& idx, const std::string& name,
                    const std::string& where) {
  auto it = idx.find(name);
  if (it == idx.end()) throw ValidationError(where + ": unknown state '" + name + "'");
  return it->second;
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ValidationError(where + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Reads a value without normalising it, so that validate() can report
/// malformed input instead of silently repairing it.
inline FunctorValue value_from_json(const Json& j, const FunctorKind& kind,
                                    const std::unordered_map<std::string, State>& idx, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": value must be a JSON object");
  switch (kind.tag) {
    case Kind::Kripke: {
      KripkeValue v;
      v.props = detail::string_list(detail::member(j, "props", where), where + " props");
      std::sort(v.props.begin(), v.props.end());
      for (const auto& s : detail::string_list(detail::member(j, "succ", where), where + " succ"))
        v.succ.push_back(detail::lookup(idx, s, where));
      std::sort(v.succ.begin(), v.succ.end());
      return v;
    }
    case Kind::Multiset: {
      MultisetValue v;
      for (const auto& [name, w] : j.items()) {
        Weight weight;
        if (w.is_string() && w.get<std::string>() == "inf") weight = Weight::inf();
        else if (w.is_number_unsigned()) weight = Weight{w.get<std::uint64_t>(), false};
        else throw ValidationError(where + ": weight of '" + name + "' must be a natural number or \"inf\"");
        v.weights.emplace_back(detail::lookup(idx, name, where), weight);
      }
      std::sort(v.weights.begin(), v.weights.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      return v;
    }
    case Kind::Distribution: {
      DistValue v;
      for (const auto& [name, m] : j.items()) {
        Rational mass;
        if (m.is_string()) mass = parse_rational(m.get<std::string>());
        else if (m.is_number_integer()) mass = Rational(m.get<std::int64_t>());
        else throw ValidationError(where + ": mass of '" + name + "' must be a string \"n/d\"");
        v.mass.emplace_back(detail::lookup(idx, name, where), mass);
      }
      std::sort(v.mass.begin(), v.mass.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      return v;
    }
    case Kind::Neighborhood: {
      NbhdValue v;
      const Json& mins = detail::member(j, "minimals", where);
      if (!mins.is_array()) throw ValidationError(where + ": minimals must be an array");
      for (const auto& m : mins) {
        std::vector<State> set;
        for (const auto& s : detail::string_list(m, where + " minimal")) set.push_back(detail::lookup(idx, s, where));
        std::sort(set.begin(), set.end());
        v.minimals.push_back(std::move(set));
      }
      std::sort(v.minimals.begin(), v.minimals.end());
      return v;
    }
  }
  throw ValidationError(where + ": unsupported functor");
}

/// Parses and validates a model.
inline Coalgebra coalgebra_from_json(const Json& j) {
  const std::string where = "model";
  const Json& functor = detail::member(j, "functor", where);
  if (!functor.is_string()) throw ValidationError("model: \"functor\" must be a string");
  auto tag = kind_from_name(functor.get<std::string>());
  if (!tag) throw ValidationError("model: unknown functor '" + functor.get<std::string>() + "'");
  FunctorKind kind{*tag, {}};
  if (j.contains("atoms")) {
    if (*tag != Kind::Kripke) throw ValidationError("model: \"atoms\" only applies to kripke models");
    kind.atoms = detail::string_list(j.at("atoms"), "model atoms");
  }
  auto states = detail::string_list(detail::member(j, "states", where), "model states");
  std::unordered_map<std::string, State> idx;
  for (std::size_t i = 0; i < states.size(); ++i) idx.emplace(states[i], static_cast<State>(i));
  const Json& trans = detail::member(j, "transition", where);
  if (!trans.is_object()) throw ValidationError("model: \"transition\" must be an object");
  for (const auto& [name, v] : trans.items()) detail::lookup(idx, name, "model transition");
  std::vector<FunctorValue> values;
  for (const auto& s : states) {
    if (!trans.contains(s)) throw ValidationError("state '" + s + "' has no transition");
    values.push_back(value_from_json(trans.at(s), kind, idx, "state '" + s + "'"));
  }
  Coalgebra c(kind, std::move(states), std::move(values));
  validate(c);
  return c;
}

inline Json value_to_json(const FunctorValue& v, const std::vector<std::string>& names) {
  Json out = Json::object();
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, KripkeValue>) {
          out["props"] = t.props;
          Json succ = Json::array();
          for (State s : t.succ) succ.push_back(names.at(s));
          out["succ"] = succ;
        } else if constexpr (std::is_same_v<T, MultisetValue>) {
          for (const auto& [s, w] : t.weights) {
            if (w.infinite) out[names.at(s)] = "inf";
            else out[names.at(s)] = w.count;
          }
        } else if constexpr (std::is_same_v<T, DistValue>) {
          for (const auto& [s, m] : t.mass) out[names.at(s)] = to_string(m);
        } else {
          Json mins = Json::array();
          for (const auto& m : t.minimals) {
            Json set = Json::array();
            for (State s : m) set.push_back(names.at(s));
            mins.push_back(set);
          }
          out["minimals"] = mins;
        }
      },
      v);
  return out;
}

inline Json coalgebra_to_json(const Coalgebra& c) {
  Json j;
  j["functor"] = kind_name(c.kind().tag);
  if (c.kind().tag == Kind::Kripke) j["atoms"] = c.kind().atoms;
  j["states"] = c.states();
  Json trans = Json::object();
  for (State s = 0; s < c.size(); ++s) trans[c.name(s)] = value_to_json(c.at(s), c.states());
  j["transition"] = trans;
  return j;
}

inline Relation relation_from_json(const Json& j, const Coalgebra& c, const Coalgebra& d) {
  const Json& pairs = detail::member(j, "pairs", "relation");
  if (!pairs.is_array()) throw ValidationError("relation: \"pairs\" must be an array");
  Relation r(c.size(), d.size());
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw ValidationError("relation: each pair must be [left, right]");
    r.insert(c.index_of(p[0].get<std::string>()), d.index_of(p[1].get<std::string>()));
  }
  return r;
}

inline Json relation_to_json(const Relation& r, const std::vector<std::string>& left,
                             const std::vector<std::string>& right) {
  Json pairs = Json::array();
  for (auto [x, y] : r.pairs()) pairs.push_back(Json::array({left.at(x), right.at(y)}));
  return Json{{"pairs", pairs}};
}

inline Json report_to_json(const SimulationReport& rep, const Coalgebra& c, const Coalgebra& d) {
  Json vs = Json::array();
  for (const auto& v : rep.violations) {
    const bool fwd = v.direction == Direction::Forward;
    const auto& from_names = fwd ? c.states() : d.states();
    const auto& to_names = fwd ? d.states() : c.states();
    Json subset = Json::array();
    for (State s : v.subset) subset.push_back(from_names.at(s));
    vs.push_back(Json{{"direction", fwd ? "forward" : "backward"},
                      {"from", from_names.at(v.from)},
                      {"to", to_names.at(v.to)},
                      {"modality", to_string(v.modality)},
                      {"subset", subset}});
  }
  return Json{{"holds", rep.holds}, {"total_violations", rep.total_violations}, {"violations", vs}};
}

inline std::vector<std::string> block_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("b" + std::to_string(i));
  return names;
}

inline Json partition_to_json(const Partition& p, const Coalgebra& c, const Coalgebra& d) {
  Json left = Json::object(), right = Json::object();
  for (State x = 0; x < c.size(); ++x) left[c.name(x)] = p.left(x);
  for (State y = 0; y < d.size(); ++y) right[d.name(y)] = p.right(y);
  return Json{{"blocks", p.block_count}, {"left", left}, {"right", right}};
}

inline Json witness_to_json(const QuotientWitness& w, const Coalgebra& c, const Coalgebra& d) {
  const auto names = block_names(w.block_count);
  Json k1 = Json::object(), k2 = Json::object(), chi = Json::object();
  for (State x = 0; x < c.size(); ++x) k1[c.name(x)] = names[w.kappa1[x]];
  for (State y = 0; y < d.size(); ++y) k2[d.name(y)] = names[w.kappa2[y]];
  for (std::size_t z = 0; z < w.block_count; ++z) chi[names[z]] = value_to_json(w.chi[z], names);
  return Json{{"functor", kind_name(c.kind().tag)}, {"blocks", names}, {"kappa1", k1}, {"kappa2", k2}, {"chi", chi}};
}

inline Json conflict_to_json(const QuotientConflict& q, const Coalgebra& c, const Coalgebra& d,
                             std::size_t block_count) {
  const auto names = block_names(std::max(block_count, q.block + 1));
  auto who = [&](bool left, State s) { return Json{{"side", left ? "left" : "right"}, {"state", left ? c.name(s) : d.name(s)}}; };
  return Json{{"block", names[q.block]},
              {"first", who(q.first_left, q.first)},
              {"second", who(q.second_left, q.second)},
              {"first_value", value_to_json(q.first_value, names)},
              {"second_value", value_to_json(q.second_value, names)}};
}

inline Json coupling_to_json(const Coupling& k, const Coalgebra& c, const Coalgebra& d) {
  std::vector<std::string> cell_names;
  Json cells = Json::array();
  for (auto [x, y] : k.cells) {
    cell_names.push_back(c.name(x) + "|" + d.name(y));
    cells.push_back(Json::array({c.name(x), d.name(y)}));
  }
  Json values = Json::array();
  for (std::size_t i = 0; i < k.pairs.size(); ++i)
    values.push_back(Json{{"pair", Json::array({c.name(k.pairs[i].first), d.name(k.pairs[i].second)})},
                          {"value", value_to_json(k.values[i], cell_names)}});
  return Json{{"cells", cells}, {"couplings", values}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline Coalgebra load_coalgebra(const std::string& path) { return coalgebra_from_json(read_json_file(path)); }

}  // namespace coalsim

#endif  // COALSIM_IO_HPP
