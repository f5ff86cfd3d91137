#ifndef COALSIM_BEHAVIOURAL_HPP
#define COALSIM_BEHAVIOURAL_HPP

// Behavioural equivalence: n-step equivalence via the terminal sequence,
// quotient witnesses, and T-bisimulation couplings.

#include <map>
#include <numeric>
#include <optional>
#include <variant>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include "coalsim/functor.hpp"
#include "coalsim/lifting.hpp"
#include "coalsim/relation.hpp"
#include "coalsim/simulation.hpp"

namespace coalsim {

/// Block assignment over the disjoint union X ⊎ Y. Index i < left_size is
/// left state i; index left_size + j is right state j. Block ids are
/// numbered by first occurrence in that order.
struct Partition {
  std::size_t left_size = 0;
  std::vector<std::size_t> block;
  std::size_t block_count = 0;

  std::size_t left(State x) const { return block[x]; }
  std::size_t right(State y) const { return block[left_size + y]; }

  /// The induced relation on X × Y.
  Relation restrict() const {
    const std::size_t right_size = block.size() - left_size;
    Relation r(left_size, right_size);
    for (State x = 0; x < left_size; ++x)
      for (State y = 0; y < right_size; ++y)
        if (left(x) == right(y)) r.insert(x, y);
    return r;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

namespace detail {

inline std::vector<State> side_map(const Partition& p, bool left_side, std::size_t n) {
  std::vector<State> f(n);
  for (State s = 0; s < n; ++s) f[s] = static_cast<State>(left_side ? p.left(s) : p.right(s));
  return f;
}

inline Partition refine_partition(const Partition& p, const Coalgebra& c, const Coalgebra& d) {
  const auto fx = side_map(p, true, c.size());
  const auto fy = side_map(p, false, d.size());
  std::map<FunctorValue, std::size_t, ValueLess> ids;
  Partition next{p.left_size, std::vector<std::size_t>(p.block.size()), 0};
  auto assign = [&](std::size_t idx, FunctorValue key) {
    auto [it, fresh] = ids.emplace(std::move(key), ids.size());
    next.block[idx] = it->second;
  };
  for (State x = 0; x < c.size(); ++x) assign(x, relabel(c.at(x), fx));
  for (State y = 0; y < d.size(); ++y) assign(c.size() + y, relabel(d.at(y), fy));
  next.block_count = ids.size();
  return next;
}

}  // namespace detail

/// P_n: P_0 is a single block; P_{k+1} identifies s and t iff their
/// transitions agree after relabelling by P_k-blocks. Because T preserves
/// injective maps this is exactly equality in the terminal sequence, so the
/// restriction of P_n to X × Y is n-step equivalence.
inline Partition n_step_partition(const Coalgebra& c, const Coalgebra& d, std::size_t n) {
  if (c.kind().tag != d.kind().tag) throw KindMismatch("n-step equivalence between different functor kinds");
  Partition p{c.size(), std::vector<std::size_t>(c.size() + d.size(), 0), 1};
  for (std::size_t k = 0; k < n; ++k) p = detail::refine_partition(p, c, d);
  return p;
}

/// Refines until the partition stops changing (at most |X| + |Y| rounds).
inline Partition stable_partition(const Coalgebra& c, const Coalgebra& d, std::size_t* rounds = nullptr) {
  if (c.kind().tag != d.kind().tag) throw KindMismatch("n-step equivalence between different functor kinds");
  Partition p{c.size(), std::vector<std::size_t>(c.size() + d.size(), 0), 1};
  std::size_t k = 0;
  while (true) {
    Partition next = detail::refine_partition(p, c, d);
    ++k;
    if (next.block_count == p.block_count) break;
    p = std::move(next);
    if (k > c.size() + d.size() + 1) throw InternalCheckFailure("partition refinement failed to stabilise");
  }
  if (rounds) *rounds = k - 1;
  return p;
}

/// Coalgebra structure χ on the quotient Z of X ⊎ Y by the equivalence
/// generated by a relation, with κ₁, κ₂ the induced maps.
struct QuotientWitness {
  std::size_t block_count = 0;
  std::vector<State> kappa1;  // X → Z
  std::vector<State> kappa2;  // Y → Z
  std::vector<FunctorValue> chi;
};

/// Two members of one block whose relabelled transitions differ.
struct QuotientConflict {
  std::size_t block = 0;
  bool first_left = true;
  State first = 0;
  bool second_left = true;
  State second = 0;
  FunctorValue first_value;
  FunctorValue second_value;
};

using QuotientResult = std::variant<QuotientWitness, QuotientConflict>;

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Tries to make κ₁, κ₂ coalgebra morphisms into a common quotient. Success
/// certifies that every pair of S is behaviourally equivalent; a conflict
/// certifies that S does not witness behavioural equivalence.
inline QuotientResult quotient_witness(const Relation& s, const Coalgebra& c, const Coalgebra& d) {
  detail::require_carriers(s, c, d);
  const std::size_t n = c.size() + d.size();
  detail::UnionFind uf(n);
  for (auto [x, y] : s.pairs()) uf.unite(x, c.size() + y);
  std::vector<std::size_t> id(n, n);
  std::size_t blocks = 0;
  QuotientWitness w;
  w.kappa1.resize(c.size());
  w.kappa2.resize(d.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (id[root] == n) id[root] = blocks++;
    const auto z = static_cast<State>(id[root]);
    if (i < c.size()) w.kappa1[i] = z;
    else w.kappa2[i - c.size()] = z;
  }
  w.block_count = blocks;
  std::vector<std::optional<FunctorValue>> chi(blocks);
  std::vector<std::pair<bool, State>> owner(blocks);
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_left = i < c.size();
    const auto s_idx = static_cast<State>(is_left ? i : i - c.size());
    FunctorValue v = is_left ? relabel(c.at(s_idx), w.kappa1) : relabel(d.at(s_idx), w.kappa2);
    const State z = is_left ? w.kappa1[s_idx] : w.kappa2[s_idx];
    if (!chi[z]) {
      chi[z] = std::move(v);
      owner[z] = {is_left, s_idx};
    } else if (!(*chi[z] == v)) {
      return QuotientConflict{z, owner[z].first, owner[z].second, is_left, s_idx, *chi[z], v};
    }
  }
  for (auto& v : chi) w.chi.push_back(std::move(*v));
  return w;
}

/// Checks T κ₁(ξ(x)) = χ(κ₁(x)) and T κ₂(ζ(y)) = χ(κ₂(y)) state by state.
inline bool verify_witness(const QuotientWitness& w, const Coalgebra& c, const Coalgebra& d) {
  if (w.kappa1.size() != c.size() || w.kappa2.size() != d.size() || w.chi.size() != w.block_count) return false;
  std::vector<bool> hit(w.block_count, false);
  for (State x = 0; x < c.size(); ++x) {
    if (w.kappa1[x] >= w.block_count || !values_equal(relabel(c.at(x), w.kappa1), w.chi[w.kappa1[x]])) return false;
    hit[w.kappa1[x]] = true;
  }
  for (State y = 0; y < d.size(); ++y) {
    if (w.kappa2[y] >= w.block_count || !values_equal(relabel(d.at(y), w.kappa2), w.chi[w.kappa2[y]])) return false;
    hit[w.kappa2[y]] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

struct BehaviouralResult {
  Relation relation;
  Partition partition;
  QuotientWitness witness;
};

/// Behavioural equivalence for a separating signature: the greatest
/// Λ-bisimulation, cross-checked against the stabilised terminal-sequence
/// partition and a quotient witness. Disagreement is an implementation bug
/// and raises InternalCheckFailure.
inline BehaviouralResult behavioural_equivalence(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig) {
  if (!sig.separating)
    throw ValidationError("signature '" + sig.literal + "' is not declared separating");
  BehaviouralResult res;
  res.relation = greatest_bisimulation(c, d, sig);
  res.partition = stable_partition(c, d);
  if (!(res.partition.restrict() == res.relation))
    throw InternalCheckFailure("greatest Λ-bisimulation differs from the stabilised n-step partition");
  auto q = quotient_witness(res.relation, c, d);
  if (!std::holds_alternative<QuotientWitness>(q))
    throw InternalCheckFailure("quotient of the greatest Λ-bisimulation is not well defined");
  res.witness = std::get<QuotientWitness>(std::move(q));
  if (!verify_witness(res.witness, c, d)) throw InternalCheckFailure("quotient maps are not coalgebra morphisms");
  return res;
}

/// Coalgebra structure on a pair-set: for each pair (x,y) of S a value over
/// `cells` (S itself, or its difunctional closure) whose projections give
/// back ξ(x) and ζ(y).
struct Coupling {
  std::vector<std::pair<State, State>> cells;
  std::vector<std::pair<State, State>> pairs;
  std::vector<FunctorValue> values;  // values[i] couples pairs[i]
};

namespace detail {

inline std::vector<State> projection(const std::vector<std::pair<State, State>>& cells, bool first) {
  std::vector<State> f;
  f.reserve(cells.size());
  for (const auto& cell : cells) f.push_back(first ? cell.first : cell.second);
  return f;
}

/// Max-flow transport between two integer marginals along allowed cells.
/// Returns per-cell flows if both marginals are saturated.
inline std::optional<std::vector<std::int64_t>> transport(
    const std::vector<std::pair<State, std::int64_t>>& supply, const std::vector<std::pair<State, std::int64_t>>& demand,
    const std::vector<std::pair<State, State>>& cells) {
  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, std::int64_t,
                      boost::property<boost::edge_residual_capacity_t, std::int64_t,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
  std::int64_t total_supply = 0, total_demand = 0;
  for (const auto& e : supply) total_supply += e.second;
  for (const auto& e : demand) total_demand += e.second;
  if (total_supply != total_demand) return std::nullopt;

  const std::size_t src = 0, sink = 1;
  Graph g(2 + supply.size() + demand.size());
  auto cap = boost::get(boost::edge_capacity, g);
  auto rev = boost::get(boost::edge_reverse, g);
  auto res = boost::get(boost::edge_residual_capacity, g);
  auto add = [&](std::size_t u, std::size_t v, std::int64_t c) {
    auto e = boost::add_edge(u, v, g).first;
    auto r = boost::add_edge(v, u, g).first;
    cap[e] = c;
    cap[r] = 0;
    rev[e] = r;
    rev[r] = e;
    return e;
  };
  for (std::size_t i = 0; i < supply.size(); ++i) add(src, 2 + i, supply[i].second);
  for (std::size_t j = 0; j < demand.size(); ++j) add(2 + supply.size() + j, sink, demand[j].second);
  std::vector<std::optional<Traits::edge_descriptor>> cell_edge(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    auto si = std::find_if(supply.begin(), supply.end(), [&](const auto& e) { return e.first == cells[k].first; });
    auto di = std::find_if(demand.begin(), demand.end(), [&](const auto& e) { return e.first == cells[k].second; });
    if (si == supply.end() || di == demand.end()) continue;
    cell_edge[k] = add(2 + static_cast<std::size_t>(si - supply.begin()),
                       2 + supply.size() + static_cast<std::size_t>(di - demand.begin()), total_supply);
  }
  const std::int64_t flow = boost::push_relabel_max_flow(g, src, sink);
  if (flow != total_supply) return std::nullopt;
  std::vector<std::int64_t> out(cells.size(), 0);
  for (std::size_t k = 0; k < cells.size(); ++k)
    if (cell_edge[k]) out[k] = cap[*cell_edge[k]] - res[*cell_edge[k]];
  return out;
}

inline std::int64_t lcm_of_denominators(const DistValue& a, const DistValue& b) {
  std::int64_t l = 1;
  for (const auto* v : {&a, &b})
    for (const auto& e : v->mass) l = std::lcm(l, e.second.denominator());
  return l;
}

/// Some value over `cells` projecting to (t, u), or nullopt.
inline std::optional<FunctorValue> couple(const FunctorValue& t, const FunctorValue& u,
                                          const std::vector<std::pair<State, State>>& cells,
                                          const std::vector<FunctorValue>* nbhd_candidates,
                                          const std::vector<std::pair<FunctorValue, FunctorValue>>* nbhd_projections) {
  switch (kind_of(t)) {
    case Kind::Kripke: {
      // Canonical candidate: every cell between successors. Any coupling is
      // contained in it and projections are monotone, so it is complete.
      const auto& kt = std::get<KripkeValue>(t);
      const auto& ku = std::get<KripkeValue>(u);
      if (kt.props != ku.props) return std::nullopt;
      std::vector<State> succ;
      for (std::size_t k = 0; k < cells.size(); ++k)
        if (std::binary_search(kt.succ.begin(), kt.succ.end(), cells[k].first) &&
            std::binary_search(ku.succ.begin(), ku.succ.end(), cells[k].second))
          succ.push_back(static_cast<State>(k));
      FunctorValue cand = KripkeValue{kt.props, succ};
      if (relabel(cand, projection(cells, true)) == t && relabel(cand, projection(cells, false)) == u) return cand;
      return std::nullopt;
    }
    case Kind::Distribution: {
      const auto& dt = std::get<DistValue>(t);
      const auto& du = std::get<DistValue>(u);
      const std::int64_t scale = lcm_of_denominators(dt, du);
      std::vector<std::pair<State, std::int64_t>> supply, demand;
      for (const auto& [s, m] : dt.mass) supply.emplace_back(s, (m * scale).numerator());
      for (const auto& [s, m] : du.mass) demand.emplace_back(s, (m * scale).numerator());
      auto flows = transport(supply, demand, cells);
      if (!flows) return std::nullopt;
      std::vector<std::pair<State, Rational>> mass;
      for (std::size_t k = 0; k < cells.size(); ++k)
        if ((*flows)[k] > 0) mass.emplace_back(static_cast<State>(k), Rational((*flows)[k], scale));
      return make_dist(mass);
    }
    case Kind::Multiset: {
      std::vector<std::pair<State, std::int64_t>> supply, demand;
      for (const auto* v : {&t, &u})
        for (const auto& [s, w] : std::get<MultisetValue>(*v).weights)
          if (w.infinite) throw ValidationError("coupling search does not support infinite multiset weights");
      for (const auto& [s, w] : std::get<MultisetValue>(t).weights)
        supply.emplace_back(s, static_cast<std::int64_t>(w.count));
      for (const auto& [s, w] : std::get<MultisetValue>(u).weights)
        demand.emplace_back(s, static_cast<std::int64_t>(w.count));
      auto flows = transport(supply, demand, cells);
      if (!flows) return std::nullopt;
      std::vector<std::pair<State, Weight>> weights;
      for (std::size_t k = 0; k < cells.size(); ++k)
        if ((*flows)[k] > 0) weights.emplace_back(static_cast<State>(k), Weight{static_cast<std::uint64_t>((*flows)[k]), false});
      return make_multiset(weights);
    }
    case Kind::Neighborhood: {
      for (std::size_t i = 0; i < nbhd_candidates->size(); ++i)
        if ((*nbhd_projections)[i].first == t && (*nbhd_projections)[i].second == u) return (*nbhd_candidates)[i];
      return std::nullopt;
    }
  }
  return std::nullopt;
}

inline std::optional<Coupling> find_coupling(const Relation& s, const Relation& cells_rel, const Coalgebra& c,
                                             const Coalgebra& d, const EnumerationBudget& budget) {
  require_carriers(s, c, d);
  if (c.kind().tag != d.kind().tag) throw KindMismatch("coupling between different functor kinds");
  Coupling out;
  out.cells = cells_rel.pairs();
  out.pairs = s.pairs();
  std::vector<FunctorValue> candidates;
  std::vector<std::pair<FunctorValue, FunctorValue>> projections;
  if (c.kind().tag == Kind::Neighborhood) {
    if (out.cells.size() > budget.max_nbhd_states)
      throw BudgetExceeded("neighbourhood coupling search over " + std::to_string(out.cells.size()) +
                           " pairs exceeds budget of " + std::to_string(budget.max_nbhd_states));
    const auto p1 = projection(out.cells, true);
    const auto p2 = projection(out.cells, false);
    enumerate_values(c.kind(), out.cells.size(), budget, [&](const FunctorValue& v) {
      candidates.push_back(v);
      projections.emplace_back(relabel(v, p1), relabel(v, p2));
    });
  }
  for (auto [x, y] : out.pairs) {
    auto v = couple(normalize(c.at(x)), normalize(d.at(y)), out.cells, &candidates, &projections);
    if (!v) return std::nullopt;
    out.values.push_back(std::move(*v));
  }
  return out;
}

}  // namespace detail

/// Searches a coalgebra structure ρ : S → T S making both projections
/// coalgebra morphisms. Exact for Kripke, distributions and finite
/// multisets; bounded brute force for neighbourhoods (witness finder only).
inline std::optional<Coupling> t_bisimulation_check(const Relation& s, const Coalgebra& c, const Coalgebra& d,
                                                    const EnumerationBudget& budget = {}) {
  return detail::find_coupling(s, s, c, d, budget);
}

/// As t_bisimulation_check, with couplings living over the difunctional
/// closure of S.
inline std::optional<Coupling> t_bisim_up_to_difunctionality_check(const Relation& s, const Coalgebra& c,
                                                                   const Coalgebra& d,
                                                                   const EnumerationBudget& budget = {}) {
  return detail::find_coupling(s, difunctional_closure(s), c, d, budget);
}

/// Both marginal equations for every coupled pair.
inline bool verify_coupling(const Coupling& k, const Coalgebra& c, const Coalgebra& d) {
  if (k.values.size() != k.pairs.size()) return false;
  const auto p1 = detail::projection(k.cells, true);
  const auto p2 = detail::projection(k.cells, false);
  for (std::size_t i = 0; i < k.pairs.size(); ++i) {
    const auto [x, y] = k.pairs[i];
    if (!values_equal(relabel(k.values[i], p1), c.at(x)) || !values_equal(relabel(k.values[i], p2), d.at(y)))
      return false;
  }
  return true;
}

}  // namespace coalsim

#endif  // COALSIM_BEHAVIOURAL_HPP
