#ifndef COALSIM_ORACLE_HPP
#define COALSIM_ORACLE_HPP

// Brute-force reference implementations for small instances. Nothing here
// calls into the engine's satisfaction, base restriction or fixpoint code:
// subsets range over the whole carrier and operators are re-evaluated from
// their definitions.

#include <deque>
#include <numeric>
#include <optional>
#include <vector>

#include "coalsim/functor.hpp"
#include "coalsim/modality.hpp"
#include "coalsim/relation.hpp"

namespace coalsim::oracle {

using Subset = std::vector<bool>;

inline Subset subset_of_mask(std::uint64_t mask, std::size_t n) {
  Subset a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1U;
  return a;
}

inline std::vector<State> subset_members(const Subset& a) {
  std::vector<State> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) out.push_back(static_cast<State>(i));
  return out;
}

inline bool in(const Subset& a, State s) { return s < a.size() && a[s]; }

/// Direct reading of each operator on a raw value.
inline bool holds(const FunctorValue& t, const Modality& h, const Subset& a) {
  using Op = Modality::Op;
  switch (h.op) {
    case Op::Box:
    case Op::Diamond:
    case Op::Atom: {
      const auto& v = std::get<KripkeValue>(t);
      if (h.op == Op::Atom) return std::find(v.props.begin(), v.props.end(), h.atom) != v.props.end();
      std::size_t inside = 0;
      for (State s : v.succ) inside += in(a, s);
      return h.op == Op::Box ? inside == v.succ.size() : inside > 0;
    }
    case Op::DiamondK: {
      bool infinite = false;
      std::uint64_t total = 0;
      for (const auto& [s, w] : std::get<MultisetValue>(t).weights) {
        if (!in(a, s)) continue;
        if (w.infinite) infinite = true;
        else total += w.count;
      }
      return infinite || total > h.k;
    }
    case Op::AtLeast:
    case Op::MoreThan: {
      // compare num/den sums by cross-multiplying over a common denominator
      std::int64_t den = 1;
      for (const auto& e : std::get<DistValue>(t).mass) den = std::lcm(den, e.second.denominator());
      den = std::lcm(den, h.p.denominator());
      std::int64_t sum = 0;
      for (const auto& [s, m] : std::get<DistValue>(t).mass)
        if (in(a, s)) sum += m.numerator() * (den / m.denominator());
      const std::int64_t bound = h.p.numerator() * (den / h.p.denominator());
      return h.op == Op::AtLeast ? sum >= bound : sum > bound;
    }
    case Op::NbhdBox: {
      for (const auto& m : std::get<NbhdValue>(t).minimals) {
        bool sub = true;
        for (State s : m) sub = sub && in(a, s);
        if (sub) return true;
      }
      return false;
    }
  }
  return false;
}

inline Subset image(const Relation& s, const Subset& a) {
  Subset out(s.right_size(), false);
  for (State x = 0; x < s.left_size(); ++x)
    if (a[x])
      for (State y = 0; y < s.right_size(); ++y)
        if (s.contains(x, y)) out[y] = true;
  return out;
}

struct Witness {
  State from = 0;
  State to = 0;
  Modality modality;
  std::vector<State> subset;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> first;  // least pair, then least mask, then operator order
};

constexpr std::size_t kMaxCarrier = 12;

struct SubsetTable {
  std::vector<Subset> subsets;
  std::vector<Subset> images;
};

/// Every A ⊆ X with its image under `r`.
inline SubsetTable subset_table(const Relation& r) {
  const std::size_t n = r.left_size();
  if (n > kMaxCarrier) throw BudgetExceeded("oracle carrier too large");
  SubsetTable t;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    t.subsets.push_back(subset_of_mask(mask, n));
    t.images.push_back(image(r, t.subsets.back()));
  }
  return t;
}

inline std::optional<Witness> pair_violation(State x, State y, const FunctorValue& t, const FunctorValue& u,
                                             const SubsetTable& table, const std::vector<Modality>& ops) {
  for (std::size_t i = 0; i < table.subsets.size(); ++i)
    for (const auto& h : ops)
      if (holds(t, h, table.subsets[i]) && !holds(u, h, table.images[i]))
        return Witness{x, y, h, subset_members(table.subsets[i])};
  return std::nullopt;
}

/// Simulation condition with A ranging over all of 2^X; `images` supplies
/// the relation whose image is taken (S itself, or a closure of S).
inline Verdict simulation(const Relation& pairs, const Relation& images, const std::vector<FunctorValue>& xi,
                          const std::vector<FunctorValue>& zeta, const std::vector<Modality>& ops) {
  const SubsetTable table = subset_table(images);
  Verdict v;
  for (auto [x, y] : pairs.pairs())
    if (auto w = pair_violation(x, y, xi[x], zeta[y], table, ops)) {
      v.holds = false;
      v.first = std::move(w);
      return v;
    }
  return v;
}

inline Verdict simulation(const Relation& s, const Coalgebra& c, const Coalgebra& d, const std::vector<Modality>& ops) {
  return simulation(s, s, c.transition(), d.transition(), ops);
}

inline bool bisimulation(const Relation& s, const Coalgebra& c, const Coalgebra& d, const std::vector<Modality>& ops) {
  const Relation inv = s.converse();
  return simulation(s, s, c.transition(), d.transition(), ops).holds &&
         simulation(inv, inv, d.transition(), c.transition(), ops).holds;
}

/// Visits every relation on X × Y (|X|·|Y| ≤ 12) as a bitmask.
template <typename Fn>
void for_each_relation(std::size_t left, std::size_t right, Fn&& fn) {
  const std::size_t cells = left * right;
  if (cells > 12) throw BudgetExceeded("too many relations to enumerate");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    Relation r(left, right);
    for (std::size_t i = 0; i < cells; ++i)
      if ((mask >> i) & 1U) r.insert(static_cast<State>(i / right), static_cast<State>(i % right));
    fn(r);
  }
}

/// Union of every simulation (or bisimulation) by enumeration.
inline Relation union_of_simulations(const Coalgebra& c, const Coalgebra& d, const std::vector<Modality>& ops,
                                     bool both) {
  Relation acc(c.size(), d.size());
  for_each_relation(c.size(), d.size(), [&](const Relation& r) {
    if (both ? bisimulation(r, c, d, ops) : simulation(r, c, d, ops).holds) acc |= r;
  });
  return acc;
}

/// Is S an n-simulation under the existential definition? Computes the
/// family of all k-simulations level by level: a relation is a
/// (k+1)-simulation iff it sits inside T ∩ good(T) for some k-simulation T,
/// where good(T) are the pairs satisfying the step condition with images
/// under T (and, with `both`, the converse step under T⁻¹).
inline bool is_n_simulation(const Relation& s, const Coalgebra& c, const Coalgebra& d,
                            const std::vector<Modality>& ops, std::size_t n, bool both = false) {
  const std::size_t cells = c.size() * d.size();
  if (cells > 12) throw BudgetExceeded("too many relations to enumerate");
  const std::uint64_t count = std::uint64_t{1} << cells;
  auto to_rel = [&](std::uint64_t mask) {
    Relation r(c.size(), d.size());
    for (std::size_t i = 0; i < cells; ++i)
      if ((mask >> i) & 1U) r.insert(static_cast<State>(i / d.size()), static_cast<State>(i % d.size()));
    return r;
  };
  std::vector<bool> level(count, true);  // every relation is a 0-simulation
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<bool> next(count, false);
    for (std::uint64_t t = 0; t < count; ++t) {
      if (!level[t]) continue;
      const Relation rt = to_rel(t);
      const SubsetTable table = subset_table(rt);
      const SubsetTable back = both ? subset_table(rt.converse()) : SubsetTable{};
      std::uint64_t keep = 0;
      for (std::size_t i = 0; i < cells; ++i) {
        if (!((t >> i) & 1U)) continue;
        const auto x = static_cast<State>(i / d.size()), y = static_cast<State>(i % d.size());
        if (pair_violation(x, y, c.at(x), d.at(y), table, ops)) continue;
        if (both && pair_violation(y, x, d.at(y), c.at(x), back, ops)) continue;
        keep |= std::uint64_t{1} << i;
      }
      next[keep] = true;
    }
    // downward close
    for (std::uint64_t m = count; m-- > 0;)
      if (next[m])
        for (std::size_t i = 0; i < cells; ++i)
          if ((m >> i) & 1U) next[m & ~(std::uint64_t{1} << i)] = true;
    level = std::move(next);
  }
  std::uint64_t mask = 0;
  for (auto [x, y] : s.pairs()) mask |= std::uint64_t{1} << (x * d.size() + y);
  return level[mask];
}

/// Classical Kripke bisimilarity: atoms agree, forth and back on successors.
inline Relation kripke_bisimilarity(const Coalgebra& c, const Coalgebra& d) {
  Relation r = Relation::full(c.size(), d.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [x, y] : r.pairs()) {
      const auto& a = std::get<KripkeValue>(c.at(x));
      const auto& b = std::get<KripkeValue>(d.at(y));
      bool ok = a.props == b.props;
      for (State s : a.succ) {
        bool match = false;
        for (State t : b.succ) match = match || r.contains(s, t);
        ok = ok && match;
      }
      for (State t : b.succ) {
        bool match = false;
        for (State s : a.succ) match = match || r.contains(s, t);
        ok = ok && match;
      }
      if (!ok) {
        r.erase(x, y);
        changed = true;
      }
    }
  }
  return r;
}

/// Difunctional closure as connected components of the bipartite graph.
inline Relation difunctional_closure(const Relation& s) {
  const std::size_t nl = s.left_size(), nr = s.right_size();
  std::vector<int> comp(nl + nr, -1);
  int next = 0;
  for (std::size_t start = 0; start < nl + nr; ++start) {
    if (comp[start] != -1) continue;
    std::deque<std::size_t> queue{start};
    comp[start] = next;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      if (v < nl) {
        for (std::size_t y = 0; y < nr; ++y)
          if (s.contains(static_cast<State>(v), static_cast<State>(y)) && comp[nl + y] == -1) {
            comp[nl + y] = next;
            queue.push_back(nl + y);
          }
      } else {
        for (std::size_t x = 0; x < nl; ++x)
          if (s.contains(static_cast<State>(x), static_cast<State>(v - nl)) && comp[x] == -1) {
            comp[x] = next;
            queue.push_back(x);
          }
      }
    }
    ++next;
  }
  Relation out(nl, nr);
  for (State x = 0; x < nl; ++x)
    for (State y = 0; y < nr; ++y)
      if (comp[x] == comp[nl + y]) out.insert(x, y);  // isolated nodes sit alone
  return out;
}

/// Does some value over `cells` project to (t, u)? Decided by Hall-type
/// conditions rather than by constructing a coupling: for quantitative
/// kinds, totals agree and every A carries no more than its cell image.
inline bool coupling_exists(const FunctorValue& t, const FunctorValue& u, const Relation& cells) {
  const std::size_t n = cells.left_size();
  if (n > kMaxCarrier) throw BudgetExceeded("oracle carrier too large");
  switch (kind_of(t)) {
    case Kind::Kripke: {
      const auto& a = std::get<KripkeValue>(t);
      const auto& b = std::get<KripkeValue>(u);
      if (a.props != b.props) return false;
      for (State s : a.succ) {
        bool ok = false;
        for (State r : b.succ) ok = ok || cells.contains(s, r);
        if (!ok) return false;
      }
      for (State r : b.succ) {
        bool ok = false;
        for (State s : a.succ) ok = ok || cells.contains(s, r);
        if (!ok) return false;
      }
      return true;
    }
    case Kind::Distribution:
    case Kind::Multiset: {
      // integer masses on a common scale
      auto masses = [](const FunctorValue& v, std::int64_t scale) {
        std::vector<std::pair<State, std::int64_t>> out;
        if (const auto* dv = std::get_if<DistValue>(&v))
          for (const auto& [s, m] : dv->mass) out.emplace_back(s, m.numerator() * (scale / m.denominator()));
        else
          for (const auto& [s, w] : std::get<MultisetValue>(v).weights) {
            if (w.infinite) throw ValidationError("infinite weights are not supported here");
            out.emplace_back(s, static_cast<std::int64_t>(w.count));
          }
        return out;
      };
      std::int64_t scale = 1;
      for (const auto* v : {&t, &u})
        if (const auto* dv = std::get_if<DistValue>(v))
          for (const auto& e : dv->mass) scale = std::lcm(scale, e.second.denominator());
      const auto mt = masses(t, scale), mu = masses(u, scale);
      std::int64_t tt = 0, tu = 0;
      for (const auto& e : mt) tt += e.second;
      for (const auto& e : mu) tu += e.second;
      if (tt != tu) return false;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const Subset a = subset_of_mask(mask, n);
        const Subset img = image(cells, a);
        std::int64_t lhs = 0, rhs = 0;
        for (const auto& [s, m] : mt) lhs += in(a, s) ? m : 0;
        for (const auto& [s, m] : mu) rhs += in(img, s) ? m : 0;
        if (lhs > rhs) return false;
      }
      return true;
    }
    case Kind::Neighborhood: break;
  }
  throw ValidationError("no coupling oracle for neighbourhood values");
}

}  // namespace coalsim::oracle

#endif  // COALSIM_ORACLE_HPP
