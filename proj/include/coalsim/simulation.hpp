#ifndef COALSIM_SIMULATION_HPP
#define COALSIM_SIMULATION_HPP

// Λ-simulations, Λ-bisimulations, their bounded-depth variants and
// bisimulations up to difunctionality between two finite coalgebras.
//
// The defining condition quantifies over all A ⊆ X. Since satisfaction of
// ξ(x) ⊨ ♥A only reads A ∩ base(ξ(x)) and every operator is monotone, it is
// enough to let A range over subsets of base(ξ(x)); violation witnesses
// report that restricted A.

#include <optional>
#include <vector>

#include "coalsim/functor.hpp"
#include "coalsim/lifting.hpp"
#include "coalsim/relation.hpp"

namespace coalsim {

enum class Direction { Forward, Backward };

/// One failure of the simulation condition: from ⊨ ♥A holds but to ⊭ ♥R[A].
/// For Backward violations `from` is a right-hand state and `to` a left one.
struct Violation {
  Direction direction = Direction::Forward;
  State from = 0;
  State to = 0;
  Modality modality;
  std::vector<State> subset;
};

struct SimulationReport {
  bool holds = true;
  std::vector<Violation> violations;  // at most kMaxViolations per direction
  std::size_t total_violations = 0;

  static constexpr std::size_t kMaxViolations = 100;

  void merge(const SimulationReport& other) {
    holds = holds && other.holds;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    total_violations += other.total_violations;
  }
};

namespace detail {

inline void require_kinds(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig) {
  if (c.kind().tag != sig.kind.tag || d.kind().tag != sig.kind.tag)
    throw KindMismatch(std::string("signature '") + sig.literal + "' over " + kind_name(sig.kind.tag) +
                       " used with " + kind_name(c.kind().tag) + "/" + kind_name(d.kind().tag) + " coalgebras");
}

/// Scans ♥ ∈ Λ and A ⊆ base(t) for t ⊨ ♥A ∧ ¬(u ⊨ ♥R[A]). Calls
/// on_violation(♥, A) for each failure; stops when it returns false.
/// Returns true iff no violation was found.
template <typename OnViolation>
bool scan_pair(const FunctorValue& t, const FunctorValue& u, const Relation& r, std::size_t left_size,
               const LambdaSignature& sig, OnViolation&& on_violation) {
  const std::vector<State> b = base(t);
  const std::size_t k = b.size();
  if (k > max_exhaustive_base())
    throw BudgetExceeded("base of " + std::to_string(k) + " states exceeds exhaustive bound " +
                         std::to_string(max_exhaustive_base()));
  const std::size_t total = std::size_t{1} << k;
  std::vector<StateSet> images(total, StateSet(r.right_size()));
  StateSet a(left_size);
  bool clean = true;
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (mask != 0) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      images[mask] = images[mask & (mask - 1)] | r.row(b[low]);
    }
    a.reset();
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1U) a.set(b[i]);
    for (const auto& h : sig.modalities) {
      if (satisfies(t, h, a) && !satisfies(u, h, images[mask])) {
        clean = false;
        if (!on_violation(h, a)) return false;
      }
    }
  }
  return clean;
}

inline bool pair_ok(const FunctorValue& t, const FunctorValue& u, const Relation& r, std::size_t left_size,
                    const LambdaSignature& sig) {
  return scan_pair(t, u, r, left_size, sig, [](const Modality&, const StateSet&) { return false; });
}

/// Checks every pair of `pairs` against images under `images`.
inline SimulationReport check_pairs(const Relation& pairs, const Relation& images, const Coalgebra& c,
                                    const Coalgebra& d, const LambdaSignature& sig, Direction dir) {
  SimulationReport rep;
  for (auto [x, y] : pairs.pairs()) {
    scan_pair(c.at(x), d.at(y), images, c.size(), sig, [&](const Modality& h, const StateSet& a) {
      rep.holds = false;
      ++rep.total_violations;
      if (rep.violations.size() < SimulationReport::kMaxViolations)
        rep.violations.push_back(Violation{dir, x, y, h, members(a)});
      return true;
    });
  }
  return rep;
}

inline void require_carriers(const Relation& s, const Coalgebra& c, const Coalgebra& d) {
  if (s.left_size() != c.size() || s.right_size() != d.size())
    throw ValidationError("relation carriers do not match the coalgebras");
}

}  // namespace detail

/// S[A].
inline StateSet image(const Relation& s, const StateSet& a) { return s.image(a); }

/// Is S : C → D a Λ-simulation? Reports every violation (capped).
inline SimulationReport is_simulation(const Relation& s, const Coalgebra& c, const Coalgebra& d,
                                      const LambdaSignature& sig) {
  detail::require_kinds(c, d, sig);
  detail::require_carriers(s, c, d);
  return detail::check_pairs(s, s, c, d, sig, Direction::Forward);
}

/// S and S⁻¹ are both Λ-simulations.
inline SimulationReport is_bisimulation(const Relation& s, const Coalgebra& c, const Coalgebra& d,
                                        const LambdaSignature& sig) {
  SimulationReport rep = is_simulation(s, c, d, sig);
  const Relation inv = s.converse();
  rep.merge(detail::check_pairs(inv, inv, d, c, sig, Direction::Backward));
  return rep;
}

/// Λ-bisimulation up to difunctionality: images are taken under the
/// difunctional closure of S, in both directions.
inline SimulationReport is_bisimulation_up_to_difunctionality(const Relation& s, const Coalgebra& c,
                                                              const Coalgebra& d, const LambdaSignature& sig) {
  detail::require_kinds(c, d, sig);
  detail::require_carriers(s, c, d);
  const Relation closure = difunctional_closure(s);
  SimulationReport rep = detail::check_pairs(s, closure, c, d, sig, Direction::Forward);
  rep.merge(detail::check_pairs(s.converse(), closure.converse(), d, c, sig, Direction::Backward));
  return rep;
}

/// Functor-specific characterisations of Λ-simulation. Returns nullopt when
/// the signature is not one the characterisation covers:
///   Kripke (any of □, ◇, atoms)  forth for ◇, back for □, inclusion of atoms
///   distribution (full L or M grid) / multiset (◇_0..◇_K, K ≥ all totals)
///                                ζ(y)(S[A]) ≥ ξ(x)(A) for A ⊆ supp ξ(x)
///   neighbourhood {□}            S[m] ∈ ζ(y) for every minimal m of ξ(x)
inline std::optional<bool> fast_simulation_verdict(const Relation& s, const Coalgebra& c, const Coalgebra& d,
                                                   const LambdaSignature& sig) {
  detail::require_kinds(c, d, sig);
  detail::require_carriers(s, c, d);
  const auto pairs = s.pairs();
  switch (sig.kind.tag) {
    case Kind::Kripke: {
      const bool box = sig.contains(Modality::box());
      const bool diamond = sig.contains(Modality::diamond());
      for (auto [x, y] : pairs) {
        const auto& tx = std::get<KripkeValue>(c.at(x));
        const auto& ty = std::get<KripkeValue>(d.at(y));
        for (const auto& h : sig.modalities)
          if (h.op == Modality::Op::Atom && std::binary_search(tx.props.begin(), tx.props.end(), h.atom) &&
              !std::binary_search(ty.props.begin(), ty.props.end(), h.atom))
            return false;
        if (diamond)
          for (State xs : tx.succ)
            if (std::none_of(ty.succ.begin(), ty.succ.end(), [&](State ys) { return s.contains(xs, ys); }))
              return false;
        if (box)
          for (State ys : ty.succ)
            if (std::none_of(tx.succ.begin(), tx.succ.end(), [&](State xs) { return s.contains(xs, ys); }))
              return false;
      }
      return true;
    }
    case Kind::Distribution: {
      const bool at_least = sig.any_at_least && sig.only(Modality::Op::AtLeast);
      const bool more_than = sig.any_more_than && sig.only(Modality::Op::MoreThan);
      if (!at_least && !more_than) return std::nullopt;
      // The grid must contain every mass the inequality can compare.
      for (const Rational& p : model_statistics({&c, &d}).subset_masses)
        if (!sig.contains(at_least ? Modality::at_least(p) : Modality::more_than(p))) return std::nullopt;
      for (auto [x, y] : pairs) {
        const auto& mx = std::get<DistValue>(c.at(x)).mass;
        const auto& my = std::get<DistValue>(d.at(y)).mass;
        bool ok = true;
        std::vector<State> supp;
        for (const auto& e : mx) supp.push_back(e.first);
        for_each_subset(supp, c.size(), [&](const StateSet& a) {
          Rational lhs = 0, rhs = 0;
          for (const auto& [st, m] : mx)
            if (a.test(st)) lhs += m;
          const StateSet img = s.image(a);
          for (const auto& [st, m] : my)
            if (img.test(st)) rhs += m;
          return ok = rhs >= lhs;
        });
        if (!ok) return false;
      }
      return true;
    }
    case Kind::Multiset: {
      const auto st = model_statistics({&c, &d});
      if (!sig.only(Modality::Op::DiamondK)) return std::nullopt;
      const std::uint64_t top = sig.modalities.back().k;
      if (sig.modalities.size() != top + 1 || top < st.max_finite_total) return std::nullopt;
      for (auto [x, y] : pairs) {
        const auto& wx = std::get<MultisetValue>(c.at(x)).weights;
        const auto& wy = std::get<MultisetValue>(d.at(y)).weights;
        bool ok = true;
        std::vector<State> supp;
        for (const auto& e : wx) supp.push_back(e.first);
        for_each_subset(supp, c.size(), [&](const StateSet& a) {
          Weight lhs, rhs;
          for (const auto& [st2, w] : wx)
            if (a.test(st2)) lhs += w;
          const StateSet img = s.image(a);
          for (const auto& [st2, w] : wy)
            if (img.test(st2)) rhs += w;
          return ok = !(rhs < lhs);
        });
        if (!ok) return false;
      }
      return true;
    }
    case Kind::Neighborhood: {
      if (!sig.only(Modality::Op::NbhdBox)) return std::nullopt;
      for (auto [x, y] : pairs) {
        const auto& nx = std::get<NbhdValue>(c.at(x));
        for (const auto& m : nx.minimals) {
          const StateSet img = s.image(make_set(c.size(), m));
          if (!satisfies(d.at(y), Modality::nbhd_box(), img)) return false;
        }
      }
      return true;
    }
  }
  return std::nullopt;
}

namespace detail {

/// One refinement step: keeps the pairs of `current` whose simulation
/// condition holds with images under `current` (and, for bisimulations,
/// under its converse in the other direction). Pairs are judged against the
/// relation as it stood at the start of the step.
inline Relation refine(const Relation& current, const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                       bool both_directions) {
  Relation next = current;
  const Relation inv = both_directions ? current.converse() : Relation();
  for (auto [x, y] : current.pairs()) {
    bool ok = pair_ok(c.at(x), d.at(y), current, c.size(), sig);
    if (ok && both_directions) ok = pair_ok(d.at(y), c.at(x), inv, d.size(), sig);
    if (!ok) next.erase(x, y);
  }
  return next;
}

inline Relation greatest_fixpoint(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                                  bool both_directions) {
  require_kinds(c, d, sig);
  Relation r = Relation::full(c.size(), d.size());
  while (true) {
    Relation next = refine(r, c, d, sig, both_directions);
    if (next == r) return r;
    r = std::move(next);
  }
}

}  // namespace detail

/// Largest Λ-simulation C → D (Λ-simulations are closed under unions).
inline Relation greatest_simulation(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig) {
  return detail::greatest_fixpoint(c, d, sig, false);
}

/// Largest Λ-bisimulation between C and D.
inline Relation greatest_bisimulation(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig) {
  return detail::greatest_fixpoint(c, d, sig, true);
}

/// R_0 = X × Y, R_{k+1} = pairs of R_k satisfying the step condition with
/// images under R_k. R_k is the greatest Λ-k-simulation.
inline std::vector<Relation> n_simulation_chain(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                                                std::size_t n) {
  detail::require_kinds(c, d, sig);
  std::vector<Relation> chain{Relation::full(c.size(), d.size())};
  for (std::size_t k = 0; k < n; ++k) chain.push_back(detail::refine(chain.back(), c, d, sig, false));
  return chain;
}

/// Chain refined in both directions at once.
inline std::vector<Relation> n_bisimulation_chain(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                                                  std::size_t n) {
  detail::require_kinds(c, d, sig);
  std::vector<Relation> chain{Relation::full(c.size(), d.size())};
  for (std::size_t k = 0; k < n; ++k) chain.push_back(detail::refine(chain.back(), c, d, sig, true));
  return chain;
}

/// S is a Λ-n-simulation iff S ⊆ R_n.
inline bool is_n_simulation(const Relation& s, const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                            std::size_t n) {
  detail::require_carriers(s, c, d);
  if (n == 0) return true;
  return s.is_subset_of(n_simulation_chain(c, d, sig, n).back());
}

/// Λ-n-bisimulation: a chain S = S_n ⊆ S_{n-1} ⊆ … ⊆ S_0 whose steps hold
/// for S_k and its converse at once. Decided by containment in the joint
/// chain. Asking only that S and S⁻¹ be n-simulations separately (each with
/// its own chain) is weaker: it gives mutual n-similarity, which for Kripke
/// models can relate states that differ at depth 2.
inline bool is_n_bisimulation(const Relation& s, const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                              std::size_t n) {
  detail::require_carriers(s, c, d);
  if (n == 0) return true;
  return s.is_subset_of(n_bisimulation_chain(c, d, sig, n).back());
}

inline Relation greatest_n_bisimulation(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                                        std::size_t n) {
  return n_bisimulation_chain(c, d, sig, n).back();
}

/// Greatest S such that S and S⁻¹ are each n-simulations: R_n ∩ (R'_n)⁻¹
/// with R' the chain from D to C.
inline Relation greatest_mutual_n_simulation(const Coalgebra& c, const Coalgebra& d, const LambdaSignature& sig,
                                             std::size_t n) {
  Relation fwd = n_simulation_chain(c, d, sig, n).back();
  return fwd & n_simulation_chain(d, c, sig, n).back().converse();
}

}  // namespace coalsim

#endif  // COALSIM_SIMULATION_HPP
