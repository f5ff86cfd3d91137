#ifndef COALSIM_RANDOM_HPP
#define COALSIM_RANDOM_HPP

// Seeded generators for models, values, relations, maps and formulas.
// Draws go through `uniform` (modulo reduction of mt19937_64 output) so
// the same config and seed give the same model on every platform.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "coalsim/formula.hpp"
#include "coalsim/functor.hpp"
#include "coalsim/lifting.hpp"
#include "coalsim/relation.hpp"

namespace coalsim {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  return lo + rng() % (hi - lo + 1);
}

inline bool coin(Rng& rng, unsigned percent) { return uniform(rng, 0, 99) < percent; }

/// Seed for trial `index` of a run seeded with `seed` (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct GeneratorConfig {
  std::uint64_t seed = 0;
  FunctorKind kind;
  std::size_t min_states = 1;
  std::size_t max_states = 4;
  std::size_t branching = 3;         // support / successor cap
  std::int64_t denominator_cap = 4;  // distributions
  std::uint64_t weight_cap = 3;      // multisets
  unsigned infinite_percent = 0;     // chance of an ∞ multiset weight
  std::size_t max_minimals = 3;      // neighbourhoods

  void check() const {
    if (min_states == 0 || max_states < min_states) throw ValidationError("generator: bad state-count range");
    if (denominator_cap <= 0 || weight_cap == 0) throw ValidationError("generator: caps must be positive");
  }
};

inline std::vector<State> random_subset(Rng& rng, std::size_t n, std::size_t max_size) {
  std::vector<State> all(n);
  std::iota(all.begin(), all.end(), State{0});
  for (std::size_t i = n; i > 1; --i) std::swap(all[i - 1], all[uniform(rng, 0, i - 1)]);
  all.resize(uniform(rng, 0, std::min(max_size, n)));
  std::sort(all.begin(), all.end());
  return all;
}

/// A random normalized value over `n` states.
inline FunctorValue random_value(const GeneratorConfig& cfg, std::size_t n, Rng& rng) {
  switch (cfg.kind.tag) {
    case Kind::Kripke: {
      std::vector<std::string> props;
      for (const auto& a : cfg.kind.atoms)
        if (coin(rng, 50)) props.push_back(a);
      return make_kripke(props, random_subset(rng, n, cfg.branching));
    }
    case Kind::Multiset: {
      std::vector<std::pair<State, Weight>> entries;
      for (State s : random_subset(rng, n, cfg.branching)) {
        Weight w = coin(rng, cfg.infinite_percent) ? Weight::inf() : Weight{uniform(rng, 1, cfg.weight_cap), false};
        entries.emplace_back(s, w);
      }
      return make_multiset(entries);
    }
    case Kind::Distribution: {
      const auto den = static_cast<std::int64_t>(uniform(rng, 1, static_cast<std::uint64_t>(cfg.denominator_cap)));
      const std::size_t cap = std::min({cfg.branching == 0 ? std::size_t{1} : cfg.branching, n,
                                        static_cast<std::size_t>(den)});
      std::vector<State> supp;
      do {
        supp = random_subset(rng, n, cap);
      } while (supp.empty());
      // k positive parts of den: choose k-1 distinct cut points in 1..den-1
      std::vector<std::int64_t> cuts;
      std::vector<std::int64_t> pool(static_cast<std::size_t>(den - 1));
      std::iota(pool.begin(), pool.end(), 1);
      for (std::size_t i = 0; i + 1 < supp.size(); ++i) {
        std::size_t j = uniform(rng, i, pool.size() - 1);
        std::swap(pool[i], pool[j]);
        cuts.push_back(pool[i]);
      }
      cuts.push_back(0);
      cuts.push_back(den);
      std::sort(cuts.begin(), cuts.end());
      std::vector<std::pair<State, Rational>> entries;
      for (std::size_t i = 0; i < supp.size(); ++i) entries.emplace_back(supp[i], Rational(cuts[i + 1] - cuts[i], den));
      return make_dist(entries);
    }
    case Kind::Neighborhood: {
      std::vector<std::vector<State>> family;
      const std::size_t count = uniform(rng, 0, cfg.max_minimals);
      for (std::size_t i = 0; i < count; ++i) {
        auto set = random_subset(rng, n, cfg.branching);
        if (set.empty() && !coin(rng, 15)) set = random_subset(rng, n, cfg.branching);
        family.push_back(std::move(set));
      }
      return make_nbhd(std::move(family));
    }
  }
  return KripkeValue{};
}

/// Deterministic per seed; always passes validate().
inline Coalgebra generate_coalgebra(const GeneratorConfig& cfg) {
  cfg.check();
  Rng rng(cfg.seed);
  const std::size_t n = uniform(rng, cfg.min_states, cfg.max_states);
  std::vector<std::string> names;
  std::vector<FunctorValue> values;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) values.push_back(random_value(cfg, n, rng));
  return Coalgebra(cfg.kind, std::move(names), std::move(values));
}

inline Relation random_relation(Rng& rng, std::size_t left, std::size_t right, unsigned percent) {
  Relation r(left, right);
  for (State x = 0; x < left; ++x)
    for (State y = 0; y < right; ++y)
      if (coin(rng, percent)) r.insert(x, y);
  return r;
}

/// Random subrelation of `s`.
inline Relation random_subrelation(Rng& rng, const Relation& s, unsigned percent) {
  Relation r(s.left_size(), s.right_size());
  for (auto [x, y] : s.pairs())
    if (coin(rng, percent)) r.insert(x, y);
  return r;
}

inline std::vector<State> random_map(Rng& rng, std::size_t from, std::size_t to) {
  std::vector<State> f(from);
  for (auto& v : f) v = static_cast<State>(uniform(rng, 0, to - 1));
  return f;
}

/// Random injective map from `from` states into `to >= from` states.
inline std::vector<State> random_injection(Rng& rng, std::size_t from, std::size_t to) {
  std::vector<State> all(to);
  std::iota(all.begin(), all.end(), State{0});
  for (std::size_t i = to; i > 1; --i) std::swap(all[i - 1], all[uniform(rng, 0, i - 1)]);
  all.resize(from);
  return all;
}

/// Random formula over the signature's operators with rank at most
/// `max_rank`; `positive` restricts to the negation-free fragment.
inline Formula random_formula(Rng& rng, const LambdaSignature& sig, std::size_t max_rank, bool positive,
                              std::size_t max_size = 12) {
  std::vector<Modality> unary, atoms;
  for (const auto& h : sig.modalities) (h.nullary() ? atoms : unary).push_back(h);
  std::function<Formula(std::size_t, std::size_t)> gen = [&](std::size_t rank_left, std::size_t size_left) -> Formula {
    const std::uint64_t choice = uniform(rng, 0, size_left <= 1 ? 2 : 7);
    switch (choice) {
      case 0: return Formula::top();
      case 1: return Formula::bot();
      case 2:
        if (rank_left >= 1 && !atoms.empty()) return Formula::atom(atoms[uniform(rng, 0, atoms.size() - 1)].atom);
        return coin(rng, 50) ? Formula::top() : Formula::bot();
      case 3:
        if (!positive) return Formula::neg(gen(rank_left, size_left - 1));
        [[fallthrough]];
      case 4: return Formula::conj(gen(rank_left, size_left / 2), gen(rank_left, size_left / 2));
      case 5: return Formula::disj(gen(rank_left, size_left / 2), gen(rank_left, size_left / 2));
      default:
        if (rank_left >= 1 && !unary.empty())
          return Formula::modal(unary[uniform(rng, 0, unary.size() - 1)], gen(rank_left - 1, size_left - 1));
        if (rank_left >= 1 && !atoms.empty()) return Formula::atom(atoms[uniform(rng, 0, atoms.size() - 1)].atom);
        return Formula::top();
    }
  };
  return gen(max_rank, max_size);
}

}  // namespace coalsim

#endif  // COALSIM_RANDOM_HPP
