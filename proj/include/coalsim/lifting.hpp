#ifndef COALSIM_LIFTING_HPP
#define COALSIM_LIFTING_HPP

// Predicate liftings for the supported operators, the induced preorder on
// T X, and modal signatures.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coalsim/core.hpp"
#include "coalsim/functor.hpp"
#include "coalsim/modality.hpp"

namespace coalsim {

/// t ⊨ ♥A. A is a predicate over the carrier t lives in; it must be large
/// enough to index every state t mentions.
inline bool satisfies(const FunctorValue& t, const Modality& h, const StateSet& a) {
  if (h.kind() != kind_of(t))
    throw KindMismatch("modality " + to_string(h) + " applied to a " + kind_name(kind_of(t)) + " value");
  switch (h.op) {
    case Modality::Op::Box: {
      const auto& v = std::get<KripkeValue>(t);
      return std::all_of(v.succ.begin(), v.succ.end(), [&](State s) { return a.test(s); });
    }
    case Modality::Op::Diamond: {
      const auto& v = std::get<KripkeValue>(t);
      return std::any_of(v.succ.begin(), v.succ.end(), [&](State s) { return a.test(s); });
    }
    case Modality::Op::Atom: {
      const auto& v = std::get<KripkeValue>(t);
      return std::binary_search(v.props.begin(), v.props.end(), h.atom);
    }
    case Modality::Op::DiamondK: {
      Weight sum;
      for (const auto& [s, w] : std::get<MultisetValue>(t).weights)
        if (a.test(s)) sum += w;
      return sum.exceeds(h.k);
    }
    case Modality::Op::AtLeast:
    case Modality::Op::MoreThan: {
      Rational sum = 0;
      for (const auto& [s, m] : std::get<DistValue>(t).mass)
        if (a.test(s)) sum += m;
      return h.op == Modality::Op::AtLeast ? sum >= h.p : sum > h.p;
    }
    case Modality::Op::NbhdBox: {
      const auto& v = std::get<NbhdValue>(t);
      return std::any_of(v.minimals.begin(), v.minimals.end(), [&](const std::vector<State>& m) {
        return std::all_of(m.begin(), m.end(), [&](State s) { return a.test(s); });
      });
    }
  }
  return false;
}

/// A finite set Λ of monotone operators over one functor family.
///
/// `modalities` is the finite set quantified over by every relational check.
/// Formulas may additionally use any member of an admitted family (e.g. any
/// L_p for a probabilistic signature), see `admits`.
///
/// `separating` is declared from known facts about the families, never
/// computed: Kripke with all atoms plus □ or ◇; graded ◇_0..◇_K when K is at
/// least every finite total weight in the bound models; L_p or M_p over the
/// grid of all achievable subset masses; neighbourhood □.
struct LambdaSignature {
  FunctorKind kind;
  std::vector<Modality> modalities;  // sorted, unique
  bool separating = false;
  bool any_graded = false;
  bool any_at_least = false;
  bool any_more_than = false;
  bool any_atom = false;  // "atoms" requested before a vocabulary was known
  std::string literal;

  bool contains(const Modality& m) const { return std::binary_search(modalities.begin(), modalities.end(), m); }

  bool admits(const Modality& m) const {
    if (m.kind() != kind.tag) return false;
    if (contains(m)) return true;
    switch (m.op) {
      case Modality::Op::DiamondK: return any_graded;
      case Modality::Op::AtLeast: return any_at_least;
      case Modality::Op::MoreThan: return any_more_than;
      case Modality::Op::Atom: return any_atom;
      default: return false;
    }
  }

  bool only(Modality::Op op) const {
    return !modalities.empty() &&
           std::all_of(modalities.begin(), modalities.end(), [&](const Modality& m) { return m.op == op; });
  }
};

namespace detail {

inline void finish(LambdaSignature& sig) {
  std::sort(sig.modalities.begin(), sig.modalities.end());
  sig.modalities.erase(std::unique(sig.modalities.begin(), sig.modalities.end()), sig.modalities.end());
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Every finite total weight and every subset mass occurring in the models.
struct ModelStatistics {
  std::uint64_t max_finite_total = 0;
  std::set<Rational> subset_masses;
};

inline ModelStatistics model_statistics(const std::vector<const Coalgebra*>& models) {
  ModelStatistics st;
  st.subset_masses.insert(Rational(0));
  st.subset_masses.insert(Rational(1));
  for (const Coalgebra* c : models) {
    for (const auto& v : c->transition()) {
      if (const auto* ms = std::get_if<MultisetValue>(&v)) {
        std::uint64_t total = 0;
        for (const auto& [s, w] : ms->weights)
          if (!w.infinite) total += w.count;
        st.max_finite_total = std::max(st.max_finite_total, total);
      } else if (const auto* d = std::get_if<DistValue>(&v)) {
        const std::size_t k = d->mass.size();
        if (k > max_exhaustive_base())
          throw BudgetExceeded("distribution support of " + std::to_string(k) + " states exceeds exhaustive bound");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
          Rational sum = 0;
          for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1U) sum += d->mass[i].second;
          st.subset_masses.insert(sum);
        }
      }
    }
  }
  return st;
}

/// Default signature for a functor family, bound to the given models.
inline std::string default_signature_literal(Kind k) {
  switch (k) {
    case Kind::Kripke: return "kripke:box,diamond,atoms";
    case Kind::Multiset: return "graded:auto";
    case Kind::Distribution: return "prob:auto-grid";
    case Kind::Neighborhood: return "nbhd:box";
  }
  return "";
}

/// Parses a signature literal and binds it to the models it will be used
/// with (which fixes the atom vocabulary, the graded bound and the grid).
///
///   kripke:box,diamond,atoms   any subset of the three, or explicit atom names
///   graded:0..K | graded:auto  ◇_0..◇_K (auto: K = largest finite total weight)
///   prob:auto-grid             L_p over all achievable subset masses
///   prob:auto-grid-more        M_p over the same grid
///   prob:L(1/2),M(1/3)         explicit operators
///   nbhd:box
inline LambdaSignature parse_signature(std::string_view literal, const std::vector<const Coalgebra*>& models) {
  auto colon = literal.find(':');
  if (colon == std::string_view::npos) throw ValidationError("signature '" + std::string(literal) + "' lacks ':'");
  const std::string family(literal.substr(0, colon));
  const std::string body(literal.substr(colon + 1));
  LambdaSignature sig;
  sig.literal = std::string(literal);

  std::vector<std::string> vocab;
  for (const Coalgebra* c : models)
    for (const auto& a : c->kind().atoms) vocab.push_back(a);
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  if (family == "kripke") {
    sig.kind = FunctorKind{Kind::Kripke, vocab};
    bool has_box = false, has_diamond = false, all_atoms = false;
    std::set<std::string> explicit_atoms;
    for (const auto& tok : detail::split(body, ',')) {
      if (tok == "box") has_box = true;
      else if (tok == "diamond") has_diamond = true;
      else if (tok == "atoms") all_atoms = true;
      else if (!tok.empty()) explicit_atoms.insert(tok);
      else throw ValidationError("empty component in signature '" + std::string(literal) + "'");
    }
    sig.any_atom = all_atoms && models.empty();
    if (has_box) sig.modalities.push_back(Modality::box());
    if (has_diamond) sig.modalities.push_back(Modality::diamond());
    for (const auto& a : vocab)
      if (all_atoms || explicit_atoms.count(a)) sig.modalities.push_back(Modality::prop(a));
    for (const auto& a : explicit_atoms) {
      if (!std::binary_search(vocab.begin(), vocab.end(), a) && !models.empty())
        throw ValidationError("signature atom '" + a + "' not in the model vocabulary");
      if (models.empty()) sig.modalities.push_back(Modality::prop(a));
    }
    bool covers_vocab = all_atoms || std::all_of(vocab.begin(), vocab.end(), [&](const std::string& a) {
                          return explicit_atoms.count(a) > 0;
                        });
    sig.separating = (has_box || has_diamond) && covers_vocab;
  } else if (family == "graded") {
    sig.kind = FunctorKind{Kind::Multiset, {}};
    const auto st = model_statistics(models);
    std::uint64_t top = 0;
    if (body == "auto") {
      top = st.max_finite_total;
      sig.any_graded = true;
    } else {
      auto dots = body.find("..");
      if (dots == std::string::npos) throw ValidationError("graded signature expects 0..K or auto");
      try {
        if (std::stoull(body.substr(0, dots)) != 0) throw ValidationError("graded signature must start at 0");
        top = std::stoull(body.substr(dots + 2));
      } catch (const std::logic_error&) {
        throw ValidationError("malformed graded signature '" + std::string(literal) + "'");
      }
    }
    for (std::uint64_t k = 0; k <= top; ++k) sig.modalities.push_back(Modality::graded(k));
    sig.separating = top >= st.max_finite_total;
  } else if (family == "prob") {
    sig.kind = FunctorKind{Kind::Distribution, {}};
    if (body == "auto-grid" || body == "auto-grid-more") {
      const bool more = body == "auto-grid-more";
      for (const Rational& p : model_statistics(models).subset_masses)
        sig.modalities.push_back(more ? Modality::more_than(p) : Modality::at_least(p));
      (more ? sig.any_more_than : sig.any_at_least) = true;
      sig.separating = true;
    } else {
      for (const auto& tok : detail::split(body, ',')) {
        if (tok.size() < 4 || (tok[0] != 'L' && tok[0] != 'M') || tok[1] != '(' || tok.back() != ')')
          throw ValidationError("malformed probabilistic operator '" + tok + "'");
        Rational p = parse_rational(std::string_view(tok).substr(2, tok.size() - 3));
        sig.modalities.push_back(tok[0] == 'L' ? Modality::at_least(p) : Modality::more_than(p));
      }
    }
  } else if (family == "nbhd") {
    if (body != "box") throw ValidationError("neighborhood signature supports only 'box'");
    sig.kind = FunctorKind{Kind::Neighborhood, {}};
    sig.modalities.push_back(Modality::nbhd_box());
    sig.separating = true;
  } else {
    throw ValidationError("unknown signature family '" + family + "'");
  }
  for (const Coalgebra* c : models)
    if (c->kind().tag != sig.kind.tag)
      throw KindMismatch(std::string("signature '") + std::string(literal) + "' does not match " +
                         kind_name(c->kind().tag) + " model");
  detail::finish(sig);
  return sig;
}

inline LambdaSignature default_signature(const std::vector<const Coalgebra*>& models) {
  if (models.empty()) throw ValidationError("default signature needs at least one model");
  return parse_signature(default_signature_literal(models.front()->kind().tag), models);
}

namespace detail {

inline std::vector<State> joint_base(const FunctorValue& t, const FunctorValue& u) {
  auto a = base(t);
  auto b = base(u);
  std::vector<State> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::size_t carrier_bound(const std::vector<State>& states) {
  return states.empty() ? 1 : static_cast<std::size_t>(states.back()) + 1;
}

inline void require_same_kind(const FunctorValue& t, const FunctorValue& u) {
  if (t.index() != u.index())
    throw KindMismatch(std::string("comparing ") + kind_name(kind_of(t)) + " with " + kind_name(kind_of(u)));
}

}  // namespace detail

/// t ≤_Λ u. Subsets are drawn from base(t) ∪ base(u), which decides the
/// full quantification over X because satisfaction only reads A ∩ base and
/// every operator is monotone.
inline bool lambda_leq(const FunctorValue& t, const FunctorValue& u, const LambdaSignature& sig) {
  detail::require_same_kind(t, u);
  const auto universe = detail::joint_base(t, u);
  bool ok = true;
  for_each_subset(universe, detail::carrier_bound(universe), [&](const StateSet& a) {
    for (const auto& h : sig.modalities)
      if (satisfies(t, h, a) && !satisfies(u, h, a)) return ok = false;
    return true;
  });
  return ok;
}

/// Some (♥, A) on which t and u disagree, A ⊆ universe (default: the joint
/// base). Subsets are scanned in increasing mask order, operators in
/// signature order.
inline std::optional<std::pair<Modality, std::vector<State>>> distinguishing_pair(
    const FunctorValue& t, const FunctorValue& u, const LambdaSignature& sig,
    std::optional<std::vector<State>> universe = std::nullopt) {
  detail::require_same_kind(t, u);
  std::vector<State> uni = universe ? *universe : detail::joint_base(t, u);
  std::sort(uni.begin(), uni.end());
  uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
  auto all = detail::joint_base(t, u);
  std::size_t size = std::max(detail::carrier_bound(uni), detail::carrier_bound(all));
  std::optional<std::pair<Modality, std::vector<State>>> found;
  for_each_subset(uni, size, [&](const StateSet& a) {
    for (const auto& h : sig.modalities)
      if (satisfies(t, h, a) != satisfies(u, h, a)) {
        found.emplace(h, members(a));
        return false;
      }
    return true;
  });
  return found;
}

/// f is a Λ-homomorphism iff T f(ξ(x)) ≤_Λ ζ(f(x)) for
/// every x.
inline bool is_lambda_homomorphism(const std::vector<State>& f, const Coalgebra& c, const Coalgebra& d,
                                   const LambdaSignature& sig) {
  if (f.size() != c.size()) throw ValidationError("homomorphism map is not total on the source carrier");
  for (State x = 0; x < c.size(); ++x) {
    if (f[x] == kUnmapped || f[x] >= d.size()) throw ValidationError("homomorphism map undefined on " + c.name(x));
    if (!lambda_leq(relabel(c.at(x), f), d.at(f[x]), sig)) return false;
  }
  return true;
}

}  // namespace coalsim

#endif  // COALSIM_LIFTING_HPP
