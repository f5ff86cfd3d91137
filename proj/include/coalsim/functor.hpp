#ifndef COALSIM_FUNCTOR_HPP
#define COALSIM_FUNCTOR_HPP

// Concrete functors and finite coalgebras over them.
//
// Four functor families are supported:
//   Kripke        K X = 2^V x P(X)
//   Multiset      B X = finite-support maps X -> N ∪ {∞}
//   Distribution  D X = finitely supported probability distributions
//   Neighborhood  M X = upward-closed families of subsets of X
//
// Every value refers to states by index into the carrier it lives over.
// Values built through the make_* helpers are normalized, so structural
// equality coincides with equality in T X.

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "coalsim/core.hpp"

namespace coalsim {

enum class Kind { Kripke, Multiset, Distribution, Neighborhood };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Kripke: return "kripke";
    case Kind::Multiset: return "multiset";
    case Kind::Distribution: return "distribution";
    case Kind::Neighborhood: return "neighborhood";
  }
  return "?";
}

inline std::optional<Kind> kind_from_name(std::string_view name) {
  if (name == "kripke") return Kind::Kripke;
  if (name == "multiset") return Kind::Multiset;
  if (name == "distribution") return Kind::Distribution;
  if (name == "neighborhood") return Kind::Neighborhood;
  return std::nullopt;
}

/// Functor tag. Only the Kripke family carries data: its proposition
/// vocabulary V (possibly empty, which gives plain finite powerset).
struct FunctorKind {
  Kind tag = Kind::Kripke;
  std::vector<std::string> atoms;

  friend bool operator==(const FunctorKind&, const FunctorKind&) = default;
};

struct KripkeValue {
  std::vector<std::string> props;  // sorted, unique
  std::vector<State> succ;         // sorted, unique

  friend bool operator==(const KripkeValue&, const KripkeValue&) = default;
  friend bool operator<(const KripkeValue& a, const KripkeValue& b) {
    return std::tie(a.props, a.succ) < std::tie(b.props, b.succ);
  }
};

struct MultisetValue {
  std::vector<std::pair<State, Weight>> weights;  // sorted by state, no zero weights

  friend bool operator==(const MultisetValue&, const MultisetValue&) = default;
  friend bool operator<(const MultisetValue& a, const MultisetValue& b) {
    return std::lexicographical_compare(a.weights.begin(), a.weights.end(), b.weights.begin(), b.weights.end(),
                                        [](const auto& l, const auto& r) {
                                          if (l.first != r.first) return l.first < r.first;
                                          return l.second < r.second;
                                        });
  }
};

struct DistValue {
  std::vector<std::pair<State, Rational>> mass;  // sorted by state, positive masses

  friend bool operator==(const DistValue&, const DistValue&) = default;
  friend bool operator<(const DistValue& a, const DistValue& b) {
    return std::lexicographical_compare(a.mass.begin(), a.mass.end(), b.mass.begin(), b.mass.end(),
                                        [](const auto& l, const auto& r) {
                                          if (l.first != r.first) return l.first < r.first;
                                          return l.second < r.second;
                                        });
  }
};

/// Upward-closed family represented by its antichain of minimal members.
/// A ∈ S iff some minimal m ⊆ A.
struct NbhdValue {
  std::vector<std::vector<State>> minimals;  // each sorted; outer sorted; antichain

  friend bool operator==(const NbhdValue&, const NbhdValue&) = default;
  friend bool operator<(const NbhdValue& a, const NbhdValue& b) { return a.minimals < b.minimals; }
};

/// One element of T X. The alternative index matches `Kind`.
using FunctorValue = std::variant<KripkeValue, MultisetValue, DistValue, NbhdValue>;

inline Kind kind_of(const FunctorValue& v) { return static_cast<Kind>(v.index()); }

namespace detail {

inline void sort_unique(std::vector<State>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline bool is_subset_sorted(const std::vector<State>& a, const std::vector<State>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Keeps only the inclusion-minimal sets of a family, sorted and deduplicated.
inline std::vector<std::vector<State>> minimize_family(std::vector<std::vector<State>> family) {
  for (auto& s : family) sort_unique(s);
  std::sort(family.begin(), family.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<std::vector<State>> kept;
  for (auto& s : family) {
    bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto& m) { return is_subset_sorted(m, s); });
    if (!dominated) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace detail

inline FunctorValue make_kripke(std::vector<std::string> props, std::vector<State> succ) {
  std::sort(props.begin(), props.end());
  props.erase(std::unique(props.begin(), props.end()), props.end());
  detail::sort_unique(succ);
  return KripkeValue{std::move(props), std::move(succ)};
}

inline FunctorValue make_multiset(const std::vector<std::pair<State, Weight>>& entries) {
  std::map<State, Weight> acc;
  for (const auto& [s, w] : entries) acc[s] += w;
  MultisetValue out;
  for (const auto& [s, w] : acc)
    if (!w.is_zero()) out.weights.emplace_back(s, w);
  return out;
}

inline FunctorValue make_dist(const std::vector<std::pair<State, Rational>>& entries) {
  std::map<State, Rational> acc;
  for (const auto& [s, m] : entries) acc[s] += m;
  DistValue out;
  for (const auto& [s, m] : acc)
    if (m != Rational(0)) out.mass.emplace_back(s, m);
  return out;
}

inline FunctorValue make_nbhd(std::vector<std::vector<State>> family) {
  return NbhdValue{detail::minimize_family(std::move(family))};
}

/// Re-establishes the canonical representation of a value.
inline FunctorValue normalize(const FunctorValue& v) {
  return std::visit(
      [](const auto& t) -> FunctorValue {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, KripkeValue>) return make_kripke(t.props, t.succ);
        else if constexpr (std::is_same_v<T, MultisetValue>) return make_multiset(t.weights);
        else if constexpr (std::is_same_v<T, DistValue>) return make_dist(t.mass);
        else return make_nbhd(t.minimals);
      },
      v);
}

/// Finite T-coalgebra: an ordered nonempty carrier of named states and a
/// transition map into T of that carrier.
class Coalgebra {
 public:
  Coalgebra() = default;
  Coalgebra(FunctorKind kind, std::vector<std::string> states, std::vector<FunctorValue> transition)
      : kind_(std::move(kind)), states_(std::move(states)), transition_(std::move(transition)) {
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], static_cast<State>(i));
  }

  const FunctorKind& kind() const { return kind_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& name(State s) const { return states_.at(s); }
  const FunctorValue& at(State s) const { return transition_.at(s); }
  const std::vector<FunctorValue>& transition() const { return transition_; }

  std::optional<State> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  State index_of(std::string_view name) const {
    auto s = find(name);
    if (!s) throw ValidationError("unknown state '" + std::string(name) + "'");
    return *s;
  }

  StateSet empty_set() const { return StateSet(size()); }
  StateSet full_set() const { return StateSet(size()).set(); }

 private:
  FunctorKind kind_;
  std::vector<std::string> states_;
  std::vector<FunctorValue> transition_;
  std::unordered_map<std::string, State> index_;
};

/// Checks every structural invariant; throws ValidationError listing each
/// violation as "state '<name>': <problem>".
inline void validate(const Coalgebra& c) {
  std::vector<std::string> problems;
  const std::size_t n = c.size();
  if (n == 0) problems.emplace_back("carrier is empty");
  if (c.transition().size() != n)
    problems.emplace_back("transition map has " + std::to_string(c.transition().size()) + " entries for " +
                          std::to_string(n) + " states");
  {
    std::vector<std::string> sorted = c.states();
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
      problems.push_back("duplicate state name '" + *dup + "'");
  }
  std::vector<std::string> vocab = c.kind().atoms;
  std::sort(vocab.begin(), vocab.end());
  if (std::adjacent_find(vocab.begin(), vocab.end()) != vocab.end()) problems.emplace_back("duplicate atom");

  auto in_range = [&](State s) { return s < n; };
  for (std::size_t i = 0; i < std::min(n, c.transition().size()); ++i) {
    const std::string where = "state '" + c.states()[i] + "': ";
    const FunctorValue& v = c.transition()[i];
    if (kind_of(v) != c.kind().tag) {
      problems.push_back(where + "value of kind " + kind_name(kind_of(v)) + " in a " + kind_name(c.kind().tag) +
                         " coalgebra");
      continue;
    }
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, KripkeValue>) {
            for (const auto& p : t.props)
              if (!std::binary_search(vocab.begin(), vocab.end(), p))
                problems.push_back(where + "proposition '" + p + "' not in vocabulary");
            if (!std::all_of(t.succ.begin(), t.succ.end(), in_range)) problems.push_back(where + "successor outside carrier");
            if (std::adjacent_find(t.succ.begin(), t.succ.end(), std::greater_equal<>()) != t.succ.end())
              problems.push_back(where + "successor list not sorted and duplicate-free");
          } else if constexpr (std::is_same_v<T, MultisetValue>) {
            for (std::size_t j = 0; j < t.weights.size(); ++j) {
              const auto& [s, w] = t.weights[j];
              if (!in_range(s)) problems.push_back(where + "weight on state outside carrier");
              if (w.is_zero()) problems.push_back(where + "explicit zero weight");
              if (j > 0 && t.weights[j - 1].first >= s) problems.push_back(where + "weights not sorted by state");
            }
          } else if constexpr (std::is_same_v<T, DistValue>) {
            Rational sum = 0;
            for (std::size_t j = 0; j < t.mass.size(); ++j) {
              const auto& [s, m] = t.mass[j];
              if (!in_range(s)) problems.push_back(where + "mass on state outside carrier");
              if (m <= Rational(0)) problems.push_back(where + "non-positive mass " + to_string(m));
              if (j > 0 && t.mass[j - 1].first >= s) problems.push_back(where + "masses not sorted by state");
              sum += m;
            }
            if (sum != Rational(1)) problems.push_back(where + "mass sum " + to_string(sum) + " ≠ 1");
          } else {
            for (const auto& m : t.minimals) {
              if (!std::all_of(m.begin(), m.end(), in_range)) problems.push_back(where + "neighborhood mentions state outside carrier");
              if (std::adjacent_find(m.begin(), m.end(), std::greater_equal<>()) != m.end())
                problems.push_back(where + "minimal set not sorted and duplicate-free");
            }
            bool antichain = true;
            for (std::size_t a = 0; a < t.minimals.size() && antichain; ++a)
              for (std::size_t b = 0; b < t.minimals.size(); ++b)
                if (a != b && detail::is_subset_sorted(t.minimals[a], t.minimals[b])) {
                  antichain = false;
                  break;
                }
            if (!antichain) problems.push_back(where + "minimals not an antichain");
          }
        },
        v);
  }
  if (!problems.empty()) {
    std::string msg = "invalid coalgebra:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

/// Support of a value: every satisfaction query depends only on A ∩ base(t).
inline std::vector<State> base(const FunctorValue& v) {
  return std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        std::vector<State> out;
        if constexpr (std::is_same_v<T, KripkeValue>) {
          out = t.succ;
        } else if constexpr (std::is_same_v<T, MultisetValue>) {
          for (const auto& e : t.weights) out.push_back(e.first);
        } else if constexpr (std::is_same_v<T, DistValue>) {
          for (const auto& e : t.mass) out.push_back(e.first);
        } else {
          for (const auto& m : t.minimals) out.insert(out.end(), m.begin(), m.end());
        }
        detail::sort_unique(out);
        return out;
      },
      v);
}

/// Marks states a map leaves undefined.
inline constexpr State kUnmapped = std::numeric_limits<State>::max();

/// Functorial action T f. `f[s]` is the image of state s; every state the
/// value mentions must be mapped.
inline FunctorValue relabel(const FunctorValue& v, const std::vector<State>& f) {
  auto map = [&](State s) {
    if (s >= f.size() || f[s] == kUnmapped)
      throw ValidationError("relabel: map undefined on state " + std::to_string(s));
    return f[s];
  };
  return std::visit(
      [&](const auto& t) -> FunctorValue {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, KripkeValue>) {
          std::vector<State> img;
          img.reserve(t.succ.size());
          for (State s : t.succ) img.push_back(map(s));
          detail::sort_unique(img);
          return KripkeValue{t.props, std::move(img)};
        } else if constexpr (std::is_same_v<T, MultisetValue>) {
          std::vector<std::pair<State, Weight>> out;
          for (const auto& [s, w] : t.weights) out.emplace_back(map(s), w);
          return make_multiset(out);
        } else if constexpr (std::is_same_v<T, DistValue>) {
          std::vector<std::pair<State, Rational>> out;
          for (const auto& [s, m] : t.mass) out.emplace_back(map(s), m);
          return make_dist(out);
        } else {
          // B ∈ Tf(S) iff f⁻¹[B] ∈ S; the minimal such B are the images of
          // the minimal members of S.
          std::vector<std::vector<State>> out;
          for (const auto& m : t.minimals) {
            std::vector<State> img;
            for (State s : m) img.push_back(map(s));
            out.push_back(std::move(img));
          }
          return make_nbhd(std::move(out));
        }
      },
      v);
}

inline bool values_equal(const FunctorValue& a, const FunctorValue& b) {
  if (a.index() != b.index())
    throw KindMismatch(std::string("comparing ") + kind_name(kind_of(a)) + " with " + kind_name(kind_of(b)));
  return normalize(a) == normalize(b);
}

inline bool value_less(const FunctorValue& a, const FunctorValue& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  return std::visit(
      [&](const auto& ta) {
        using T = std::decay_t<decltype(ta)>;
        return ta < std::get<T>(b);
      },
      a);
}

struct ValueLess {
  bool operator()(const FunctorValue& a, const FunctorValue& b) const { return value_less(a, b); }
};

/// Limits for exhaustive enumeration of T X.
struct EnumerationBudget {
  std::size_t max_values = 1'000'000;
  std::uint64_t weight_cap = 2;       // multiset weights range over 0..weight_cap
  std::int64_t denominator = 2;       // distribution masses are k/denominator
  std::size_t max_nbhd_states = 5;
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

inline void enumerate_antichains(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<std::uint32_t> chosen;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t next) {
    if (next == total) {
      fn(chosen);
      return;
    }
    rec(next + 1);
    bool comparable = std::any_of(chosen.begin(), chosen.end(), [&](std::uint32_t m) {
      return (m & next) == m || (m & next) == next;
    });
    if (!comparable) {
      chosen.push_back(next);
      rec(next + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

}  // namespace detail

/// Calls fn on every value of T over `n_states` states within the budget.
/// Kripke and neighborhood enumerations cover all of T X; multiset weights
/// are capped and distribution masses live on a single denominator grid.
inline void enumerate_values(const FunctorKind& kind, std::size_t n_states, const EnumerationBudget& budget,
                             const std::function<void(const FunctorValue&)>& fn) {
  auto over_budget = [&](const std::string& what) {
    throw BudgetExceeded("enumerating " + what + " over " + std::to_string(n_states) + " states exceeds budget");
  };
  switch (kind.tag) {
    case Kind::Kripke: {
      const std::size_t v = kind.atoms.size();
      if (v + n_states >= 63 || (std::uint64_t{1} << (v + n_states)) > budget.max_values) over_budget("kripke values");
      for (std::uint64_t pm = 0; pm < (std::uint64_t{1} << v); ++pm) {
        std::vector<std::string> props;
        for (std::size_t i = 0; i < v; ++i)
          if (pm >> i & 1U) props.push_back(kind.atoms[i]);
        for (std::uint64_t sm = 0; sm < (std::uint64_t{1} << n_states); ++sm) {
          std::vector<State> succ;
          for (std::size_t i = 0; i < n_states; ++i)
            if (sm >> i & 1U) succ.push_back(static_cast<State>(i));
          fn(make_kripke(props, succ));
        }
      }
      return;
    }
    case Kind::Neighborhood: {
      if (n_states > budget.max_nbhd_states) over_budget("neighborhood values");
      detail::enumerate_antichains(n_states, [&](const std::vector<std::uint32_t>& masks) {
        std::vector<std::vector<State>> family;
        for (auto m : masks) {
          std::vector<State> set;
          for (std::size_t i = 0; i < n_states; ++i)
            if (m >> i & 1U) set.push_back(static_cast<State>(i));
          family.push_back(std::move(set));
        }
        fn(make_nbhd(std::move(family)));
      });
      return;
    }
    case Kind::Multiset: {
      if (detail::checked_pow(budget.weight_cap + 1, n_states, budget.max_values) > budget.max_values)
        over_budget("multisets");
      std::vector<std::uint64_t> w(n_states, 0);
      while (true) {
        std::vector<std::pair<State, Weight>> entries;
        for (std::size_t i = 0; i < n_states; ++i) entries.emplace_back(static_cast<State>(i), Weight{w[i], false});
        fn(make_multiset(entries));
        std::size_t i = 0;
        while (i < n_states && w[i] == budget.weight_cap) w[i++] = 0;
        if (i == n_states) return;
        ++w[i];
      }
    }
    case Kind::Distribution: {
      if (n_states == 0) return;
      const std::int64_t d = budget.denominator;
      if (d <= 0) throw ValidationError("distribution grid denominator must be positive");
      // compositions of d into n_states nonnegative parts: C(d+n-1, n-1)
      long double count = 1;
      for (std::size_t i = 1; i < n_states; ++i) count = count * static_cast<long double>(d + i) / static_cast<long double>(i);
      if (count > static_cast<long double>(budget.max_values)) over_budget("distributions");
      std::vector<std::int64_t> parts(n_states, 0);
      std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
        if (i + 1 == n_states) {
          parts[i] = left;
          std::vector<std::pair<State, Rational>> entries;
          for (std::size_t j = 0; j < n_states; ++j)
            if (parts[j] > 0) entries.emplace_back(static_cast<State>(j), Rational(parts[j], d));
          fn(make_dist(entries));
          return;
        }
        for (std::int64_t k = 0; k <= left; ++k) {
          parts[i] = k;
          rec(i + 1, left - k);
        }
      };
      rec(0, d);
      return;
    }
  }
}

inline std::vector<FunctorValue> all_values(const FunctorKind& kind, std::size_t n_states,
                                            const EnumerationBudget& budget = {}) {
  std::vector<FunctorValue> out;
  enumerate_values(kind, n_states, budget, [&](const FunctorValue& v) { out.push_back(v); });
  return out;
}

/// Human-readable rendering, naming states through `names`.
inline std::string describe(const FunctorValue& v, const std::vector<std::string>& names) {
  auto name = [&](State s) { return s < names.size() ? names[s] : "#" + std::to_string(s); };
  std::ostringstream os;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, KripkeValue>) {
          os << "{props:[";
          for (std::size_t i = 0; i < t.props.size(); ++i) os << (i ? "," : "") << t.props[i];
          os << "],succ:[";
          for (std::size_t i = 0; i < t.succ.size(); ++i) os << (i ? "," : "") << name(t.succ[i]);
          os << "]}";
        } else if constexpr (std::is_same_v<T, MultisetValue>) {
          os << "{";
          for (std::size_t i = 0; i < t.weights.size(); ++i)
            os << (i ? "," : "") << name(t.weights[i].first) << ":" << to_string(t.weights[i].second);
          os << "}";
        } else if constexpr (std::is_same_v<T, DistValue>) {
          os << "{";
          for (std::size_t i = 0; i < t.mass.size(); ++i)
            os << (i ? "," : "") << name(t.mass[i].first) << ":" << to_string(t.mass[i].second);
          os << "}";
        } else {
          os << "{minimals:[";
          for (std::size_t i = 0; i < t.minimals.size(); ++i) {
            os << (i ? "," : "") << "[";
            for (std::size_t j = 0; j < t.minimals[i].size(); ++j) os << (j ? "," : "") << name(t.minimals[i][j]);
            os << "]";
          }
          os << "]}";
        }
      },
      v);
  return os.str();
}

}  // namespace coalsim

#endif  // COALSIM_FUNCTOR_HPP
