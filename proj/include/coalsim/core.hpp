#ifndef COALSIM_CORE_HPP
#define COALSIM_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <boost/rational.hpp>

namespace coalsim {

/// Index of a state inside some carrier. Carriers are ordered, so indices
/// double as the deterministic iteration order.
using State = std::uint32_t;

/// Predicate over a carrier, one bit per state.
using StateSet = boost::dynamic_bitset<>;

using Rational = boost::rational<std::int64_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model, relation or value violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Modality applied to a value of the wrong functor kind, or similar.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed its configured bound.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Raised when two independent computations that must agree do not.
class InternalCheckFailure : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "n/d" or "n". Throws ValidationError on malformed input.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty() || s.size() > 18) throw ValidationError("malformed rational '" + std::string(text) + "'");
    std::int64_t v = 0;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-') {
      neg = true;
      i = 1;
      if (s.size() == 1) throw ValidationError("malformed rational '" + std::string(text) + "'");
    }
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw ValidationError("malformed rational '" + std::string(text) + "'");
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

/// Multiset weight in N ∪ {∞}. Addition saturates at ∞.
struct Weight {
  std::uint64_t count = 0;
  bool infinite = false;

  static constexpr Weight inf() { return Weight{0, true}; }

  friend constexpr Weight operator+(Weight a, Weight b) {
    if (a.infinite || b.infinite) return inf();
    return Weight{a.count + b.count, false};
  }
  Weight& operator+=(Weight other) { return *this = *this + other; }

  friend constexpr bool operator==(Weight a, Weight b) {
    return a.infinite == b.infinite && (a.infinite || a.count == b.count);
  }
  friend constexpr bool operator<(Weight a, Weight b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.count < b.count;
  }
  /// b(A) > k for a natural k.
  constexpr bool exceeds(std::uint64_t k) const { return infinite || count > k; }
  constexpr bool is_zero() const { return !infinite && count == 0; }
};

inline std::string to_string(Weight w) { return w.infinite ? "inf" : std::to_string(w.count); }

/// Set of the given states, sized for a carrier of `size` states.
inline StateSet make_set(std::size_t size, const std::vector<State>& members) {
  StateSet s(size);
  for (State m : members) s.set(m);
  return s;
}

inline std::vector<State> members(const StateSet& s) {
  std::vector<State> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != StateSet::npos; i = s.find_next(i)) out.push_back(static_cast<State>(i));
  return out;
}

/// Upper bound on the size of a base that may be exhaustively enumerated.
/// Overridable through COALSIM_MAX_BASE.
inline std::size_t max_exhaustive_base() {
  static const std::size_t bound = [] {
    if (const char* env = std::getenv("COALSIM_MAX_BASE")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v > 0 && v < 31) return static_cast<std::size_t>(v);
    }
    return std::size_t{16};
  }();
  return bound;
}

/// Calls fn(A) for every subset A of `universe`, in increasing mask order
/// over the sorted universe. Each A is a StateSet of the given carrier size.
template <typename Fn>
void for_each_subset(const std::vector<State>& universe, std::size_t carrier_size, Fn&& fn) {
  const std::size_t k = universe.size();
  if (k > max_exhaustive_base())
    throw BudgetExceeded("base of " + std::to_string(k) + " states exceeds exhaustive bound " +
                         std::to_string(max_exhaustive_base()));
  StateSet a(carrier_size);
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    a.reset();
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1U) a.set(universe[i]);
    if constexpr (std::is_same_v<decltype(fn(a)), bool>) {
      if (!fn(a)) return;
    } else {
      fn(a);
    }
  }
}

}  // namespace coalsim

#endif  // COALSIM_CORE_HPP
