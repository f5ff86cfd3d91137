#ifndef COALSIM_RELATION_HPP
#define COALSIM_RELATION_HPP

#include <utility>
#include <vector>

#include "coalsim/core.hpp"
#include "coalsim/functor.hpp"

namespace coalsim {

/// Finite relation S ⊆ X × Y, stored as one row bitset per left state.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t left_size, std::size_t right_size)
      : right_size_(right_size), rows_(left_size, StateSet(right_size)) {}

  static Relation full(std::size_t left_size, std::size_t right_size) {
    Relation r(left_size, right_size);
    for (auto& row : r.rows_) row.set();
    return r;
  }
  static Relation identity(std::size_t n) {
    Relation r(n, n);
    for (std::size_t i = 0; i < n; ++i) r.rows_[i].set(i);
    return r;
  }
  /// Graph {(x, f(x))} of a total map.
  static Relation graph(const std::vector<State>& f, std::size_t right_size) {
    Relation r(f.size(), right_size);
    for (std::size_t x = 0; x < f.size(); ++x) {
      if (f[x] >= right_size) throw ValidationError("map undefined on state " + std::to_string(x));
      r.rows_[x].set(f[x]);
    }
    return r;
  }
  static Relation from_pairs(std::size_t left_size, std::size_t right_size,
                             const std::vector<std::pair<State, State>>& pairs) {
    Relation r(left_size, right_size);
    for (auto [x, y] : pairs) r.insert(x, y);
    return r;
  }

  std::size_t left_size() const { return rows_.size(); }
  std::size_t right_size() const { return right_size_; }

  bool contains(State x, State y) const { return rows_[x].test(y); }
  void insert(State x, State y) {
    if (x >= left_size() || y >= right_size()) throw ValidationError("pair outside carriers");
    rows_[x].set(y);
  }
  void erase(State x, State y) { rows_[x].reset(y); }
  const StateSet& row(State x) const { return rows_[x]; }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.count();
    return n;
  }
  bool empty() const { return size() == 0; }

  /// Pairs in lexicographic order.
  std::vector<std::pair<State, State>> pairs() const {
    std::vector<std::pair<State, State>> out;
    for (State x = 0; x < left_size(); ++x)
      for (auto y = rows_[x].find_first(); y != StateSet::npos; y = rows_[x].find_next(y))
        out.emplace_back(x, static_cast<State>(y));
    return out;
  }

  /// S[A] = {y | ∃x ∈ A. xSy}.
  StateSet image(const StateSet& a) const {
    StateSet out(right_size_);
    for (auto x = a.find_first(); x != StateSet::npos; x = a.find_next(x))
      if (x < rows_.size()) out |= rows_[x];
    return out;
  }
  StateSet preimage(const StateSet& b) const {
    StateSet out(left_size());
    for (State x = 0; x < left_size(); ++x)
      if (rows_[x].intersects(b)) out.set(x);
    return out;
  }

  Relation converse() const {
    Relation r(right_size_, left_size());
    for (auto [x, y] : pairs()) r.rows_[y].set(x);
    return r;
  }

  /// this ; other, i.e. {(x,z) | ∃y. x this y, y other z}.
  Relation compose(const Relation& other) const {
    if (right_size_ != other.left_size()) throw ValidationError("composing relations over different carriers");
    Relation r(left_size(), other.right_size());
    for (State x = 0; x < left_size(); ++x) r.rows_[x] = other.image(rows_[x]);
    return r;
  }

  Relation& operator|=(const Relation& o) {
    check_shape(o);
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] |= o.rows_[i];
    return *this;
  }
  Relation& operator&=(const Relation& o) {
    check_shape(o);
    for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] &= o.rows_[i];
    return *this;
  }
  friend Relation operator|(Relation a, const Relation& b) { return a |= b; }
  friend Relation operator&(Relation a, const Relation& b) { return a &= b; }

  bool is_subset_of(const Relation& o) const {
    check_shape(o);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!rows_[i].is_subset_of(o.rows_[i])) return false;
    return true;
  }

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.right_size_ == b.right_size_ && a.rows_ == b.rows_;
  }

 private:
  void check_shape(const Relation& o) const {
    if (o.left_size() != left_size() || o.right_size() != right_size())
      throw ValidationError("relations over different carriers");
  }

  std::size_t right_size_ = 0;
  std::vector<StateSet> rows_;
};

/// xSy, zSy, zSw imply xSw.
inline bool is_difunctional(const Relation& s) {
  const Relation back = s.compose(s.converse()).compose(s);
  return back.is_subset_of(s);
}

/// Least difunctional relation containing S: iterate R := R ∪ R∘R⁻¹∘R.
inline Relation difunctional_closure(const Relation& s) {
  Relation r = s;
  while (true) {
    Relation next = r | r.compose(r.converse()).compose(r);
    if (next == r) return r;
    r = std::move(next);
  }
}

}  // namespace coalsim

#endif  // COALSIM_RELATION_HPP
