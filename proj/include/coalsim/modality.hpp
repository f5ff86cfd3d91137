#ifndef COALSIM_MODALITY_HPP
#define COALSIM_MODALITY_HPP

#include <compare>
#include <string>
#include <tuple>

#include "coalsim/core.hpp"
#include "coalsim/functor.hpp"

namespace coalsim {

/// A modal operator. All operators are unary except atoms, which are
/// nullary and read the proposition component of a Kripke value.
struct Modality {
  enum class Op { Box, Diamond, DiamondK, AtLeast, MoreThan, NbhdBox, Atom };

  Op op = Op::Box;
  std::uint64_t k = 0;     // DiamondK index
  Rational p = 0;          // AtLeast / MoreThan threshold, in [0,1]
  std::string atom;        // Atom name

  static Modality box() { return {Op::Box, 0, 0, {}}; }
  static Modality diamond() { return {Op::Diamond, 0, 0, {}}; }
  static Modality nbhd_box() { return {Op::NbhdBox, 0, 0, {}}; }
  static Modality graded(std::uint64_t k) { return {Op::DiamondK, k, 0, {}}; }
  static Modality at_least(Rational p) { return {Op::AtLeast, 0, check_probability(p), {}}; }
  static Modality more_than(Rational p) { return {Op::MoreThan, 0, check_probability(p), {}}; }
  static Modality prop(std::string name) { return {Op::Atom, 0, 0, std::move(name)}; }

  bool nullary() const { return op == Op::Atom; }

  /// The functor family this operator is interpreted over.
  Kind kind() const {
    switch (op) {
      case Op::Box:
      case Op::Diamond:
      case Op::Atom: return Kind::Kripke;
      case Op::DiamondK: return Kind::Multiset;
      case Op::AtLeast:
      case Op::MoreThan: return Kind::Distribution;
      case Op::NbhdBox: return Kind::Neighborhood;
    }
    return Kind::Kripke;
  }

  friend bool operator==(const Modality& a, const Modality& b) {
    return a.op == b.op && a.k == b.k && a.p == b.p && a.atom == b.atom;
  }
  friend bool operator<(const Modality& a, const Modality& b) {
    if (a.op != b.op) return a.op < b.op;
    if (a.k != b.k) return a.k < b.k;
    if (a.p != b.p) return a.p < b.p;
    return a.atom < b.atom;
  }

 private:
  static Rational check_probability(Rational p) {
    if (p < Rational(0) || p > Rational(1)) throw ValidationError("probability threshold " + to_string(p) + " outside [0,1]");
    return p;
  }
};

/// Concrete syntax of the operator, as accepted by the formula parser.
inline std::string to_string(const Modality& m) {
  switch (m.op) {
    case Modality::Op::Box: return "[]";
    case Modality::Op::Diamond: return "<>";
    case Modality::Op::DiamondK: return "<" + std::to_string(m.k) + ">";
    case Modality::Op::AtLeast: return "L(" + to_string(m.p) + ")";
    case Modality::Op::MoreThan: return "M(" + to_string(m.p) + ")";
    case Modality::Op::NbhdBox: return "[m]";
    case Modality::Op::Atom: return m.atom;
  }
  return "?";
}

}  // namespace coalsim

#endif  // COALSIM_MODALITY_HPP
