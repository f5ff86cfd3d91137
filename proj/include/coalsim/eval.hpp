#ifndef COALSIM_EVAL_HPP
#define COALSIM_EVAL_HPP

#include "coalsim/formula.hpp"
#include "coalsim/functor.hpp"
#include "coalsim/lifting.hpp"

namespace coalsim {

/// ⟦f⟧: the set of states of c satisfying f.
inline StateSet extension(const Formula& f, const Coalgebra& c) {
  switch (f.tag()) {
    case Formula::Tag::Top: return c.full_set();
    case Formula::Tag::Bot: return c.empty_set();
    case Formula::Tag::Neg: return ~extension(f.child(), c);
    case Formula::Tag::And: return extension(f.left(), c) & extension(f.right(), c);
    case Formula::Tag::Or: return extension(f.left(), c) | extension(f.right(), c);
    case Formula::Tag::Modal: {
      const Modality& h = f.modality();
      if (h.kind() != c.kind().tag)
        throw KindMismatch("modality " + to_string(h) + " cannot be interpreted over a " + kind_name(c.kind().tag) +
                           " coalgebra");
      const StateSet arg = f.has_child() ? extension(f.child(), c) : c.empty_set();
      StateSet out = c.empty_set();
      for (State z = 0; z < c.size(); ++z)
        if (satisfies(c.at(z), h, arg)) out.set(z);
      return out;
    }
  }
  return c.empty_set();
}

inline bool eval(const Formula& f, const Coalgebra& c, State x) {
  if (x >= c.size()) throw ValidationError("state index " + std::to_string(x) + " outside carrier");
  return extension(f, c).test(x);
}

}  // namespace coalsim

#endif  // COALSIM_EVAL_HPP
