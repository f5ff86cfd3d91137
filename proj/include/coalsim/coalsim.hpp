#ifndef COALSIM_COALSIM_HPP
#define COALSIM_COALSIM_HPP

#include "coalsim/core.hpp"
#include "coalsim/functor.hpp"
#include "coalsim/relation.hpp"
#include "coalsim/modality.hpp"
#include "coalsim/lifting.hpp"
#include "coalsim/formula.hpp"
#include "coalsim/eval.hpp"
#include "coalsim/simulation.hpp"
#include "coalsim/behavioural.hpp"
#include "coalsim/io.hpp"
#include "coalsim/random.hpp"
#include "coalsim/oracle.hpp"
#include "coalsim/properties.hpp"

#endif  // COALSIM_COALSIM_HPP
