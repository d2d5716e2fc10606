#ifndef PLASTICITY_PLASTICITY_HPP
#define PLASTICITY_PLASTICITY_HPP

#include "plasticity/closedforms.hpp"
#include "plasticity/config.hpp"
#include "plasticity/correlate.hpp"
#include "plasticity/errata.hpp"
#include "plasticity/errors.hpp"
#include "plasticity/inequalities.hpp"
#include "plasticity/linalg.hpp"
#include "plasticity/rotation.hpp"
#include "plasticity/spin.hpp"
#include "plasticity/states.hpp"
#include "plasticity/verify.hpp"

#endif  // PLASTICITY_PLASTICITY_HPP
