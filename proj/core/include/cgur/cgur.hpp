#pragma once

#include "cgur/coarse_grain.hpp"
#include "cgur/entanglement.hpp"
#include "cgur/entropy.hpp"
#include "cgur/mub.hpp"
#include "cgur/report.hpp"
#include "cgur/sampling.hpp"
#include "cgur/special_fn.hpp"
#include "cgur/states.hpp"
#include "cgur/ur_bounds.hpp"
