#pragma once

#include "fracwalk/ctrw.hpp"
#include "fracwalk/errors.hpp"
#include "fracwalk/fracdiff.hpp"
#include "fracwalk/laplace_inversion.hpp"
#include "fracwalk/laws.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/special_functions.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/validation.hpp"
#include "fracwalk/variates.hpp"

namespace fracwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracwalk
