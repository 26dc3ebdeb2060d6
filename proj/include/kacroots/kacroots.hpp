#pragma once

#include "kacroots/errors.hpp"
#include "kacroots/poly.hpp"
#include "kacroots/rootcount.hpp"
#include "kacroots/special.hpp"
#include "kacroots/quadrature.hpp"
#include "kacroots/kac_analytic.hpp"
#include "kacroots/universal.hpp"
#include "kacroots/rng.hpp"
#include "kacroots/montecarlo.hpp"
#include "kacroots/parametric.hpp"
