#pragma once

#include "chball/ball_model.hpp"
#include "chball/bump.hpp"
#include "chball/derivatives.hpp"
#include "chball/hypergeometric.hpp"
#include "chball/lattice.hpp"
#include "chball/quadrature.hpp"
#include "chball/serialization.hpp"
#include "chball/spectral.hpp"
#include "chball/verify.hpp"
#include "chball/wave.hpp"
