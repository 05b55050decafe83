#pragma once

// Transfer matrices for regularized multi-delta potentials, their
// squeezing limits along power-parameterized descents, the resonance
// sets on which the limits stay transparent, and the resulting
// one-point-interaction classification.

#include "squeeze/classify.hpp"
#include "squeeze/entire.hpp"
#include "squeeze/errors.hpp"
#include "squeeze/extrapolation.hpp"
#include "squeeze/matrix2.hpp"
#include "squeeze/paths.hpp"
#include "squeeze/resonance.hpp"
#include "squeeze/scattering.hpp"
#include "squeeze/transfer.hpp"
#include "squeeze/util.hpp"
