#pragma once

#include "phiproj/error.hpp"
#include "phiproj/extended_real.hpp"
#include "phiproj/measure.hpp"
#include "phiproj/divergence.hpp"
#include "phiproj/linalg.hpp"
#include "phiproj/model.hpp"
#include "phiproj/objective.hpp"
#include "phiproj/rng.hpp"
#include "phiproj/projection.hpp"
#include "phiproj/ipfp.hpp"
#include "phiproj/asymptotics.hpp"
#include "phiproj/montecarlo.hpp"
#include "phiproj/diagnostics.hpp"
