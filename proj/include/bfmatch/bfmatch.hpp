// Umbrella header.
#pragma once

#include "bfmatch/bodefano.hpp"
#include "bfmatch/constants.hpp"
#include "bfmatch/ladder.hpp"
#include "bfmatch/network.hpp"
#include "bfmatch/optimizer.hpp"
#include "bfmatch/pipeline.hpp"
#include "bfmatch/polynomial.hpp"
#include "bfmatch/quadrature.hpp"
#include "bfmatch/rational.hpp"
#include "bfmatch/rational_fit.hpp"
#include "bfmatch/scenario.hpp"
#include "bfmatch/scenario_file.hpp"
#include "bfmatch/svg_plot.hpp"
#include "bfmatch/touchstone.hpp"
#include "bfmatch/transmission.hpp"
