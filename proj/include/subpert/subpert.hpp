#pragma once

#include "subpert/core.hpp"
#include "subpert/experiments.hpp"
#include "subpert/graph_laplacian.hpp"
#include "subpert/io.hpp"
#include "subpert/perturbation_bounds.hpp"
#include "subpert/random.hpp"
#include "subpert/set_geometry.hpp"
#include "subpert/spectral_core.hpp"
#include "subpert/subspace_metric.hpp"
