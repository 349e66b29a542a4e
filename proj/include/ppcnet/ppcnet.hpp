#pragma once

// Umbrella header: the whole library.

#include "ppcnet/core.hpp"
#include "ppcnet/geometry.hpp"
#include "ppcnet/environment.hpp"
#include "ppcnet/expert.hpp"
#include "ppcnet/informed_rrtstar.hpp"
#include "ppcnet/postprocess.hpp"
#include "ppcnet/kdtree.hpp"
#include "ppcnet/dataset.hpp"
#include "ppcnet/mlp.hpp"
#include "ppcnet/inference.hpp"
#include "ppcnet/training.hpp"
#include "ppcnet/presets.hpp"
#include "ppcnet/benchmark.hpp"
