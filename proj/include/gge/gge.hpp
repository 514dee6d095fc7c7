#pragma once

// Umbrella header for the general graph encoder embedding library.

#include "gge/classifiers.hpp"
#include "gge/encoder.hpp"
#include "gge/evaluation.hpp"
#include "gge/graph.hpp"
#include "gge/io.hpp"
#include "gge/kernels.hpp"
#include "gge/matrix.hpp"
#include "gge/parallel.hpp"
#include "gge/random.hpp"
#include "gge/synth.hpp"
#include "gge/theory.hpp"

namespace gge {
inline constexpr std::string_view kVersion = "0.1.0";
}
