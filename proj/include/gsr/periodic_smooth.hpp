#pragma once

#include "gsr/grid.hpp"

namespace gsr {

struct PeriodicSmoothPair {
  GridImage periodic;
  GridImage smooth;
};

/// Moisan's periodic plus smooth decomposition u = p + s, channel-wise.
/// The smooth part solves a periodic Poisson problem driven by the jumps
/// between opposite borders and has zero mean; p satisfies
/// laplacian_periodic(p) = laplacian_free(u).
PeriodicSmoothPair periodic_smooth_decompose(const GridImage& u);

}  // namespace gsr
