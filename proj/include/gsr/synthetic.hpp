#pragma once

#include <cstdint>

#include "gsr/grid.hpp"

namespace gsr {

/// Stationary Gaussian test texture: white noise blurred by a random anisotropic
/// Gaussian spot of width ~spot pixels, rescaled to standard deviation 40 around 128.
/// A weak white-noise floor is added; channels mix it in different amounts.
GridImage synthetic_texture(int height, int width, int channels, std::uint64_t seed,
                            double spot = 2.0);

}  // namespace gsr
