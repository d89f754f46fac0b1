#pragma once

#include <vector>

#include "gsr/grid.hpp"

namespace gsr {

/// Zoom-out operator A = S C: periodic separable antialiasing convolution C
/// followed by stride-r subsampling S.
///
/// Output pixel x reads the input around position r x + (r - 1) / 2:
///   (A u)(x) = sum_{j1, j2} tap(j1) tap(j2) u(r x1 + j1, r x2 + j2).
/// The convolution kernel of C is therefore c(x) = tap(-x1) tap(-x2).
struct DegradeOperator {
  int r = 1;
  std::vector<int> offsets;  // integer tap positions j, ascending
  std::vector<double> taps;  // weights, summing to 1

  int support() const { return static_cast<int>(taps.size()); }
};

/// Keys cubic (a = -0.5) evaluated at s.
double keys_cubic(double s);

/// Antialiased bicubic taps: tap(j) = k((j - d) / r) / r for |j - d| < 2r,
/// d = (r - 1) / 2, renormalized to sum 1. Exact-zero taps are dropped.
DegradeOperator build_downscale_kernel(int r);

/// The 2-D kernel c embedded on the M x N torus (taps wrap if 4r > M or N).
GridImage embedded_kernel(const DegradeOperator& op, int height, int width);

/// A u, channel by channel. Throws NotDivisible unless r divides M and N.
GridImage apply_degrade(const DegradeOperator& op, const GridImage& u);

/// A^T y = C^T S^T y for an HR size (height, width).
GridImage apply_degrade_adjoint(const DegradeOperator& op, const GridImage& y, int height,
                                int width);

}  // namespace gsr
