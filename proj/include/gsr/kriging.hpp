#pragma once

#include <cstdint>
#include <vector>

#include "gsr/adsn.hpp"
#include "gsr/degrade.hpp"
#include "gsr/grid.hpp"

namespace gsr {

inline constexpr double kDefaultTolRel = 1e-10;

/// HR kernels of Step 1, per channel: gamma = per(t) * flip(per(t)),
/// c * gamma, and the LR kernel kappa = S(c * gamma * flip(c)) of A Gamma A^T.
struct KrigingPrecomputation {
  GridImage gamma;
  GridImage c_gamma;
  GridImage kappa;
  int r = 1;
};

/// The r^2 spectral kernels lambda^(k, l) of the kriging matrix.
///
/// Column (k, l) of Lambda solves kappa * lambda(k, l) = S((c * gamma)(. - (k, l)));
/// Lambda^T y restricted to the subgrid (k, l) is the correlation of lambda(k, l)
/// with y. Frequencies where |kappa^| <= tol_rel * max|kappa^| are pseudo-inverted
/// to zero (minimum-norm solution).
struct KrigingKernels {
  int r = 1;
  int hr_height = 0;
  int hr_width = 0;
  double tol_rel = kDefaultTolRel;
  std::vector<SpectralImage> lambda_hat;  // index k * r + l, each LR-sized with all channels
  std::vector<std::uint8_t> zero_mask;    // channel-major LR planes, 1 where kappa^ was zeroed
  SpectralImage kappa_hat;
  // Largest |b^| / max|b^| seen on a masked frequency; near zero in exact arithmetic.
  double max_masked_rhs_ratio = 0.0;

  int channels() const { return kappa_hat.channels(); }
  int lr_height() const { return kappa_hat.height(); }
  int lr_width() const { return kappa_hat.width(); }
  const SpectralImage& lambda(int k, int l) const { return lambda_hat[k * r + l]; }
  bool masked(int c, int i, int j) const {
    return zero_mask[(static_cast<std::size_t>(c) * lr_height() + i) * lr_width() + j] != 0;
  }
};

/// Kernel used to build the covariance: the periodic component of the texton.
GridImage covariance_texton(const Texton& t);

KrigingPrecomputation precompute_kernels(const Texton& t, const DegradeOperator& op);

/// Throws DegenerateModel if kappa^ vanishes identically on some channel.
KrigingKernels solve_kriging_kernels(const KrigingPrecomputation& pre, const DegradeOperator& op,
                                     double tol_rel = kDefaultTolRel);

/// Lambda^T y: HR image whose subgrid (k, l) is idft2(y^ . conj(lambda^(k, l))).
GridImage apply_kriging(const KrigingKernels& kk, const GridImage& y);

}  // namespace gsr
