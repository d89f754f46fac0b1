#pragma once

#include <vector>

#include "gsr/grid.hpp"

namespace gsr {

struct MetricReport {
  double psnr_db = 0.0;  // +infinity for identical images
  double ssim = 1.0;
  std::vector<double> psnr_per_channel;
  std::vector<double> ssim_per_channel;
};

/// 10 log10(peak^2 / MSE) with the MSE pooled over all channels.
double psnr(const GridImage& a, const GridImage& b, double peak = 255.0);

/// Single-scale SSIM with an 11x11 Gaussian window (sigma 1.5), C1 = (0.01 peak)^2,
/// C2 = (0.03 peak)^2. Windows wrap around the torus, so every pixel contributes
/// one window; the map mean is averaged over channels. Needs min(M, N) >= 11.
double ssim(const GridImage& a, const GridImage& b, double peak = 255.0);

MetricReport compare_images(const GridImage& a, const GridImage& b, double peak = 255.0);

}  // namespace gsr
