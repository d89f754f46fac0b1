#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "gsr/grid.hpp"

namespace gsr {

/// Centered, sqrt(MN)-normalized kernel t = (U - m) / sqrt(MN) of an ADSN model.
struct Texton {
  GridImage kernel;
  std::vector<double> source_mean;  // m, per channel
};

Texton compute_texton(const GridImage& u);

/// gamma = t * flip(t) per channel.
GridImage adsn_covariance_kernel(const Texton& t);

/// X_c = t_c * w for every channel c, with one shared single-channel noise field w.
GridImage adsn_sample(const Texton& t, const GridImage& w);

/// Name of the normal generator used by draw_standard_noise, recorded in run manifests.
inline constexpr std::string_view kNoiseGeneratorName = "mt19937_64+box-muller-pairs";

/// I.i.d. N(0,1) field. The seed feeds std::mt19937_64 (fully specified by the
/// standard); each pair of 64-bit draws becomes two normals through the
/// Box-Muller transform with u1 = (a >> 11 + 1) 2^-53, u2 = (b >> 11) 2^-53.
/// Values are filled row-major.
GridImage draw_standard_noise(int height, int width, std::uint64_t seed);

}  // namespace gsr
