#include "gsr/adsn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gsr/errors.hpp"
#include "gsr/fft.hpp"

namespace gsr {

Texton compute_texton(const GridImage& u) {
  if (!all_finite(u)) throw DataError("compute_texton: non-finite input");
  Texton t{u, std::vector<double>(u.channels())};
  const double scale = 1.0 / std::sqrt(static_cast<double>(u.plane_size()));
  for (int c = 0; c < u.channels(); ++c) {
    auto plane = t.kernel.plane(c);
    const double m = mean(plane);
    t.source_mean[c] = m;
    double spread = 0.0;
    for (auto& v : plane) {
      v -= m;
      spread = std::max(spread, std::abs(v));
    }
    // Rounding residue of a constant channel is not texture.
    if (spread <= 1e-12 * std::max(1.0, std::abs(m))) spread = 0.0;
    for (auto& v : plane) v = spread == 0.0 ? 0.0 : v * scale;
  }
  return t;
}

GridImage adsn_covariance_kernel(const Texton& t) {
  return conv2_periodic(t.kernel, flip(t.kernel));
}

GridImage adsn_sample(const Texton& t, const GridImage& w) {
  if (w.channels() != 1 || w.height() != t.kernel.height() || w.width() != t.kernel.width()) {
    throw SizeMismatch("adsn_sample: noise must be a single-channel field of the texton size");
  }
  return conv2_periodic(t.kernel, w);
}

GridImage draw_standard_noise(int height, int width, std::uint64_t seed) {
  GridImage out(height, width);
  std::mt19937_64 engine(seed);
  constexpr double kScale = 0x1.0p-53;
  auto& v = out.values();
  for (std::size_t i = 0; i < v.size(); i += 2) {
    const double u1 = static_cast<double>((engine() >> 11) + 1) * kScale;
    const double u2 = static_cast<double>(engine() >> 11) * kScale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    v[i] = radius * std::cos(angle);
    if (i + 1 < v.size()) v[i + 1] = radius * std::sin(angle);
  }
  return out;
}

}  // namespace gsr
