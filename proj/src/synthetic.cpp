#include "gsr/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gsr/adsn.hpp"
#include "gsr/fft.hpp"

namespace gsr {

GridImage synthetic_texture(int height, int width, int channels, std::uint64_t seed, double spot) {
  std::mt19937_64 engine(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double angle = std::numbers::pi * unit(engine);
  const double s1 = spot * (0.5 + unit(engine));
  const double s2 = spot * (0.5 + unit(engine));
  const double ca = std::cos(angle);
  const double sa = std::sin(angle);

  GridImage blob(height, width);
  for (int x1 = 0; x1 < height; ++x1) {
    for (int x2 = 0; x2 < width; ++x2) {
      const double d1 = x1 <= height / 2 ? x1 : x1 - height;
      const double d2 = x2 <= width / 2 ? x2 : x2 - width;
      const double u = ca * d1 + sa * d2;
      const double v = -sa * d1 + ca * d2;
      blob(x1, x2) = std::exp(-0.5 * (u * u / (s1 * s1) + v * v / (s2 * s2)));
    }
  }
  const GridImage field = conv2_periodic(blob, draw_standard_noise(height, width, seed));
  const GridImage detail = draw_standard_noise(height, width, seed + 0x5bd1e995ULL);

  double field_rms = std::sqrt(squared_norm(field) / field.size());
  GridImage out(height, width, channels);
  for (int c = 0; c < channels; ++c) {
    // White floor keeps the spectrum away from zero, as in photographed textures.
    const double mix = (0.1 + 0.15 * c) * field_rms;
    auto plane = out.plane(c);
    for (std::size_t i = 0; i < plane.size(); ++i)
      plane[i] = field.values()[i] + mix * detail.values()[i];
    const double m = mean(plane);
    double var = 0.0;
    for (double v : plane) var += (v - m) * (v - m);
    const double scale = 40.0 / std::sqrt(var / plane.size() + 1e-300);
    for (auto& v : plane) v = 128.0 + (v - m) * scale;
  }
  return out;
}

}  // namespace gsr
