#include "gsr/periodic_smooth.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gsr/errors.hpp"
#include "gsr/fft.hpp"

namespace gsr {
namespace {

// Border jumps: v(0, y) = u(M-1, y) - u(0, y), v(M-1, y) = -v(0, y), same across columns.
void boundary_jumps(std::span<const double> u, std::span<double> v, int m, int n) {
  std::fill(v.begin(), v.end(), 0.0);
  for (int y = 0; y < n; ++y) {
    const double d = u[(m - 1) * n + y] - u[y];
    v[y] += d;
    v[(m - 1) * n + y] -= d;
  }
  for (int x = 0; x < m; ++x) {
    const double d = u[x * n + n - 1] - u[x * n];
    v[x * n] += d;
    v[x * n + n - 1] -= d;
  }
}

}  // namespace

PeriodicSmoothPair periodic_smooth_decompose(const GridImage& u) {
  if (!all_finite(u)) throw DataError("periodic_smooth_decompose: non-finite input");
  const int m = u.height();
  const int n = u.width();
  PeriodicSmoothPair out{u, GridImage(m, n, u.channels())};

  std::vector<double> cos1(m), cos2(n);
  for (int i = 0; i < m; ++i) cos1[i] = 2.0 * std::cos(2.0 * std::numbers::pi * i / m);
  for (int j = 0; j < n; ++j) cos2[j] = 2.0 * std::cos(2.0 * std::numbers::pi * j / n);

  std::vector<double> v(u.plane_size());
  std::vector<Complex> spec(u.plane_size());
  for (int c = 0; c < u.channels(); ++c) {
    boundary_jumps(u.plane(c), v, m, n);
    fft::forward_real(v, spec, m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        auto& z = spec[static_cast<std::size_t>(i) * n + j];
        z = (i == 0 && j == 0) ? Complex{} : z / (cos1[i] + cos2[j] - 4.0);
      }
    }
    auto smooth = out.smooth.plane(c);
    fft::inverse_to_real(spec, smooth, m, n);
    auto periodic = out.periodic.plane(c);
    for (std::size_t i = 0; i < smooth.size(); ++i) periodic[i] -= smooth[i];
  }
  return out;
}

}  // namespace gsr
