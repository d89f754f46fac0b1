#include "gsr/degrade.hpp"

#include <cmath>
#include <numeric>

#include "gsr/errors.hpp"

namespace gsr {

double keys_cubic(double s) {
  const double a = std::abs(s);
  if (a <= 1.0) return (1.5 * a - 2.5) * a * a + 1.0;
  if (a < 2.0) return ((-0.5 * a + 2.5) * a - 4.0) * a + 2.0;
  return 0.0;
}

DegradeOperator build_downscale_kernel(int r) {
  if (r < 1) throw InvalidFactor("zoom factor must be >= 1");
  DegradeOperator op;
  op.r = r;
  const double center = (r - 1) / 2.0;
  const int lo = static_cast<int>(std::floor(center - 2.0 * r));
  const int hi = static_cast<int>(std::ceil(center + 2.0 * r));
  for (int j = lo; j <= hi; ++j) {
    if (std::abs(j - center) >= 2.0 * r) continue;
    const double w = keys_cubic((j - center) / r) / r;
    if (w == 0.0) continue;
    op.offsets.push_back(j);
    op.taps.push_back(w);
  }
  const double total = std::accumulate(op.taps.begin(), op.taps.end(), 0.0);
  for (auto& w : op.taps) w /= total;
  return op;
}

GridImage embedded_kernel(const DegradeOperator& op, int height, int width) {
  GridImage c(height, width);
  for (int a = 0; a < op.support(); ++a)
    for (int b = 0; b < op.support(); ++b)
      c(GridImage::wrap(-op.offsets[a], height), GridImage::wrap(-op.offsets[b], width)) +=
          op.taps[a] * op.taps[b];
  return c;
}

GridImage apply_degrade(const DegradeOperator& op, const GridImage& u) {
  require_divisible(u.height(), u.width(), op.r);
  const int m = u.height();
  const int n = u.width();
  const int lm = m / op.r;
  const int ln = n / op.r;
  const int support = op.support();
  GridImage out(lm, ln, u.channels());
  std::vector<double> rows(static_cast<std::size_t>(m) * ln);
  for (int c = 0; c < u.channels(); ++c) {
    for (int x1 = 0; x1 < m; ++x1) {
      for (int j = 0; j < ln; ++j) {
        double acc = 0.0;
        for (int t = 0; t < support; ++t)
          acc += op.taps[t] * u(x1, GridImage::wrap(static_cast<long>(j) * op.r + op.offsets[t], n), c);
        rows[static_cast<std::size_t>(x1) * ln + j] = acc;
      }
    }
    for (int i = 0; i < lm; ++i) {
      for (int t = 0; t < support; ++t) {
        const int src = GridImage::wrap(static_cast<long>(i) * op.r + op.offsets[t], m);
        const double w = op.taps[t];
        for (int j = 0; j < ln; ++j) out(i, j, c) += w * rows[static_cast<std::size_t>(src) * ln + j];
      }
    }
  }
  return out;
}

GridImage apply_degrade_adjoint(const DegradeOperator& op, const GridImage& y, int height,
                                int width) {
  require_divisible(height, width, op.r);
  const int lm = height / op.r;
  const int ln = width / op.r;
  if (y.height() != lm || y.width() != ln) {
    throw SizeMismatch("apply_degrade_adjoint: LR input must be (M/r)x(N/r)");
  }
  const int support = op.support();
  GridImage out(height, width, y.channels());
  std::vector<double> rows(static_cast<std::size_t>(height) * ln);
  for (int c = 0; c < y.channels(); ++c) {
    std::fill(rows.begin(), rows.end(), 0.0);
    for (int i = 0; i < lm; ++i) {
      for (int t = 0; t < support; ++t) {
        const int dst = GridImage::wrap(static_cast<long>(i) * op.r + op.offsets[t], height);
        const double w = op.taps[t];
        for (int j = 0; j < ln; ++j) rows[static_cast<std::size_t>(dst) * ln + j] += w * y(i, j, c);
      }
    }
    for (int x1 = 0; x1 < height; ++x1) {
      for (int j = 0; j < ln; ++j) {
        const double v = rows[static_cast<std::size_t>(x1) * ln + j];
        for (int t = 0; t < support; ++t)
          out(x1, GridImage::wrap(static_cast<long>(j) * op.r + op.offsets[t], width), c) +=
              op.taps[t] * v;
      }
    }
  }
  return out;
}

}  // namespace gsr
