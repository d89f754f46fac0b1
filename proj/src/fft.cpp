#include "gsr/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "gsr/errors.hpp"

namespace gsr {
namespace fft {
namespace {

// The FFTW planner is not thread-safe; fftw_execute_dft is. Plans are created
// in-place and unaligned so they apply to any std::complex buffer of the shape.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int height, int width, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(height, width, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> scratch(static_cast<std::size_t>(height) * width);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan =
        fftw_plan_dft_2d(height, width, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericalError("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<Complex> plane, int height, int width, int sign) {
  if (plane.size() != static_cast<std::size_t>(height) * width) {
    throw SizeMismatch("fft: plane size does not match shape");
  }
  auto* buf = reinterpret_cast<fftw_complex*>(plane.data());
  fftw_execute_dft(cache().get(height, width, sign), buf, buf);
}

}  // namespace

void forward(std::span<Complex> plane, int height, int width) {
  execute(plane, height, width, FFTW_FORWARD);
}

void inverse_unnormalized(std::span<Complex> plane, int height, int width) {
  execute(plane, height, width, FFTW_BACKWARD);
}

void forward_real(std::span<const double> in, std::span<Complex> out, int height, int width) {
  std::transform(in.begin(), in.end(), out.begin(), [](double v) { return Complex(v, 0.0); });
  forward(out, height, width);
}

double inverse_to_real(std::span<Complex> work, std::span<double> out, int height, int width) {
  inverse_unnormalized(work, height, width);
  const double scale = 1.0 / (static_cast<double>(height) * width);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    out[i] = work[i].real() * scale;
    max_imag = std::max(max_imag, std::abs(work[i].imag()) * scale);
  }
  return max_imag;
}

void inverse_checked(std::span<Complex> work, std::span<double> out, int height, int width) {
  double l1 = 0.0;
  for (const auto& z : work) l1 += std::abs(z);
  const double max_imag = inverse_to_real(work, out, height, width);
  if (max_imag > 1e-8 * l1 / (static_cast<double>(height) * width)) {
    throw NonHermitianSpectrum("inverse DFT: imaginary residual " + std::to_string(max_imag) +
                               " exceeds tolerance; spectrum is not Hermitian");
  }
}

}  // namespace fft

SpectralImage dft2(const GridImage& img) {
  SpectralImage out(img.height(), img.width(), img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    fft::forward_real(img.plane(c), out.plane(c), img.height(), img.width());
  }
  return out;
}

GridImage idft2(const SpectralImage& spec) {
  GridImage out(spec.height(), spec.width(), spec.channels());
  std::vector<Complex> work(spec.plane_size());
  for (int c = 0; c < spec.channels(); ++c) {
    auto src = spec.plane(c);
    std::copy(src.begin(), src.end(), work.begin());
    fft::inverse_checked(work, out.plane(c), spec.height(), spec.width());
  }
  return out;
}

GridImage conv2_periodic(const GridImage& x, const GridImage& y) {
  if (x.height() != y.height() || x.width() != y.width()) {
    throw SizeMismatch("conv2_periodic: operands must share M x N");
  }
  if (y.channels() != 1 && y.channels() != x.channels()) {
    throw SizeMismatch("conv2_periodic: channel count mismatch");
  }
  const int m = x.height();
  const int n = x.width();
  GridImage out(m, n, x.channels());
  std::vector<Complex> xs(x.plane_size());
  std::vector<Complex> ys(x.plane_size());
  for (int c = 0; c < x.channels(); ++c) {
    fft::forward_real(x.plane(c), xs, m, n);
    if (c == 0 || y.channels() > 1) fft::forward_real(y.plane(y.channels() > 1 ? c : 0), ys, m, n);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] *= ys[i];
    fft::inverse_to_real(xs, out.plane(c), m, n);
  }
  return out;
}

GridImage corr2_periodic(const GridImage& x, const GridImage& y) {
  return conv2_periodic(flip(x), y);
}

}  // namespace gsr
