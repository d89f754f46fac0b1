#include "gsr/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "gsr/errors.hpp"

namespace gsr {
namespace {

constexpr int kRadius = 5;
constexpr double kSigma = 1.5;

void require_same(const GridImage& a, const GridImage& b) {
  if (a.height() != b.height() || a.width() != b.width()) throw SizeMismatch("metrics: images differ in size");
  if (a.channels() != b.channels()) throw ChannelMismatch("metrics: images differ in channel count");
}

std::array<double, 2 * kRadius + 1> gaussian_window() {
  std::array<double, 2 * kRadius + 1> w{};
  double total = 0.0;
  for (int i = -kRadius; i <= kRadius; ++i) {
    w[i + kRadius] = std::exp(-(i * i) / (2.0 * kSigma * kSigma));
    total += w[i + kRadius];
  }
  for (auto& v : w) v /= total;
  return w;
}

// Separable periodic Gaussian average of one plane.
std::vector<double> blur(std::span<const double> in, int m, int n) {
  static const auto w = gaussian_window();
  std::vector<double> tmp(in.size());
  std::vector<double> out(in.size());
  for (int x1 = 0; x1 < m; ++x1)
    for (int x2 = 0; x2 < n; ++x2) {
      double acc = 0.0;
      for (int d = -kRadius; d <= kRadius; ++d)
        acc += w[d + kRadius] * in[static_cast<std::size_t>(x1) * n + GridImage::wrap(x2 + d, n)];
      tmp[static_cast<std::size_t>(x1) * n + x2] = acc;
    }
  for (int x1 = 0; x1 < m; ++x1)
    for (int x2 = 0; x2 < n; ++x2) {
      double acc = 0.0;
      for (int d = -kRadius; d <= kRadius; ++d)
        acc += w[d + kRadius] * tmp[static_cast<std::size_t>(GridImage::wrap(x1 + d, m)) * n + x2];
      out[static_cast<std::size_t>(x1) * n + x2] = acc;
    }
  return out;
}

double channel_mse(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

double to_psnr(double mse, double peak) {
  return mse == 0.0 ? std::numeric_limits<double>::infinity() : 10.0 * std::log10(peak * peak / mse);
}

double channel_ssim(std::span<const double> a, std::span<const double> b, int m, int n, double peak) {
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = blur(a, m, n);
  const auto mu_b = blur(b, m, n);
  const auto e_aa = blur(aa, m, n);
  const auto e_bb = blur(bb, m, n);
  const auto e_ab = blur(ab, m, n);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    acc += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return acc / static_cast<double>(a.size());
}

}  // namespace

double psnr(const GridImage& a, const GridImage& b, double peak) {
  require_same(a, b);
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) total += channel_mse(a.plane(c), b.plane(c));
  return to_psnr(total / a.channels(), peak);
}

double ssim(const GridImage& a, const GridImage& b, double peak) {
  require_same(a, b);
  if (std::min(a.height(), a.width()) < 2 * kRadius + 1) {
    throw TooSmall("ssim needs images of at least 11x11");
  }
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c)
    total += channel_ssim(a.plane(c), b.plane(c), a.height(), a.width(), peak);
  return total / a.channels();
}

MetricReport compare_images(const GridImage& a, const GridImage& b, double peak) {
  MetricReport report;
  report.psnr_db = psnr(a, b, peak);
  report.ssim = ssim(a, b, peak);
  for (int c = 0; c < a.channels(); ++c) {
    report.psnr_per_channel.push_back(to_psnr(channel_mse(a.plane(c), b.plane(c)), peak));
    report.ssim_per_channel.push_back(channel_ssim(a.plane(c), b.plane(c), a.height(), a.width(), peak));
  }
  return report;
}

}  // namespace gsr
