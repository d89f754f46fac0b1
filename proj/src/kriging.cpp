#include "gsr/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsr/errors.hpp"
#include "gsr/fft.hpp"
#include "gsr/periodic_smooth.hpp"

namespace gsr {

GridImage covariance_texton(const Texton& t) { return periodic_smooth_decompose(t.kernel).periodic; }

KrigingPrecomputation precompute_kernels(const Texton& t, const DegradeOperator& op) {
  const int m = t.kernel.height();
  const int n = t.kernel.width();
  require_divisible(m, n, op.r);

  const GridImage per = covariance_texton(t);
  const SpectralImage c_hat = dft2(embedded_kernel(op, m, n));

  KrigingPrecomputation pre;
  pre.r = op.r;
  pre.gamma = GridImage(m, n, per.channels());
  pre.c_gamma = GridImage(m, n, per.channels());
  GridImage c_gamma_c(m, n, per.channels());

  std::vector<Complex> work(per.plane_size());
  std::vector<Complex> spec(per.plane_size());
  for (int ch = 0; ch < per.channels(); ++ch) {
    fft::forward_real(per.plane(ch), spec, m, n);
    auto ch_hat = c_hat.plane(0);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = std::norm(spec[i]);

    std::copy(spec.begin(), spec.end(), work.begin());
    fft::inverse_to_real(work, pre.gamma.plane(ch), m, n);

    for (std::size_t i = 0; i < spec.size(); ++i) work[i] = ch_hat[i] * spec[i];
    fft::inverse_to_real(work, pre.c_gamma.plane(ch), m, n);

    for (std::size_t i = 0; i < spec.size(); ++i) work[i] = std::norm(ch_hat[i]) * spec[i];
    fft::inverse_to_real(work, c_gamma_c.plane(ch), m, n);
  }
  pre.kappa = subsample(c_gamma_c, op.r);
  return pre;
}

KrigingKernels solve_kriging_kernels(const KrigingPrecomputation& pre, const DegradeOperator& op,
                                     double tol_rel) {
  if (pre.r != op.r) throw SizeMismatch("solve_kriging_kernels: operator factor mismatch");
  const int r = op.r;
  const int channels = pre.kappa.channels();

  KrigingKernels kk;
  kk.r = r;
  kk.hr_height = pre.c_gamma.height();
  kk.hr_width = pre.c_gamma.width();
  kk.tol_rel = tol_rel;
  kk.kappa_hat = dft2(pre.kappa);
  const int lm = kk.lr_height();
  const int ln = kk.lr_width();
  const std::size_t lr_size = static_cast<std::size_t>(lm) * ln;
  kk.zero_mask.assign(lr_size * channels, 0);

  std::vector<double> threshold(channels);
  for (int c = 0; c < channels; ++c) {
    double kmax = 0.0;
    for (const auto& z : kk.kappa_hat.plane(c)) kmax = std::max(kmax, std::abs(z));
    if (!(kmax > 0.0) || !std::isfinite(kmax)) {
      throw DegenerateModel("kriging undefined: covariance of A X vanishes on channel " +
                            std::to_string(c) + " (constant texture?)");
    }
    threshold[c] = tol_rel * kmax;
    auto kh = kk.kappa_hat.plane(c);
    for (std::size_t i = 0; i < lr_size; ++i)
      if (std::abs(kh[i]) <= threshold[c]) kk.zero_mask[c * lr_size + i] = 1;
  }

  kk.lambda_hat.reserve(static_cast<std::size_t>(r) * r);
  for (int k = 0; k < r; ++k) {
    for (int l = 0; l < r; ++l) {
      const SpectralImage b_hat = dft2(subsample(circular_shift(pre.c_gamma, k, l), r));
      SpectralImage lam(lm, ln, channels);
      for (int c = 0; c < channels; ++c) {
        auto bh = b_hat.plane(c);
        auto kh = kk.kappa_hat.plane(c);
        auto out = lam.plane(c);
        double bmax = 0.0;
        for (const auto& z : bh) bmax = std::max(bmax, std::abs(z));
        for (std::size_t i = 0; i < lr_size; ++i) {
          if (kk.zero_mask[c * lr_size + i]) {
            if (bmax > 0.0) kk.max_masked_rhs_ratio = std::max(kk.max_masked_rhs_ratio, std::abs(bh[i]) / bmax);
            out[i] = Complex{};
          } else {
            out[i] = bh[i] / kh[i].real();
          }
        }
      }
      kk.lambda_hat.push_back(std::move(lam));
    }
  }
  return kk;
}

GridImage apply_kriging(const KrigingKernels& kk, const GridImage& y) {
  if (y.height() != kk.lr_height() || y.width() != kk.lr_width()) {
    throw SizeMismatch("apply_kriging: input must be (M/r)x(N/r)");
  }
  if (y.channels() != kk.channels()) throw ChannelMismatch("apply_kriging: channel mismatch");
  const int lm = kk.lr_height();
  const int ln = kk.lr_width();
  GridImage out(kk.hr_height, kk.hr_width, y.channels());
  GridImage patch(lm, ln, 1);
  std::vector<Complex> y_hat(patch.plane_size());
  std::vector<Complex> work(patch.plane_size());
  for (int c = 0; c < y.channels(); ++c) {
    fft::forward_real(y.plane(c), y_hat, lm, ln);
    for (int k = 0; k < kk.r; ++k) {
      for (int l = 0; l < kk.r; ++l) {
        auto lam = kk.lambda(k, l).plane(c);
        for (std::size_t i = 0; i < work.size(); ++i) work[i] = y_hat[i] * std::conj(lam[i]);
        fft::inverse_checked(work, patch.plane(0), lm, ln);
        for (int i = 0; i < lm; ++i)
          for (int j = 0; j < ln; ++j) out(k + i * kk.r, l + j * kk.r, c) = patch(i, j);
      }
    }
  }
  return out;
}

}  // namespace gsr
