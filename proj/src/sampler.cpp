#include "gsr/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

#include "gsr/errors.hpp"
#include "gsr/fft.hpp"
#include "gsr/oracle.hpp"

namespace gsr {

struct SamplerAccess {
  static const SpectralImage& innovation_hat(const SRModel& m) { return m.innovation_kernel_hat_; }
};

namespace {

using Clock = std::chrono::steady_clock;

void require_lr_input(const SRModel& model, const GridImage& u_lr) {
  if (u_lr.height() != model.lr_height() || u_lr.width() != model.lr_width()) {
    throw SizeMismatch("LR input is " + std::to_string(u_lr.height()) + "x" +
                       std::to_string(u_lr.width()) + ", model expects " +
                       std::to_string(model.lr_height()) + "x" + std::to_string(model.lr_width()));
  }
  if (u_lr.channels() != model.channels()) {
    throw ChannelMismatch("LR input has " + std::to_string(u_lr.channels()) +
                          " channel(s), model has " + std::to_string(model.channels()));
  }
  if (!all_finite(u_lr)) throw DataError("LR input has non-finite values");
}

struct Centered {
  GridImage y;
  std::vector<double> means;
};

Centered center(const GridImage& u_lr) {
  Centered out{u_lr, std::vector<double>(u_lr.channels())};
  for (int c = 0; c < u_lr.channels(); ++c) {
    auto plane = out.y.plane(c);
    out.means[c] = mean(plane);
    for (auto& v : plane) v -= out.means[c];
  }
  return out;
}

GridImage kriging_component(const SRModel& model, const Centered& centered) {
  GridImage k = apply_kriging(model.kernels(), centered.y);
  for (int c = 0; c < k.channels(); ++c)
    for (auto& v : k.plane(c)) v += centered.means[c];
  return k;
}

// X_SR = Lambda^T (y - A X~) + X~ + m_lr, the kriging of data and innovation fused
// in one spectral pass per subgrid.
SRSample sample_step2(const SRModel& model, const Centered& centered, const GridImage& kriging,
                      const GridImage& noise) {
  const auto start = Clock::now();
  const int m = model.hr_height();
  const int n = model.hr_width();
  const int lm = model.lr_height();
  const int ln = model.lr_width();
  const int r = model.op().r;
  const KrigingKernels& kk = model.kernels();
  const SpectralImage& t_hat = SamplerAccess::innovation_hat(model);

  std::vector<Complex> w_hat(noise.plane_size());
  fft::forward_real(noise.plane(0), w_hat, m, n);

  GridImage x_tilde(m, n, model.channels());
  std::vector<Complex> work(noise.plane_size());
  for (int c = 0; c < model.channels(); ++c) {
    auto th = t_hat.plane(c);
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = th[i] * w_hat[i];
    fft::inverse_checked(work, x_tilde.plane(c), m, n);
  }
  const GridImage x_tilde_lr = apply_degrade(model.op(), x_tilde);

  SRSample out;
  out.sr = GridImage(m, n, model.channels());
  out.mean_offset = centered.means;
  std::vector<Complex> d_hat(static_cast<std::size_t>(lm) * ln);
  std::vector<Complex> lr_work(d_hat.size());
  std::vector<double> patch(d_hat.size());
  for (int c = 0; c < model.channels(); ++c) {
    auto y = centered.y.plane(c);
    auto xl = x_tilde_lr.plane(c);
    for (std::size_t i = 0; i < d_hat.size(); ++i) d_hat[i] = Complex(y[i] - xl[i], 0.0);
    fft::forward(d_hat, lm, ln);
    for (int k = 0; k < r; ++k) {
      for (int l = 0; l < r; ++l) {
        auto lam = kk.lambda(k, l).plane(c);
        for (std::size_t i = 0; i < lr_work.size(); ++i) lr_work[i] = d_hat[i] * std::conj(lam[i]);
        fft::inverse_checked(lr_work, patch, lm, ln);
        for (int i = 0; i < lm; ++i)
          for (int j = 0; j < ln; ++j) {
            const int p1 = k + i * r;
            const int p2 = l + j * r;
            out.sr(p1, p2, c) = patch[static_cast<std::size_t>(i) * ln + j] + x_tilde(p1, p2, c) +
                                centered.means[c];
          }
      }
    }
  }
  out.kriging_part = kriging;
  out.innovation_part = out.sr - kriging;
  out.step2_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace

SRModel::SRModel(Texton texton, DegradeOperator op, KrigingKernels kernels, SamplerOptions options)
    : texton_(std::move(texton)),
      op_(std::move(op)),
      kernels_(std::move(kernels)),
      options_(options) {
  innovation_kernel_ = options_.consistent_texton ? covariance_texton(texton_) : texton_.kernel;
  innovation_kernel_hat_ = dft2(innovation_kernel_);
}

SRModel build_sr_model(const GridImage& reference, int r, const SamplerOptions& options) {
  require_divisible(reference.height(), reference.width(), r);
  Texton texton = compute_texton(reference);
  DegradeOperator op = build_downscale_kernel(r);
  KrigingKernels kernels = solve_kriging_kernels(precompute_kernels(texton, op), op, options.tol_rel);
  return SRModel(std::move(texton), std::move(op), std::move(kernels), options);
}

SRModel build_sr_model(const GridImage& reference, int r, KrigingKernels kernels,
                       const SamplerOptions& options) {
  require_divisible(reference.height(), reference.width(), r);
  if (kernels.r != r || kernels.hr_height != reference.height() ||
      kernels.hr_width != reference.width() || kernels.channels() != reference.channels()) {
    throw SizeMismatch("cached kernels do not match the reference size, channels or factor");
  }
  Texton texton = compute_texton(reference);
  DegradeOperator op = build_downscale_kernel(r);
  return SRModel(std::move(texton), std::move(op), std::move(kernels), options);
}

SRSample sr_sample_with_noise(const SRModel& model, const GridImage& u_lr, const GridImage& noise) {
  require_lr_input(model, u_lr);
  if (noise.channels() != 1 || noise.height() != model.hr_height() || noise.width() != model.hr_width()) {
    throw SizeMismatch("noise must be one HR-sized channel");
  }
  const Centered centered = center(u_lr);
  return sample_step2(model, centered, kriging_component(model, centered), noise);
}

SRSample sr_sample(const SRModel& model, const GridImage& u_lr, std::uint64_t seed) {
  const std::uint64_t seeds[] = {seed};
  return std::move(sr_sample_batch(model, u_lr, seeds).front());
}

std::vector<SRSample> sr_sample_batch(const SRModel& model, const GridImage& u_lr,
                                      std::span<const std::uint64_t> seeds, int threads) {
  require_lr_input(model, u_lr);
  const Centered centered = center(u_lr);
  const GridImage kriging = kriging_component(model, centered);
  std::vector<SRSample> out(seeds.size());

  auto run_one = [&](std::size_t i) {
    const auto start = Clock::now();
    GridImage noise = draw_standard_noise(model.hr_height(), model.hr_width(), seeds[i]);
    out[i] = sample_step2(model, centered, kriging, noise);
    out[i].seed = seeds[i];
    out[i].step2_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  };

  const int workers = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::size_t>(1, seeds.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < seeds.size(); i = next++) {
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

MseReport mse_statistics(const SRModel& model, const GridImage& u_hr, const GridImage& u_lr,
                         int n_samples, std::uint64_t seed) {
  if (u_hr.height() != model.hr_height() || u_hr.width() != model.hr_width() ||
      u_hr.channels() != model.channels()) {
    throw SizeMismatch("mse_statistics: HR image does not match the model");
  }
  MseReport report;
  report.n_samples = n_samples;
  report.lr_mismatch = max_abs(apply_degrade(model.op(), u_hr) - u_lr);

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(0, n_samples)));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = seed + i;
  const std::vector<SRSample> samples = sr_sample_batch(model, u_lr, seeds);

  const GridImage kriging = kriging_component(model, center(u_lr));
  report.kriging_sq_error = squared_norm(u_hr - kriging);
  double acc = 0.0;
  double acc2 = 0.0;
  for (const auto& s : samples) {
    const double e = squared_norm(u_hr - s.sr);
    acc += e;
    acc2 += e * e;
    if (e < report.kriging_sq_error) report.kriging_below_every_sample = false;
  }
  if (n_samples > 0) {
    report.sample_sq_error_mean = acc / n_samples;
    if (n_samples > 1) {
      const double var = (acc2 - acc * acc / n_samples) / (n_samples - 1);
      report.sample_sq_error_stderr = std::sqrt(std::max(0.0, var) / n_samples);
    }
  }

  const long pixels = static_cast<long>(model.hr_height()) * model.hr_width();
  if (pixels <= oracle::kDefaultMaxPixels) {
    const oracle::DenseOperator a = oracle::dense_degrade_matrix(model.op(), model.hr_height(), model.hr_width());
    const GridImage per = covariance_texton(model.texton());
    double trace = 0.0;
    for (int c = 0; c < model.channels(); ++c) {
      const oracle::DenseOperator gamma = oracle::dense_covariance_matrix(per.channel(c));
      const oracle::DenseOperator gamma_inn =
          oracle::dense_covariance_matrix(model.innovation_kernel().channel(c));
      const oracle::DenseOperator lambda = oracle::dense_solve_kriging(a, gamma, model.kernels().tol_rel);
      trace += oracle::innovation_energy(a, gamma_inn, lambda);
    }
    report.innovation_trace = trace;
    if (report.sample_sq_error_stderr > 0.0) {
      report.identity_z = (report.sample_sq_error_mean - report.kriging_sq_error - trace) /
                          report.sample_sq_error_stderr;
    }
  }
  return report;
}

}  // namespace gsr
