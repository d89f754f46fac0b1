#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsr/adsn.hpp"
#include "gsr/degrade.hpp"
#include "gsr/kriging.hpp"

namespace gsr {

struct SamplerOptions {
  double tol_rel = kDefaultTolRel;
  // Draw the innovation field from per(t) instead of the raw texton t, so the
  // sampled field and the kriging covariance describe the same Gaussian model.
  bool consistent_texton = false;
};

/// ADSN model of a reference image paired with the kriging kernels solved for it.
/// Immutable once built; share freely between sampling threads.
class SRModel {
 public:
  const Texton& texton() const { return texton_; }
  const DegradeOperator& op() const { return op_; }
  const KrigingKernels& kernels() const { return kernels_; }
  const SamplerOptions& options() const { return options_; }
  int hr_height() const { return kernels_.hr_height; }
  int hr_width() const { return kernels_.hr_width; }
  int lr_height() const { return kernels_.lr_height(); }
  int lr_width() const { return kernels_.lr_width(); }
  int channels() const { return texton_.kernel.channels(); }
  /// Kernel that drives the innovation field (t or per(t)).
  const GridImage& innovation_kernel() const { return innovation_kernel_; }

 private:
  friend SRModel build_sr_model(const GridImage&, int, const SamplerOptions&);
  friend SRModel build_sr_model(const GridImage&, int, KrigingKernels, const SamplerOptions&);
  SRModel(Texton texton, DegradeOperator op, KrigingKernels kernels, SamplerOptions options);

  Texton texton_;
  DegradeOperator op_;
  KrigingKernels kernels_;
  SamplerOptions options_;
  GridImage innovation_kernel_;
  SpectralImage innovation_kernel_hat_;

  friend struct SamplerAccess;
};

/// Step 1: texton of the reference, zoom-out operator, kriging kernels.
/// The reference fixes the HR size; r must divide it.
SRModel build_sr_model(const GridImage& reference, int r, const SamplerOptions& options = {});

/// As above with kernels loaded from a cache; their shape and factor are validated
/// against the reference.
SRModel build_sr_model(const GridImage& reference, int r, KrigingKernels kernels,
                       const SamplerOptions& options = {});

struct SRSample {
  GridImage sr;
  GridImage kriging_part;     // Lambda^T (u_lr - m_lr) + m_lr
  GridImage innovation_part;  // sr - kriging_part
  std::vector<double> mean_offset;  // m_lr per channel
  std::uint64_t seed = 0;
  double step2_seconds = 0.0;
};

/// Step 2 with noise drawn from seed.
SRSample sr_sample(const SRModel& model, const GridImage& u_lr, std::uint64_t seed);

/// Step 2 with an explicit single-channel HR noise field.
SRSample sr_sample_with_noise(const SRModel& model, const GridImage& u_lr, const GridImage& noise);

/// Step 2 for each seed, in seed order. The kriging component is computed once.
/// threads <= 1 runs sequentially; results do not depend on threads.
std::vector<SRSample> sr_sample_batch(const SRModel& model, const GridImage& u_lr,
                                      std::span<const std::uint64_t> seeds, int threads = 1);

struct MseReport {
  double kriging_sq_error = 0.0;     // ||U - Lambda^T U_LR||^2 (mean re-added)
  double sample_sq_error_mean = 0.0;  // Monte Carlo E||U - X_SR||^2
  double sample_sq_error_stderr = 0.0;
  int n_samples = 0;
  bool kriging_below_every_sample = true;
  double lr_mismatch = 0.0;  // ||A U - U_LR||_inf; warn when not ~0
  // Expected innovation energy Tr((I - L A) Gamma_inn (I - L A)^T) from the dense
  // oracle, with L = Lambda^T; equals Tr(Gamma - L A Gamma A^T L^T) when the
  // innovation and kriging share one covariance. Absent above the oracle size cap.
  std::optional<double> innovation_trace;
  // (sample mean - kriging error - trace) / stderr, when the trace is available.
  std::optional<double> identity_z;
};

MseReport mse_statistics(const SRModel& model, const GridImage& u_hr, const GridImage& u_lr,
                         int n_samples, std::uint64_t seed);

}  // namespace gsr
