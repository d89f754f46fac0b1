// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gsr/errors.hpp"
#include "gsr/image_io.hpp"
#include "gsr/metrics.hpp"
#include "gsr/oracle.hpp"
#include "gsr/sampler.hpp"
#include "gsr/synthetic.hpp"

using namespace gsr;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridImage uniform_image(int h, int w, int c, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  GridImage img(h, w, c);
  for (auto& v : img.values()) v = dist(engine);
  return img;
}

GridImage remove_mean(GridImage img) {
  for (int c = 0; c < img.channels(); ++c) {
    const double m = mean(img.plane(c));
    for (auto& v : img.plane(c)) v -= m;
  }
  return img;
}

// 1. Fast kriging against the dense minimum-norm solution.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  struct Instance { int m, n, r; };
  double worst = 0.0;
  int checked = 0;
  for (const Instance in : {Instance{8, 8, 2}, Instance{16, 16, 2}, Instance{16, 16, 4}}) {
    const DegradeOperator op = build_downscale_kernel(in.r);
    const auto a = oracle::dense_degrade_matrix(op, in.m, in.n);
    for (int t = 0; t < 5; ++t) {
      const std::uint64_t seed = 1000 * in.m + 100 * in.r + t;
      const GridImage ref = (t % 2 == 0) ? synthetic_texture(in.m, in.n, 1, seed)
                                         : uniform_image(in.m, in.n, 1, seed, 0.0, 255.0);
      const Texton texton = compute_texton(ref);
      const KrigingKernels kk = solve_kriging_kernels(precompute_kernels(texton, op), op);
      const auto gamma = oracle::dense_covariance_matrix(covariance_texton(texton));
      const auto lambda = oracle::dense_solve_kriging(a, gamma);
      for (int s = 0; s < 20; ++s) {
        const GridImage y = uniform_image(in.m / in.r, in.n / in.r, 1, seed * 31 + s, -100.0, 100.0);
        const Eigen::VectorXd dense = lambda.entries.transpose() * oracle::vectorize(y);
        const Eigen::VectorXd fast = oracle::vectorize(apply_kriging(kk, y));
        worst = std::max(worst, (dense - fast).cwiseAbs().maxCoeff() / dense.cwiseAbs().maxCoeff());
        ++checked;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-7 && elapsed < 10.0,
          fmt("%d cases, max relative Linf %.3g (<= 1e-7), %.2f s (< 10 s)", checked, worst, elapsed)};
}

// 2. Lemma 1 on random kernels.
Outcome lemma_check() {
  int ok = 0;
  for (int i = 0; i < 10; ++i)
    ok += oracle::verify_lemma_convolution_subsampling(uniform_image(8, 8, 1, 77 + i, -1.0, 1.0), 2, 1e-10) ? 1 : 0;
  return {ok == 10, fmt("%d/10 kernels at 8x8, r=2, tol 1e-10", ok)};
}

// 3. Re-degraded samples reproduce the observation.
Outcome consistency() {
  double worst = 0.0;
  for (int r : {2, 4}) {
    const SRModel model = build_sr_model(synthetic_texture(64, 64, 3, 300 + r), r);
    const GridImage x = adsn_sample(model.texton(), draw_standard_noise(64, 64, 400 + r));
    const GridImage u_lr = apply_degrade(model.op(), x);
    const GridImage y = remove_mean(u_lr);
    std::vector<std::uint64_t> seeds(50);
    for (int i = 0; i < 50; ++i) seeds[i] = 500 + i;
    for (const SRSample& s : sr_sample_batch(model, u_lr, seeds)) {
      GridImage centered = s.sr;
      for (int c = 0; c < centered.channels(); ++c)
        for (auto& v : centered.plane(c)) v -= s.mean_offset[c];
      const GridImage diff = apply_degrade(model.op(), centered) - y;
      worst = std::max(worst, std::sqrt(squared_norm(diff) / squared_norm(y)));
    }
  }
  return {worst <= 1e-6, fmt("100 samples at 64x64, r in {2,4}: max relative L2 residual %.3g (<= 1e-6)", worst)};
}

// 4. X_SR follows the model distribution when x does.
Outcome distribution_preservation() {
  const auto start = Clock::now();
  const int n = 32;
  SamplerOptions opts;
  opts.consistent_texton = true;
  const SRModel model = build_sr_model(synthetic_texture(n, n, 1, 600), 2, opts);
  const Texton model_texton{model.innovation_kernel(), {0.0}};
  const GridImage gamma = adsn_covariance_kernel(model_texton);
  const int lags[4][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 3}};
  const int trials = 2000;
  double acc[4] = {}, acc2[4] = {};
  for (int t = 0; t < trials; ++t) {
    const GridImage x = adsn_sample(model_texton, draw_standard_noise(n, n, 2 * t + 1));
    const GridImage sr = sr_sample(model, apply_degrade(model.op(), x), 2 * t + 2).sr;
    for (int l = 0; l < 4; ++l) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v += sr(i, j) * sr.at(i + lags[l][0], j + lags[l][1]);
      v /= n * n;
      acc[l] += v;
      acc2[l] += v * v;
    }
  }
  double worst_z = 0.0;
  std::ostringstream zs;
  for (int l = 0; l < 4; ++l) {
    const double m = acc[l] / trials;
    const double se = std::sqrt((acc2[l] / trials - m * m) / (trials - 1));
    const double z = (m - gamma(lags[l][0], lags[l][1])) / se;
    worst_z = std::max(worst_z, std::abs(z));
    zs << (l ? "," : "") << fmt("%.2f", z);
  }
  const double elapsed = seconds_since(start);
  return {worst_z <= 4.0 && elapsed < 60.0,
          fmt("%d trials at 32x32, r=2, lag z-scores [%s] (|z| <= 4), %.1f s (< 60 s)", trials,
              zs.str().c_str(), elapsed)};
}

// 5. MSE identity, kriging optimality, PSD innovation covariance.
Outcome mse_identity() {
  SamplerOptions opts;
  opts.consistent_texton = true;
  bool ok = true;
  std::ostringstream detail;
  for (int run = 0; run < 3; ++run) {
    const GridImage u = synthetic_texture(16, 16, 1, 700 + run);
    const SRModel model = build_sr_model(u, 2, opts);
    const GridImage u_lr = apply_degrade(model.op(), u);
    const MseReport rep = mse_statistics(model, u, u_lr, 5000, 10000 * (run + 1));
    const double z = rep.identity_z.value_or(1e9);
    const bool inequality = rep.sample_sq_error_mean >= rep.kriging_sq_error;

    const auto a = oracle::dense_degrade_matrix(model.op(), 16, 16);
    const auto gamma = oracle::dense_covariance_matrix(covariance_texton(model.texton()));
    const auto cov = oracle::conditional_covariance(a, gamma, oracle::dense_solve_kriging(a, gamma));
    const bool psd = cov.min_eigenvalue >= -1e-8 * cov.max_eigenvalue;
    ok = ok && std::abs(z) <= 3.0 && inequality && psd;
    detail << (run ? "; " : "")
           << fmt("z=%.2f, E=%.4g >= krig=%.4g, min/max eig=%.2g", z, rep.sample_sq_error_mean,
                  rep.kriging_sq_error, cov.min_eigenvalue / cov.max_eigenvalue);
  }
  return {ok, "5000 samples x 3 runs at 16x16, r=2: " + detail.str()};
}

// 6. r = 1 is exact deconvolution; a constant reference is rejected.
Outcome degenerate_cases() {
  const SRModel model = build_sr_model(synthetic_texture(32, 32, 3, 800), 1);
  const GridImage u_lr = uniform_image(32, 32, 3, 801, 0.0, 255.0);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SRSample s = sr_sample(model, u_lr, seed);
    worst = std::max({worst, max_abs(s.sr - u_lr), max_abs(s.innovation_part)});
  }
  bool raised = false;
  try {
    build_sr_model(GridImage(32, 32, 3, 128.0), 2);
  } catch (const DegenerateModel&) {
    raised = true;
  }
  return {worst <= 1e-8 && raised,
          fmt("r=1 max deviation %.3g (<= 1e-8); constant reference %s DegenerateModel", worst,
              raised ? "raised" : "did not raise")};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<double> manifest_values(const std::string& text, const std::string& suffix) {
  std::vector<double> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    if (key.size() >= suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
      out.push_back(std::stod(line.substr(eq + 1)));
  }
  return out;
}

// 7. Step-2 latency, Step-1 amortization, large end-to-end run.
Outcome performance() {
  const fs::path dir = fs::temp_directory_path() / "gsr_acceptance_perf";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const GridImage hr = synthetic_texture(256, 256, 3, 900);
  save_image(hr, dir / "hr.png");
  save_image(apply_degrade(build_downscale_kernel(8), hr), dir / "lr.png");
  save_image(synthetic_texture(256, 256, 3, 901), dir / "ref.png");
  unsetenv("GSR_THREADS");
  const std::string base = std::string(GSR_CLI_PATH) + " sr --lr " + (dir / "lr.png").string() + " --ref " +
                           (dir / "ref.png").string() + " --factor 8 --samples 4 --kernel-cache " +
                           (dir / "k.bin").string() + " --out-dir ";
  const int rc1 = std::system((base + (dir / "a").string() + " > /dev/null").c_str());
  const int rc2 = std::system((base + (dir / "b").string() + " > /dev/null").c_str());
  const std::string m1 = read_file(dir / "a" / "manifest.txt");
  const std::string m2 = read_file(dir / "b" / "manifest.txt");
  std::vector<double> step2 = manifest_values(m1, ".step2_seconds");
  const std::vector<double> step2b = manifest_values(m2, ".step2_seconds");
  step2.insert(step2.end(), step2b.begin(), step2b.end());
  const double worst_step2 = step2.empty() ? 1e9 : *std::max_element(step2.begin(), step2.end());
  const bool reused = m2.find("kernel_cache_status=hit") != std::string::npos;
  const std::vector<double> step1a = manifest_values(m1, "step1_seconds");
  const std::vector<double> step1b = manifest_values(m2, "step1_seconds");
  fs::remove_all(dir);

  const GridImage big = synthetic_texture(512, 768, 3, 902);
  const GridImage big_lr = apply_degrade(build_downscale_kernel(16), big);
  const auto e2e = Clock::now();
  const SRModel model = build_sr_model(big, 16);
  const std::uint64_t seeds[] = {1, 2, 3, 4};
  const auto samples = sr_sample_batch(model, big_lr, seeds);
  const double end_to_end = seconds_since(e2e);

  const bool ok = rc1 == 0 && rc2 == 0 && step2.size() == 8 && worst_step2 <= 0.1 && reused &&
                  step1a.size() == 1 && step1b.size() == 1 && end_to_end <= 10.0 && samples.size() == 4;
  return {ok, fmt("256x256 r=8: max Step-2 %.4f s over %zu samples (<= 0.1), Step 1 %.3f s then %.3f s with "
                  "cached kernels (%s); 512x768 r=16 Step 1 + 4 samples %.2f s (<= 10)",
                  worst_step2, step2.size(), step1a.empty() ? -1.0 : step1a[0],
                  step1b.empty() ? -1.0 : step1b[0], reused ? "reused" : "NOT reused", end_to_end)};
}

// 8. Samples score below the kriging component (regression to the mean).
Outcome regression_to_mean() {
  int below = 0;
  int total = 0;
  double mean_gap = 0.0;
  for (int t = 0; t < 20; ++t) {
    const GridImage u = synthetic_texture(64, 64, 3, 1100 + t, 1.5 + 0.1 * t);
    const SRModel model = build_sr_model(u, 4);
    const GridImage u_lr = apply_degrade(model.op(), u);
    std::vector<std::uint64_t> seeds(100);
    for (int i = 0; i < 100; ++i) seeds[i] = 100000 * t + i;
    const auto samples = sr_sample_batch(model, u_lr, seeds);
    const double krig = psnr(u, samples.front().kriging_part);
    for (const auto& s : samples) {
      const double p = psnr(u, s.sr);
      below += p < krig ? 1 : 0;
      mean_gap += krig - p;
      ++total;
    }
  }
  const double frac = static_cast<double>(below) / total;
  return {frac >= 0.95, fmt("%d/%d samples below kriging PSNR (%.1f%%, >= 95%%), mean gap %.2f dB", below, total,
                            100.0 * frac, mean_gap / total)};
}

// 9. Closed-form metric values.
Outcome metrics_sanity() {
  const double p0 = psnr(GridImage(32, 32, 1, 0.0), GridImage(32, 32, 1, 255.0));
  const double p20 = psnr(GridImage(32, 32, 3, 100.0), GridImage(32, 32, 3, 125.5));
  const GridImage x = uniform_image(32, 32, 3, 1200, 0.0, 255.0);
  const double s = ssim(x, x);
  const bool ok = std::abs(p0) <= 1e-9 && std::abs(p20 - 20.0) <= 1e-9 && std::abs(s - 1.0) <= 1e-9;
  return {ok, fmt("psnr %.12g dB and %.12g dB, ssim(X,X) = %.12g", p0, p20, s)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"lemma 1", lemma_check},
      {"consistency", consistency},
      {"distribution preservation", distribution_preservation},
      {"mse identity", mse_identity},
      {"degenerate and invertible cases", degenerate_cases},
      {"performance", performance},
      {"regression to the mean", regression_to_mean},
      {"metrics sanity", metrics_sanity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
