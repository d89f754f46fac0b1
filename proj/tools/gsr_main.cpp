// Command-line front end: degrade, sr, kriging, metrics, oracle-check.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gsr/errors.hpp"
#include "gsr/image_io.hpp"
#include "gsr/kernel_cache.hpp"
#include "gsr/metrics.hpp"
#include "gsr/oracle.hpp"
#include "gsr/sampler.hpp"
#include "gsr/version.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string input;
  std::string output;
  std::string lr;
  std::string ref;
  std::string a;
  std::string b;
  std::string out_dir;
  std::string kernel_cache;
  int factor = 2;
  int samples = 1;
  std::uint64_t seed = 0;
  double tol_rel = gsr::kDefaultTolRel;
  double peak = 255.0;
  int depth = 8;
  int size = 16;
  bool emit_components = false;
  bool consistent_texton = false;
  bool crop = false;
  bool json = false;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int thread_count() {
  if (const char* env = std::getenv("GSR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void require_file(const std::string& path, const char* flag) {
  if (!fs::is_regular_file(path)) throw gsr::IoError(std::string(flag) + ": no such file '" + path + "'");
}

gsr::GridImage center_crop(const gsr::GridImage& img, int height, int width) {
  if (img.height() < height || img.width() < width) {
    throw gsr::SizeMismatch("--crop: reference " + std::to_string(img.height()) + "x" +
                            std::to_string(img.width()) + " is smaller than the HR size " +
                            std::to_string(height) + "x" + std::to_string(width));
  }
  const int o1 = (img.height() - height) / 2;
  const int o2 = (img.width() - width) / 2;
  gsr::GridImage out(height, width, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) out(y, x, c) = img(o1 + y, o2 + x, c);
  return out;
}

// Loads the LR input and a reference matching the HR grid it implies.
std::pair<gsr::GridImage, gsr::GridImage> load_lr_and_reference(const RunConfig& cfg) {
  require_file(cfg.lr, "--lr");
  require_file(cfg.ref, "--ref");
  gsr::GridImage lr = gsr::load_image(cfg.lr);
  gsr::GridImage ref = gsr::load_image(cfg.ref);
  if (lr.channels() != ref.channels()) {
    throw gsr::ChannelMismatch("LR input has " + std::to_string(lr.channels()) +
                               " channel(s) but the reference has " + std::to_string(ref.channels()));
  }
  const int hr_h = lr.height() * cfg.factor;
  const int hr_w = lr.width() * cfg.factor;
  if (cfg.crop) ref = center_crop(ref, hr_h, hr_w);
  if (ref.height() != hr_h || ref.width() != hr_w) {
    throw gsr::SizeMismatch("reference is " + std::to_string(ref.height()) + "x" +
                            std::to_string(ref.width()) + " but LR x factor is " + std::to_string(hr_h) +
                            "x" + std::to_string(hr_w) + " (use --crop to center-crop)");
  }
  return {std::move(lr), std::move(ref)};
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string numbered(const std::string& stem, int i) {
  std::ostringstream os;
  os << stem << '_' << std::setw(4) << std::setfill('0') << i << ".png";
  return os.str();
}

int run_degrade(const RunConfig& cfg) {
  require_file(cfg.input, "--input");
  const gsr::GridImage hr = gsr::load_image(cfg.input);
  const gsr::DegradeOperator op = gsr::build_downscale_kernel(cfg.factor);
  gsr::save_image(gsr::apply_degrade(op, hr), cfg.output, cfg.depth);
  return 0;
}

gsr::SRModel build_model(const RunConfig& cfg, const gsr::GridImage& ref, std::string& cache_status) {
  gsr::SamplerOptions options;
  options.tol_rel = cfg.tol_rel;
  options.consistent_texton = cfg.consistent_texton;
  cache_status = "none";
  if (!cfg.kernel_cache.empty() && fs::exists(cfg.kernel_cache)) {
    gsr::KrigingKernels kk = gsr::load_kernels(cfg.kernel_cache);
    if (kk.tol_rel == cfg.tol_rel) {
      cache_status = "hit";
      return gsr::build_sr_model(ref, cfg.factor, std::move(kk), options);
    }
  }
  gsr::SRModel model = gsr::build_sr_model(ref, cfg.factor, options);
  if (!cfg.kernel_cache.empty()) {
    gsr::save_kernels(model.kernels(), cfg.kernel_cache);
    cache_status = "written";
  }
  return model;
}

void warn_masked_rhs(const gsr::SRModel& model) {
  const double ratio = model.kernels().max_masked_rhs_ratio;
  if (ratio > std::sqrt(model.kernels().tol_rel)) {
    std::cerr << "warning: kriging right-hand side is not negligible on masked frequencies (ratio "
              << ratio << ")\n";
  }
}

int run_sr(const RunConfig& cfg) {
  auto [lr, ref] = load_lr_and_reference(cfg);
  fs::create_directories(cfg.out_dir);
  const int threads = thread_count();

  const auto t1 = Clock::now();
  std::string cache_status;
  const gsr::SRModel model = build_model(cfg, ref, cache_status);
  const double step1 = seconds_since(t1);
  warn_masked_rhs(model);

  std::vector<std::uint64_t> seeds(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i) seeds[i] = cfg.seed + static_cast<std::uint64_t>(i);
  const auto t2 = Clock::now();
  const std::vector<gsr::SRSample> samples = gsr::sr_sample_batch(model, lr, seeds, threads);
  const double step2_total = seconds_since(t2);

  const fs::path dir(cfg.out_dir);
  std::vector<std::string> written;
  for (int i = 0; i < cfg.samples; ++i) {
    gsr::save_image(samples[i].sr, dir / numbered("sample", i), cfg.depth);
    written.push_back(numbered("sample", i));
  }
  if (cfg.emit_components && !samples.empty()) {
    gsr::save_image(samples[0].kriging_part, dir / "kriging.png", cfg.depth);
    written.push_back("kriging.png");
    for (int i = 0; i < cfg.samples; ++i) {
      gsr::GridImage shown = samples[i].innovation_part;
      for (int c = 0; c < shown.channels(); ++c)
        for (auto& v : shown.plane(c)) v += samples[i].mean_offset[c];
      gsr::save_image(shown, dir / numbered("innovation", i), cfg.depth);
      written.push_back(numbered("innovation", i));
    }
  }

  std::ofstream manifest(dir / "manifest.txt");
  manifest << std::setprecision(17);
  manifest << "tool=gsr\nversion=" << gsr::kVersion << "\nprng=" << gsr::kNoiseGeneratorName << '\n';
  manifest << "command=sr\nlr=" << cfg.lr << "\nref=" << cfg.ref << "\nfactor=" << cfg.factor
           << "\nsamples=" << cfg.samples << "\nseed=" << cfg.seed << "\ntol_rel=" << cfg.tol_rel
           << "\nconsistent_texton=" << (cfg.consistent_texton ? 1 : 0) << "\ncrop=" << (cfg.crop ? 1 : 0)
           << "\nemit_components=" << (cfg.emit_components ? 1 : 0) << "\ndepth=" << cfg.depth
           << "\nthreads=" << threads << "\nhr_size=" << model.hr_height() << 'x' << model.hr_width()
           << "\nlr_size=" << model.lr_height() << 'x' << model.lr_width() << "\nchannels=" << model.channels()
           << "\nkernel_cache=" << (cfg.kernel_cache.empty() ? "-" : cfg.kernel_cache)
           << "\nkernel_cache_status=" << cache_status << '\n';
  manifest << "lr_mean=" << join(samples.empty() ? std::vector<double>{} : samples[0].mean_offset) << '\n';
  manifest << "ref_mean=" << join(model.texton().source_mean) << '\n';
  manifest << "masked_frequencies=" << std::count(model.kernels().zero_mask.begin(), model.kernels().zero_mask.end(), 1) << '\n';
  manifest << "step1_seconds=" << step1 << '\n';
  manifest << "step2_total_seconds=" << step2_total << '\n';
  for (const auto& s : samples) {
    const auto idx = &s - samples.data();
    manifest << "sample." << std::setw(4) << std::setfill('0') << idx << std::setfill(' ')
             << ".seed=" << s.seed << '\n';
    manifest << "sample." << std::setw(4) << std::setfill('0') << idx << std::setfill(' ')
             << ".step2_seconds=" << s.step2_seconds << '\n';
  }
  for (const auto& f : written) manifest << "output=" << f << '\n';
  if (!manifest) throw gsr::IoError("failed writing manifest");
  std::cout << "wrote " << cfg.samples << " sample(s) to " << cfg.out_dir << " (step1 " << step1
            << " s, step2 " << step2_total << " s)\n";
  return 0;
}

int run_kriging(const RunConfig& cfg) {
  auto [lr, ref] = load_lr_and_reference(cfg);
  std::string cache_status;
  const gsr::SRModel model = build_model(cfg, ref, cache_status);
  warn_masked_rhs(model);
  gsr::GridImage y = lr;
  for (int c = 0; c < y.channels(); ++c) {
    const double m = gsr::mean(y.plane(c));
    for (auto& v : y.plane(c)) v -= m;
  }
  gsr::GridImage k = gsr::apply_kriging(model.kernels(), y);
  for (int c = 0; c < k.channels(); ++c) {
    const double m = gsr::mean(lr.plane(c));
    for (auto& v : k.plane(c)) v += m;
  }
  gsr::save_image(k, cfg.output, cfg.depth);
  return 0;
}

std::string psnr_text(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

int run_metrics(const RunConfig& cfg) {
  require_file(cfg.a, "--a");
  require_file(cfg.b, "--b");
  const gsr::MetricReport r = gsr::compare_images(gsr::load_image(cfg.a), gsr::load_image(cfg.b), cfg.peak);
  if (cfg.json) {
    nlohmann::json j;
    j["psnr_db"] = std::isinf(r.psnr_db) ? nlohmann::json("inf") : nlohmann::json(r.psnr_db);
    j["ssim"] = r.ssim;
    j["peak"] = cfg.peak;
    for (const double p : r.psnr_per_channel)
      j["psnr_per_channel"].push_back(std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p));
    j["ssim_per_channel"] = r.ssim_per_channel;
    std::cout << j.dump() << '\n';
    return 0;
  }
  std::cout << "psnr_db=" << psnr_text(r.psnr_db) << '\n';
  std::cout << "ssim=" << std::fixed << std::setprecision(6) << r.ssim << '\n';
  for (std::size_t c = 0; c < r.psnr_per_channel.size(); ++c) {
    std::cout << "psnr_db.c" << c << '=' << psnr_text(r.psnr_per_channel[c]) << '\n';
    std::cout << "ssim.c" << c << '=' << std::fixed << std::setprecision(6) << r.ssim_per_channel[c] << '\n';
  }
  return 0;
}

int run_oracle_check(const RunConfig& cfg) {
  const auto lines = gsr::oracle::run_certification(cfg.size, cfg.factor, cfg.seed);
  bool all = true;
  for (const auto& l : lines) {
    std::cout << (l.passed ? "PASS " : "FAIL ") << l.name << " (" << l.detail << ")\n";
    all = all && l.passed;
  }
  return all ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic super-resolution of Gaussian microtextures"};
  app.set_version_flag("--version", gsr::kVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  auto* degrade = app.add_subcommand("degrade", "Apply the zoom-out operator A = S C");
  degrade->add_option("--input", cfg.input, "HR image")->required();
  degrade->add_option("--factor", cfg.factor, "Zoom factor r")->required()->check(CLI::PositiveNumber);
  degrade->add_option("--output", cfg.output, "LR image to write")->required();
  degrade->add_option("--depth", cfg.depth, "Output bit depth")->check(CLI::IsMember({8, 16}));

  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--lr", cfg.lr, "LR input image")->required();
    sub->add_option("--ref", cfg.ref, "Reference image defining the texture model")->required();
    sub->add_option("--factor", cfg.factor, "Zoom factor r")->required()->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol_rel, "Relative pseudo-inverse threshold")->check(CLI::PositiveNumber);
    sub->add_flag("--crop", cfg.crop, "Center-crop the reference to the HR size");
    sub->add_option("--kernel-cache", cfg.kernel_cache, "Read/write the Step-1 kernels here");
    sub->add_option("--depth", cfg.depth, "Output bit depth")->check(CLI::IsMember({8, 16}));
    sub->add_flag("--consistent-texton", cfg.consistent_texton,
                  "Draw innovations from the periodic component of the texton");
  };

  auto* sr = app.add_subcommand("sr", "Draw conditional SR samples");
  add_model_flags(sr);
  sr->add_option("--samples", cfg.samples, "Number of samples")->check(CLI::PositiveNumber);
  sr->add_option("--seed", cfg.seed, "Seed of the first sample; sample i uses seed + i");
  sr->add_option("--out-dir", cfg.out_dir, "Output directory")->required();
  sr->add_flag("--emit-components", cfg.emit_components, "Also write kriging and innovation images");

  auto* kriging = app.add_subcommand("kriging", "Write the kriging component (conditional mean)");
  add_model_flags(kriging);
  kriging->add_option("--output", cfg.output, "Output image")->required();

  auto* metrics = app.add_subcommand("metrics", "PSNR and SSIM between two images");
  metrics->add_option("--a", cfg.a, "First image")->required();
  metrics->add_option("--b", cfg.b, "Second image")->required();
  metrics->add_option("--peak", cfg.peak, "Peak value")->check(CLI::PositiveNumber);
  metrics->add_flag("--json", cfg.json, "Emit one JSON record");

  auto* oracle = app.add_subcommand("oracle-check", "Certify the FFT path against dense matrices");
  oracle->add_option("--size", cfg.size, "HR side length")->check(CLI::Range(4, 64));
  oracle->add_option("--factor", cfg.factor, "Zoom factor r")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", cfg.seed, "Seed of the random texture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*degrade) return run_degrade(cfg);
    if (*sr) return run_sr(cfg);
    if (*kriging) return run_kriging(cfg);
    if (*metrics) return run_metrics(cfg);
    if (*oracle) return run_oracle_check(cfg);
  } catch (const gsr::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const gsr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
