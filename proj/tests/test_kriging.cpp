#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "gsr/errors.hpp"
#include "gsr/fft.hpp"
#include "gsr/kernel_cache.hpp"
#include "gsr/kriging.hpp"
#include "gsr/oracle.hpp"
#include "gsr/synthetic.hpp"
#include "test_util.hpp"

namespace gsr {
namespace {

using testing::max_abs_diff;
using testing::random_image;

KrigingKernels solve_for(const GridImage& reference, int r, KrigingPrecomputation* pre_out = nullptr) {
  const DegradeOperator op = build_downscale_kernel(r);
  KrigingPrecomputation pre = precompute_kernels(compute_texton(reference), op);
  KrigingKernels kk = solve_kriging_kernels(pre, op);
  if (pre_out) *pre_out = std::move(pre);
  return kk;
}

GridImage zero_mean(GridImage y) {
  for (int c = 0; c < y.channels(); ++c) {
    const double m = mean(y.plane(c));
    for (auto& v : y.plane(c)) v -= m;
  }
  return y;
}

TEST(Kriging, ConstantReferenceIsDegenerate) {
  const DegradeOperator op = build_downscale_kernel(2);
  const auto pre = precompute_kernels(compute_texton(GridImage(8, 8, 1, 9.0)), op);
  EXPECT_THROW(solve_kriging_kernels(pre, op), DegenerateModel);
}

TEST(Kriging, KernelsSolveTheLowResolutionSystem) {
  for (int r : {2, 4}) {
    KrigingPrecomputation pre;
    const KrigingKernels kk = solve_for(synthetic_texture(16, 16, 1, 100 + r), r, &pre);
    for (int k = 0; k < r; ++k)
      for (int l = 0; l < r; ++l) {
        const GridImage lam = idft2(kk.lambda(k, l));
        const GridImage b = subsample(circular_shift(pre.c_gamma, k, l), r);
        const double scale = std::max(1.0, max_abs(b));
        EXPECT_LE(max_abs_diff(conv2_periodic(pre.kappa, lam), b), 1e-8 * scale)
            << "r=" << r << " k=" << k << " l=" << l;
      }
  }
}

TEST(Kriging, KappaSpectrumIsRealAndNonNegative) {
  const KrigingKernels kk = solve_for(synthetic_texture(32, 32, 3, 7), 4);
  for (int c = 0; c < 3; ++c) {
    double kmax = 0.0;
    for (const auto& z : kk.kappa_hat.plane(c)) kmax = std::max(kmax, std::abs(z));
    for (const auto& z : kk.kappa_hat.plane(c)) {
      EXPECT_LE(std::abs(z.imag()), 1e-9 * kmax);
      EXPECT_GE(z.real(), -1e-9 * kmax);
    }
    EXPECT_TRUE(kk.masked(c, 0, 0));
  }
}

TEST(Kriging, MatchesDenseMinimumNormSolution) {
  struct Case { int size, r; };
  for (const Case cs : {Case{8, 2}, Case{16, 2}, Case{16, 4}}) {
    const GridImage ref = synthetic_texture(cs.size, cs.size, 1, 200 + cs.size + cs.r);
    const KrigingKernels kk = solve_for(ref, cs.r);
    const DegradeOperator op = build_downscale_kernel(cs.r);
    const auto a = oracle::dense_degrade_matrix(op, cs.size, cs.size);
    const auto gamma = oracle::dense_covariance_matrix(covariance_texton(compute_texton(ref)));
    const auto lambda = oracle::dense_solve_kriging(a, gamma);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const GridImage y = random_image(cs.size / cs.r, cs.size / cs.r, 1, s, -50.0, 50.0);
      const Eigen::VectorXd dense = lambda.entries.transpose() * oracle::vectorize(y);
      const Eigen::VectorXd fast = oracle::vectorize(apply_kriging(kk, y));
      EXPECT_LE((dense - fast).cwiseAbs().maxCoeff(), 1e-7 * std::max(1.0, dense.cwiseAbs().maxCoeff()))
          << cs.size << "/" << cs.r;
    }
  }
}

TEST(Kriging, InterpolatesZeroMeanData) {
  const int r = 4;
  const KrigingKernels kk = solve_for(synthetic_texture(32, 32, 3, 8), r);
  const GridImage y = zero_mean(random_image(8, 8, 3, 9, 0.0, 255.0));
  EXPECT_LE(max_abs_diff(apply_degrade(build_downscale_kernel(r), apply_kriging(kk, y)), y), 1e-7);
}

TEST(Kriging, FactorOneIsIdentityOnZeroMeanImages) {
  const KrigingKernels kk = solve_for(synthetic_texture(12, 12, 1, 10), 1);
  const GridImage y = zero_mean(random_image(12, 12, 1, 11, 0.0, 255.0));
  EXPECT_LE(max_abs_diff(apply_kriging(kk, y), y), 1e-8);
}

TEST(Kriging, EquivariantUnderLowResolutionShifts) {
  const int r = 2;
  const KrigingKernels kk = solve_for(synthetic_texture(16, 24, 1, 12), r);
  const GridImage y = random_image(8, 12, 1, 13);
  EXPECT_LE(max_abs_diff(apply_kriging(kk, circular_shift(y, 3, 5)),
                         circular_shift(apply_kriging(kk, y), r * 3, r * 5)),
            1e-10);
}

TEST(Kriging, RejectsWrongInputShape) {
  const KrigingKernels kk = solve_for(synthetic_texture(16, 16, 1, 14), 2);
  EXPECT_THROW(apply_kriging(kk, GridImage(8, 7)), SizeMismatch);
  EXPECT_THROW(apply_kriging(kk, GridImage(8, 8, 3)), ChannelMismatch);
}

class KernelCacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("gsr_cache_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  void write(const std::filesystem::path& p, const std::string& data) {
    std::ofstream(p, std::ios::binary) << data;
  }

  std::filesystem::path dir_;
};

TEST_F(KernelCacheTest, RoundTripIsExact) {
  const KrigingKernels kk = solve_for(synthetic_texture(16, 8, 3, 15), 2);
  save_kernels(kk, dir_ / "k.bin");
  const KrigingKernels back = load_kernels(dir_ / "k.bin");
  EXPECT_EQ(back.r, kk.r);
  EXPECT_EQ(back.hr_height, 16);
  EXPECT_EQ(back.hr_width, 8);
  EXPECT_EQ(back.tol_rel, kk.tol_rel);
  ASSERT_EQ(back.lambda_hat.size(), kk.lambda_hat.size());
  for (std::size_t i = 0; i < kk.lambda_hat.size(); ++i)
    EXPECT_EQ(back.lambda_hat[i].values(), kk.lambda_hat[i].values());
  EXPECT_EQ(back.kappa_hat.values(), kk.kappa_hat.values());
  EXPECT_EQ(back.zero_mask, kk.zero_mask);
}

TEST_F(KernelCacheTest, RejectsDamagedFiles) {
  save_kernels(solve_for(synthetic_texture(8, 8, 1, 16), 2), dir_ / "k.bin");
  const std::string good = bytes(dir_ / "k.bin");

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  write(dir_ / "magic.bin", bad_magic);
  EXPECT_THROW(load_kernels(dir_ / "magic.bin"), CorruptFile);

  std::string bad_version = good;
  bad_version[4] = 9;
  write(dir_ / "version.bin", bad_version);
  EXPECT_THROW(load_kernels(dir_ / "version.bin"), CorruptFile);

  write(dir_ / "short.bin", good.substr(0, good.size() - 5));
  EXPECT_THROW(load_kernels(dir_ / "short.bin"), CorruptFile);

  write(dir_ / "long.bin", good + "x");
  EXPECT_THROW(load_kernels(dir_ / "long.bin"), CorruptFile);

  EXPECT_THROW(load_kernels(dir_ / "missing.bin"), DataError);
}

}  // namespace
}  // namespace gsr
