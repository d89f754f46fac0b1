#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gsr/errors.hpp"
#include "gsr/metrics.hpp"
#include "test_util.hpp"

namespace gsr {
namespace {

using testing::random_image;

TEST(Psnr, ReferenceValues) {
  EXPECT_NEAR(psnr(GridImage(16, 16, 1, 0.0), GridImage(16, 16, 1, 255.0)), 0.0, 1e-12);
  EXPECT_NEAR(psnr(GridImage(16, 16, 3, 100.0), GridImage(16, 16, 3, 125.5)), 20.0, 1e-12);
  EXPECT_NEAR(psnr(GridImage(8, 8, 1, 0.0), GridImage(8, 8, 1, 1.0), 1.0), 0.0, 1e-12);
  const GridImage x = random_image(12, 12, 3, 1, 0.0, 255.0);
  EXPECT_EQ(psnr(x, x), std::numeric_limits<double>::infinity());
}

TEST(Psnr, PoolsOverChannels) {
  GridImage a(4, 4, 2);
  GridImage b(4, 4, 2);
  for (auto& v : b.plane(1)) v = 255.0;  // MSE = 255^2 / 2 overall
  EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(2.0), 1e-12);
  EXPECT_THROW(psnr(a, GridImage(4, 5, 2)), SizeMismatch);
  EXPECT_THROW(psnr(a, GridImage(4, 4, 1)), ChannelMismatch);
}

TEST(Ssim, IdentityAndSymmetry) {
  const GridImage x = random_image(24, 20, 3, 2, 0.0, 255.0);
  const GridImage y = random_image(24, 20, 3, 3, 0.0, 255.0);
  EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
  EXPECT_NEAR(ssim(x, y), ssim(y, x), 1e-12);
  EXPECT_GE(ssim(x, y), -1.0);
  EXPECT_LE(ssim(x, y), 1.0);
  EXPECT_GE(ssim(x, 255.0 * GridImage(24, 20, 3, 1.0) - x), -1.0);
}

TEST(Ssim, OffsetLowersScore) {
  const GridImage x = random_image(16, 16, 1, 4, 50.0, 200.0);
  GridImage y = x;
  for (auto& v : y.values()) v += 40.0;
  EXPECT_LT(ssim(x, y), 1.0);
}

TEST(Ssim, DecreasesWithNoiseAmplitude) {
  const GridImage x = random_image(32, 32, 1, 5, 0.0, 255.0);
  const GridImage n = random_image(32, 32, 1, 6);
  double previous = 1.0;
  for (double amp : {1.0, 4.0, 16.0}) {
    const double s = ssim(x, x + amp * n);
    EXPECT_LT(s, previous) << amp;
    previous = s;
  }
}

TEST(Ssim, NeedsWindowSizedImages) {
  EXPECT_THROW(ssim(GridImage(10, 32), GridImage(10, 32)), TooSmall);
  EXPECT_NO_THROW(ssim(GridImage(11, 11), GridImage(11, 11)));
}

TEST(CompareImages, ReportsPerChannel) {
  const GridImage x = random_image(16, 16, 3, 7, 0.0, 255.0);
  GridImage y = x;
  for (auto& v : y.plane(2)) v += 10.0;
  const MetricReport rep = compare_images(x, y);
  ASSERT_EQ(rep.psnr_per_channel.size(), 3u);
  EXPECT_TRUE(std::isinf(rep.psnr_per_channel[0]));
  EXPECT_NEAR(rep.psnr_per_channel[2], 10.0 * std::log10(255.0 * 255.0 / 100.0), 1e-12);
  EXPECT_NEAR(rep.psnr_db, 10.0 * std::log10(3 * 255.0 * 255.0 / 100.0), 1e-12);
  EXPECT_NEAR(rep.ssim_per_channel[0], 1.0, 1e-12);
}

}  // namespace
}  // namespace gsr
