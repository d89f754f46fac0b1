#pragma once

#include <filesystem>

#include "gsr/kriging.hpp"

namespace gsr {

// On-disk KrigingKernels, all fields little-endian:
//   char[4] "GSRK", u32 version (1), u32 M, u32 N, u32 r, u32 channels, f64 tol_rel,
//   then for (k, l) in row-major [r]^2, for each channel: (M/r)(N/r) complex
//   doubles (re, im) of lambda^(k, l); then kappa^ per channel in the same layout;
//   then the zero mask as one byte per LR frequency per channel.
inline constexpr std::uint32_t kKernelCacheVersion = 1;

void save_kernels(const KrigingKernels& kk, const std::filesystem::path& path);

/// Throws CorruptFile on a malformed or truncated container.
KrigingKernels load_kernels(const std::filesystem::path& path);

}  // namespace gsr
