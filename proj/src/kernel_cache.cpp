#include "gsr/kernel_cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "gsr/errors.hpp"

namespace gsr {
namespace {

static_assert(std::endian::native == std::endian::little,
              "kernel cache I/O assumes a little-endian host");

constexpr char kMagic[4] = {'G', 'S', 'R', 'K'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw CorruptFile("kernel cache truncated");
  return v;
}

void put_spectrum(std::ofstream& out, const SpectralImage& s) {
  out.write(reinterpret_cast<const char*>(s.values().data()),
            static_cast<std::streamsize>(s.size() * sizeof(Complex)));
}

void take_spectrum(std::ifstream& in, SpectralImage& s) {
  if (!in.read(reinterpret_cast<char*>(s.values().data()),
               static_cast<std::streamsize>(s.size() * sizeof(Complex)))) {
    throw CorruptFile("kernel cache truncated");
  }
}

}  // namespace

void save_kernels(const KrigingKernels& kk, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write kernel cache " + path.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kKernelCacheVersion);
  put<std::uint32_t>(out, kk.hr_height);
  put<std::uint32_t>(out, kk.hr_width);
  put<std::uint32_t>(out, kk.r);
  put<std::uint32_t>(out, kk.channels());
  put<double>(out, kk.tol_rel);
  for (const auto& lam : kk.lambda_hat) put_spectrum(out, lam);
  put_spectrum(out, kk.kappa_hat);
  out.write(reinterpret_cast<const char*>(kk.zero_mask.data()),
            static_cast<std::streamsize>(kk.zero_mask.size()));
  if (!out) throw IoError("failed writing kernel cache " + path.string());
}

KrigingKernels load_kernels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open kernel cache " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw CorruptFile("not a kernel cache: " + path.string());
  }
  if (take<std::uint32_t>(in) != kKernelCacheVersion) throw CorruptFile("unsupported kernel cache version");
  KrigingKernels kk;
  kk.hr_height = static_cast<int>(take<std::uint32_t>(in));
  kk.hr_width = static_cast<int>(take<std::uint32_t>(in));
  kk.r = static_cast<int>(take<std::uint32_t>(in));
  const int channels = static_cast<int>(take<std::uint32_t>(in));
  kk.tol_rel = take<double>(in);
  if (kk.r < 1 || channels < 1 || kk.hr_height < 1 || kk.hr_width < 1 || kk.hr_height % kk.r != 0 ||
      kk.hr_width % kk.r != 0 || channels > 4) {
    throw CorruptFile("kernel cache header is inconsistent");
  }
  const int lm = kk.hr_height / kk.r;
  const int ln = kk.hr_width / kk.r;
  for (int s = 0; s < kk.r * kk.r; ++s) {
    SpectralImage lam(lm, ln, channels);
    take_spectrum(in, lam);
    kk.lambda_hat.push_back(std::move(lam));
  }
  kk.kappa_hat = SpectralImage(lm, ln, channels);
  take_spectrum(in, kk.kappa_hat);
  kk.zero_mask.resize(static_cast<std::size_t>(lm) * ln * channels);
  if (!in.read(reinterpret_cast<char*>(kk.zero_mask.data()),
               static_cast<std::streamsize>(kk.zero_mask.size()))) {
    throw CorruptFile("kernel cache truncated");
  }
  if (in.peek() != std::ifstream::traits_type::eof()) throw CorruptFile("kernel cache has trailing data");
  return kk;
}

}  // namespace gsr
