#include "gsr/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "gsr/errors.hpp"

namespace gsr {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Raw samples out of libpng; kept free of C++ objects across setjmp.
struct PngRaw {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int depth = 0;
  bool alpha = false;
  std::vector<png_byte> bytes;
};

void png_error_to_jmp(png_structp png, png_const_charp) { std::longjmp(png_jmpbuf(png), 1); }
void png_warning_ignore(png_structp, png_const_charp) {}

bool read_png(std::FILE* fp, PngRaw& raw) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_jmp, png_warning_ignore);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if ((color & PNG_COLOR_MASK_ALPHA) != 0 || png_get_valid(png, info, PNG_INFO_tRNS) != 0) {
    raw.alpha = true;
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
  }
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  raw.width = png_get_image_width(png, info);
  raw.height = png_get_image_height(png, info);
  raw.channels = png_get_channels(png, info);
  raw.depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  raw.bytes.resize(stride * raw.height);
  rows.resize(raw.height);
  for (png_uint_32 y = 0; y < raw.height; ++y) rows[y] = raw.bytes.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

GridImage load_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw CorruptFile(path.string() + " is not a PNG file");
  }
  std::rewind(fp.get());
  PngRaw raw;
  if (!read_png(fp.get(), raw)) throw CorruptFile("corrupt PNG: " + path.string());
  if (raw.alpha) throw AlphaNotSupported(path.string() + " has an alpha channel");
  if (raw.channels != 1 && raw.channels != 3) throw UnsupportedFormat("unsupported PNG layout in " + path.string());
  GridImage img(static_cast<int>(raw.height), static_cast<int>(raw.width), raw.channels);
  const int bytes_per = raw.depth == 16 ? 2 : 1;
  const double scale = raw.depth == 16 ? 255.0 / 65535.0 : 1.0;
  std::size_t idx = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < raw.channels; ++c, idx += bytes_per) {
        const unsigned v = bytes_per == 2 ? (raw.bytes[idx] << 8) | raw.bytes[idx + 1] : raw.bytes[idx];
        img(y, x, c) = raw.depth == 16 ? v * scale : static_cast<double>(v);
      }
  return img;
}

void save_png(const GridImage& img, const std::filesystem::path& path, int depth) {
  if (img.channels() != 1 && img.channels() != 3) throw UnsupportedFormat("PNG output needs 1 or 3 channels");
  const int bytes_per = depth == 16 ? 2 : 1;
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels() * bytes_per;
  std::vector<png_byte> bytes(stride * img.height());
  std::size_t idx = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) {
        const unsigned q = quantize(img(y, x, c), depth);
        if (bytes_per == 2) bytes[idx++] = static_cast<png_byte>(q >> 8);
        bytes[idx++] = static_cast<png_byte>(q & 0xff);
      }
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y) rows[y] = bytes.data() + y * stride;

  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_jmp, png_warning_ignore);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width(), img.height(), depth,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// Netpbm header token, skipping whitespace and comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

long pnm_number(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = pnm_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw CorruptFile("malformed PNM header in " + path.string());
  }
  return std::stol(tok);
}

GridImage load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
    throw UnsupportedFormat(path.string() + ": unsupported PNM variant '" + magic + "'");
  }
  const long width = pnm_number(in, path);
  const long height = pnm_number(in, path);
  const long maxval = pnm_number(in, path);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) throw CorruptFile("bad PNM header in " + path.string());
  const int channels = (magic == "P3" || magic == "P6") ? 3 : 1;
  const bool binary = magic == "P5" || magic == "P6";
  GridImage img(static_cast<int>(height), static_cast<int>(width), channels);
  const double scale = 255.0 / static_cast<double>(maxval);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < channels; ++c) {
        long v;
        if (binary) {
          int hi = in.get();
          if (maxval > 255) {
            int lo = in.get();
            if (lo == EOF) hi = EOF;
            v = (static_cast<long>(hi) << 8) | lo;
          } else {
            v = hi;
          }
          if (hi == EOF) throw CorruptFile("truncated PNM data in " + path.string());
        } else {
          v = pnm_number(in, path);
        }
        if (v > maxval) throw CorruptFile("PNM sample above maxval in " + path.string());
        img(y, x, c) = maxval == 255 ? static_cast<double>(v) : v * scale;
      }
  return img;
}

void save_pnm(const GridImage& img, const std::filesystem::path& path, int depth, bool color) {
  if (img.channels() != (color ? 3 : 1)) {
    throw UnsupportedFormat(path.string() + ": PGM needs 1 channel, PPM needs 3");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << (color ? "P6" : "P5") << '\n' << img.width() << ' ' << img.height() << '\n'
      << (depth == 16 ? 65535 : 255) << '\n';
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) {
        const unsigned q = quantize(img(y, x, c), depth);
        if (depth == 16) out.put(static_cast<char>(q >> 8));
        out.put(static_cast<char>(q & 0xff));
      }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

unsigned quantize(double value, int depth) {
  const double clamped = std::clamp(value, 0.0, 255.0);
  const double scaled = depth == 16 ? clamped * (65535.0 / 255.0) : clamped;
  return static_cast<unsigned>(std::round(scaled));
}

GridImage load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::ifstream probe(path, std::ios::binary);
  char head[2] = {0, 0};
  probe.read(head, 2);
  probe.close();
  if (static_cast<unsigned char>(head[0]) == 0x89 && head[1] == 'P') return load_png(path);
  if (head[0] == 'P' && head[1] >= '1' && head[1] <= '9') return load_pnm(path);
  throw UnsupportedFormat(path.string() + ": expected PNG, PGM or PPM");
}

void save_image(const GridImage& img, const std::filesystem::path& path, int depth) {
  if (depth != 8 && depth != 16) throw UnsupportedFormat("bit depth must be 8 or 16");
  if (!all_finite(img)) throw DataError("save_image: non-finite values");
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    save_png(img, path, depth);
  } else if (ext == ".pgm" || ext == ".ppm") {
    save_pnm(img, path, depth, ext == ".ppm");
  } else {
    throw UnsupportedFormat("unknown output extension '" + ext + "' (use .png, .pgm or .ppm)");
  }
}

}  // namespace gsr
