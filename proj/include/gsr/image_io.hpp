#pragma once

#include <filesystem>

#include "gsr/grid.hpp"

namespace gsr {

/// Reads PNG (8/16-bit gray or RGB, palettes expanded) or binary/ASCII PGM/PPM.
/// Values are scaled to [0, 255]; 16-bit samples by 255/65535. Images with an
/// alpha channel or transparency chunk are rejected.
GridImage load_image(const std::filesystem::path& path);

/// Writes PNG, PGM (one channel) or PPM (three channels) by extension. Values
/// are clamped to [0, 255], scaled to the bit depth and rounded half away from zero.
void save_image(const GridImage& img, const std::filesystem::path& path, int depth = 8);

/// Quantization used by save_image for one value.
unsigned quantize(double value, int depth);

}  // namespace gsr
