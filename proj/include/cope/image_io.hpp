#pragma once

#include <string>

#include "cope/raster.hpp"

namespace cope {

// Decodes an 8-bit RGB raster. PNG (including palette) and baseline
// TIFF (uncompressed or deflate strips) are accepted; the format is
// detected from magic bytes, not the file name.
RgbImage load_image(const std::string& path);

// Decodes a single-channel raster (8-bit gray PNG, or PGM) into a
// binary mask; any nonzero pixel counts as plant. Multi-channel input
// is rejected.
PlantMask load_mask(const std::string& path);

void save_png_rgb(const RgbImage& img, const std::string& path);

// Mask writers emit 0/255 so files are viewable; load_mask maps any
// nonzero value back to 1. Chooses PGM when the path ends in .pgm,
// PNG otherwise.
void save_mask(const PlantMask& mask, const std::string& path);

}  // namespace cope
