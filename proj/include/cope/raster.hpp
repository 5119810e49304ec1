#pragma once

#include <cstdint>
#include <vector>

#include "cope/error.hpp"

namespace cope {

// Axis-aligned pixel region inside a source raster.
struct RegionOfInterest {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;
};

// 8-bit interleaved RGB raster, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    const std::uint8_t* row(int y) const { return pixels_.data() + static_cast<std::size_t>(y) * width_ * 3; }
    std::uint8_t* row(int y) { return pixels_.data() + static_cast<std::size_t>(y) * width_ * 3; }

    // Pointer to the R byte of pixel (x, y); G and B follow.
    const std::uint8_t* at(int x, int y) const { return row(y) + 3 * x; }
    std::uint8_t* at(int x, int y) { return row(y) + 3 * x; }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::uint8_t* p = at(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
    std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// Hue plane on the half-degree scale: values in [0, 179]. The paper's
// 20..90 vegetation band assumes this convention (full circle = 360
// degrees mapped to 0..179), so it is fixed here and documented in the
// CLI help.
class HueImage {
public:
    HueImage() = default;
    HueImage(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    const std::uint8_t* row(int y) const { return hue_.data() + static_cast<std::size_t>(y) * width_; }
    std::uint8_t* row(int y) { return hue_.data() + static_cast<std::size_t>(y) * width_; }

    std::uint8_t at(int x, int y) const { return row(y)[x]; }
    void set(int x, int y, std::uint8_t h) { row(y)[x] = h; }

    const std::vector<std::uint8_t>& values() const noexcept { return hue_; }
    std::vector<std::uint8_t>& values() noexcept { return hue_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> hue_;
};

// Binary plant segmentation mask; every byte is 0 or 1.
class PlantMask {
public:
    PlantMask() = default;
    PlantMask(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    const std::uint8_t* row(int y) const { return bits_.data() + static_cast<std::size_t>(y) * width_; }
    std::uint8_t* row(int y) { return bits_.data() + static_cast<std::size_t>(y) * width_; }

    std::uint8_t at(int x, int y) const { return row(y)[x]; }
    void set(int x, int y, std::uint8_t v) { row(y)[x] = v; }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::vector<std::uint8_t>& bits() noexcept { return bits_; }

    std::uint64_t count_ones() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

void validate_roi(const RegionOfInterest& roi, int src_width, int src_height);

RgbImage crop(const RgbImage& img, const RegionOfInterest& roi);
PlantMask crop(const PlantMask& mask, const RegionOfInterest& roi);

// RGB -> hue on the [0, 179] scale. Achromatic pixels (max == min) map
// to hue 0, which the default 20..90 band excludes.
HueImage to_hue(const RgbImage& img);

// Mask is 1 exactly where lo <= hue <= hi. Defaults follow the
// experimentally determined vegetation band.
PlantMask segment_hue_threshold(const HueImage& h, int lo = 20, int hi = 90);

// Single Otsu threshold on the 180-bin hue histogram; pixels above the
// threshold become 1. A constant image yields an all-zero mask.
PlantMask segment_otsu(const HueImage& h);

}  // namespace cope
