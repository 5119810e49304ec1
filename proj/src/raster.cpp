#include "cope/raster.hpp"

#include <array>
#include <cstring>

#include "cope/kernels.hpp"

namespace cope {

namespace {

void check_dims(int width, int height, const char* what) {
    if (width <= 0 || height <= 0) {
        throw ValidationError(std::string(what) + ": dimensions must be positive, got " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
    check_dims(width, height, "RgbImage");
    pixels_.assign(static_cast<std::size_t>(width) * height * 3, 0);
}

HueImage::HueImage(int width, int height) : width_(width), height_(height) {
    check_dims(width, height, "HueImage");
    hue_.assign(static_cast<std::size_t>(width) * height, 0);
}

PlantMask::PlantMask(int width, int height) : width_(width), height_(height) {
    check_dims(width, height, "PlantMask");
    bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::uint64_t PlantMask::count_ones() const {
    std::uint64_t total = 0;
    for (std::uint8_t v : bits_) total += v;
    return total;
}

void validate_roi(const RegionOfInterest& roi, int src_width, int src_height) {
    if (roi.width <= 0 || roi.height <= 0) {
        throw ValidationError("roi: width and height must be positive");
    }
    if (roi.x0 < 0 || roi.y0 < 0 || roi.x0 + roi.width > src_width ||
        roi.y0 + roi.height > src_height) {
        throw ValidationError("roi [" + std::to_string(roi.x0) + "," + std::to_string(roi.y0) +
                              " " + std::to_string(roi.width) + "x" + std::to_string(roi.height) +
                              "] exceeds raster bounds " + std::to_string(src_width) + "x" +
                              std::to_string(src_height));
    }
}

RgbImage crop(const RgbImage& img, const RegionOfInterest& roi) {
    validate_roi(roi, img.width(), img.height());
    RgbImage out(roi.width, roi.height);
    for (int y = 0; y < roi.height; ++y) {
        std::memcpy(out.row(y), img.at(roi.x0, roi.y0 + y),
                    static_cast<std::size_t>(roi.width) * 3);
    }
    return out;
}

PlantMask crop(const PlantMask& mask, const RegionOfInterest& roi) {
    validate_roi(roi, mask.width(), mask.height());
    PlantMask out(roi.width, roi.height);
    for (int y = 0; y < roi.height; ++y) {
        std::memcpy(out.row(y), mask.row(roi.y0 + y) + roi.x0,
                    static_cast<std::size_t>(roi.width));
    }
    return out;
}

HueImage to_hue(const RgbImage& img) {
    HueImage out(img.width(), img.height());
    kernels::hue_from_rgb(img.pixels().data(), img.pixels().size() / 3, out.values().data());
    return out;
}

PlantMask segment_hue_threshold(const HueImage& h, int lo, int hi) {
    if (lo < 0 || hi > 179 || lo > hi) {
        throw ValidationError("hue thresholds must satisfy 0 <= lo <= hi <= 179, got lo=" +
                              std::to_string(lo) + " hi=" + std::to_string(hi));
    }
    PlantMask out(h.width(), h.height());
    kernels::band_mask(h.values().data(), h.values().size(), static_cast<std::uint8_t>(lo),
                       static_cast<std::uint8_t>(hi), out.bits().data());
    return out;
}

PlantMask segment_otsu(const HueImage& h) {
    std::array<std::uint64_t, 180> hist{};
    for (std::uint8_t v : h.values()) {
        hist[v < 180 ? v : 179]++;
    }
    const std::uint64_t total = h.values().size();

    // Exhaustive between-class variance scan; class 0 is hue <= t.
    std::uint64_t count0 = 0;
    std::uint64_t sum0 = 0;
    std::uint64_t sum_all = 0;
    for (int v = 0; v < 180; ++v) sum_all += hist[static_cast<std::size_t>(v)] * static_cast<std::uint64_t>(v);

    double best_var = 0.0;
    int best_t = -1;
    for (int t = 0; t < 179; ++t) {
        count0 += hist[static_cast<std::size_t>(t)];
        sum0 += hist[static_cast<std::size_t>(t)] * static_cast<std::uint64_t>(t);
        std::uint64_t count1 = total - count0;
        if (count0 == 0 || count1 == 0) continue;
        double mu0 = static_cast<double>(sum0) / static_cast<double>(count0);
        double mu1 = static_cast<double>(sum_all - sum0) / static_cast<double>(count1);
        double var = static_cast<double>(count0) * static_cast<double>(count1) * (mu0 - mu1) *
                     (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }

    PlantMask out(h.width(), h.height());
    if (best_t < 0) return out;  // constant image: all zeros
    std::uint8_t* bits = out.bits().data();
    const std::uint8_t* vals = h.values().data();
    for (std::size_t i = 0; i < h.values().size(); ++i) {
        bits[i] = vals[i] > best_t ? 1 : 0;
    }
    return out;
}

}  // namespace cope
