#include "cope/kernels.hpp"

namespace cope::kernels::detail {

namespace {

// Hue in half-degree units, exact integer arithmetic. The fractional
// part 30*diff/delta is rounded half away from zero; truncating integer
// division of (60*diff +/- delta) by (2*delta) realizes that for either
// sign of diff.
inline std::uint8_t hue_of(int r, int g, int b) {
    int mx = r > g ? r : g;
    if (b > mx) mx = b;
    int mn = r < g ? r : g;
    if (b < mn) mn = b;
    int delta = mx - mn;
    if (delta == 0) return 0;

    int base;
    int diff;
    if (mx == r) {
        base = 0;
        diff = g - b;
    } else if (mx == g) {
        base = 60;
        diff = b - r;
    } else {
        base = 120;
        diff = r - g;
    }
    int num = 60 * diff + (diff >= 0 ? delta : -delta);
    int h = base + num / (2 * delta);
    if (h < 0) h += 180;
    return static_cast<std::uint8_t>(h);
}

}  // namespace

void hue_from_rgb_scalar(const std::uint8_t* rgb, std::size_t n, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = hue_of(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
    }
}

void band_mask_scalar(const std::uint8_t* hue, std::size_t n, std::uint8_t lo, std::uint8_t hi,
                      std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (hue[i] >= lo && hue[i] <= hi) ? 1 : 0;
    }
}

void row_sums_scalar(const std::uint8_t* mask, std::size_t stride, int width, int height,
                     std::uint32_t* out) {
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = mask + static_cast<std::size_t>(y) * stride;
        std::uint32_t sum = 0;
        for (int x = 0; x < width; ++x) sum += row[x];
        out[y] = sum;
    }
}

void column_sums_scalar(const std::uint8_t* mask, std::size_t stride, int width, int height,
                        std::uint32_t* out) {
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = mask + static_cast<std::size_t>(y) * stride;
        for (int x = 0; x < width; ++x) out[x] += row[x];
    }
}

}  // namespace cope::kernels::detail
