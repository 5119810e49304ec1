#pragma once

#include <cstdint>
#include <vector>

#include "cope/raster.hpp"

namespace cope {

enum class Axis {
    along_x,  // profile indexed by x (column counts)
    along_y,  // profile indexed by y (row counts)
};

// 1-D plant-pixel count signal projected along one image axis.
// `origin` is the pixel coordinate of values[0] in mask coordinates.
struct EnergyProfile {
    Axis axis = Axis::along_x;
    std::vector<std::uint32_t> values;
    int origin = 0;

    int length() const noexcept { return static_cast<int>(values.size()); }

    // Value at an absolute pixel coordinate; zero outside the profile.
    std::uint32_t at(int pos) const noexcept {
        int i = pos - origin;
        if (i < 0 || i >= length()) return 0;
        return values[static_cast<std::size_t>(i)];
    }

    std::uint64_t total() const noexcept {
        std::uint64_t s = 0;
        for (std::uint32_t v : values) s += v;
        return s;
    }
};

// Profile normalized to [0, 1]: value 1 wherever the raw count reaches
// the profile mean K, raw/K below it.
struct NormalizedProfile {
    Axis axis = Axis::along_x;
    std::vector<double> values;
    int origin = 0;

    int length() const noexcept { return static_cast<int>(values.size()); }

    double at(int pos) const noexcept {
        int i = pos - origin;
        if (i < 0 || i >= length()) return 0.0;
        return values[static_cast<std::size_t>(i)];
    }
};

// Per-row counts h_ra(y): values[y] = plant pixels in mask row y.
EnergyProfile range_energy(const PlantMask& mask, int workers = 1);

// Per-column counts over the whole mask.
EnergyProfile global_row_energy(const PlantMask& mask, int workers = 1);

// Per-column counts restricted to rows [y_lo, y_hi], both inclusive.
EnergyProfile local_row_energy(const PlantMask& mask, int y_lo, int y_hi, int workers = 1);

// K is the arithmetic mean over the full profile extent; an all-zero
// profile normalizes to all zeros rather than dividing by zero.
NormalizedProfile normalize(const EnergyProfile& p);

}  // namespace cope
