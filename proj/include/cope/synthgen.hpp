#pragma once

#include <cstdint>
#include <vector>

#include "cope/comb.hpp"
#include "cope/metrics.hpp"
#include "cope/raster.hpp"

namespace cope {

// Synthetic grid-planted field. Plants are i.i.d. random pixels inside
// plot rectangles (plant_density), everything else draws at
// noise_density. Ground-truth boundary lines follow the same
// boundary-line convention the extractor emits: crop-set edges at
// inter-set gap midpoints, fixed pitch inside a set, range lines at gap
// centers (shifted by half the germination jitter where it applies).
//
// Reproducibility contract: the generator is std::mt19937_64 seeded
// with `seed` (the engine's bit stream is fixed by the C++ standard),
// and draws happen in a fixed order: (1) crop-set offsets, range-major,
// when not supplied; (2) per plot, range-major then row-major, one
// empty-plot draw then one jitter draw; (3) one draw per pixel in
// row-major raster order. Identical config + seed produces identical
// mask bytes on every platform.
struct SynthConfig {
    PlanterSpec spec{4, 784, 196, 24, 100};
    int m_rows = 20;
    int n_ranges = 5;

    // True crop-set offsets per range ([z][i], M/C each). Empty: drawn
    // from the seed, first set in [d_gap/4, d_gap/2], others in
    // [-d_gap/4, d_gap/4].
    std::vector<std::vector<int>> crop_set_offsets;

    // N+1 nominal range boundary lines. Empty: guard_rows + z * range_pitch.
    std::vector<int> range_lines;
    int range_pitch = 520;
    int range_gap = 40;

    // Planted border above the first and below the last range, so the
    // field behaves like a region of interest cut from a larger field.
    int guard_rows = 200;

    double plant_density = 0.6;
    double noise_density = 0.01;
    double empty_plot_fraction = 0.0;
    int germination_jitter = 0;  // max per-plot downward shift of the material top
    std::uint64_t seed = 0;

    // 0 = derive from the geometry.
    int width = 0;
    int height = 0;

    void validate() const;
};

struct SynthResult {
    PlantMask mask;
    GroundTruthGrid truth;
    std::vector<std::vector<int>> offsets;  // offsets actually used
    std::vector<int> range_lines;           // lines actually used
    std::vector<int> jitter;                // per plot, range-major (z * M + m)
};

SynthResult generate(const SynthConfig& cfg);

}  // namespace cope
