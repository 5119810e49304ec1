#pragma once

#include <string>
#include <vector>

namespace cope {

// Planting-pattern geometry in pixels. All of it comes from the field
// layout and the image resolution, measured once per planting pattern.
struct PlanterSpec {
    int c_rows = 1;       // rows planted per planter pass (C)
    int d_crop = 1;       // crop-set width
    int d_row = 1;        // plot pitch within a crop set
    int d_gap = 1;        // plot gap width
    int d_ran_gap = 100;  // range-boundary correction bound

    void validate() const;

    // Soft geometry checks (non-fatal); returns human-readable notes.
    std::vector<std::string> warnings() const;
};

// Sampled matched filter over one crop-set width. Raw form: unit spikes
// at plot-gap centers, zero elsewhere. Modified form: spikes widened by
// triangle convolution, clipped to [0, 1].
struct CombFunction {
    std::vector<double> samples;      // length d_crop
    std::vector<int> spike_positions; // C + 1 offsets, clamped to the comb

    int length() const noexcept { return static_cast<int>(samples.size()); }
};

// Symmetric unit-height triangle sampled at `width` points; even widths
// are widened to the next odd sample count.
struct TriangleKernel {
    int width = 1;
    std::vector<double> samples;

    int radius() const noexcept { return (static_cast<int>(samples.size()) - 1) / 2; }
    double sum() const noexcept {
        double s = 0;
        for (double v : samples) s += v;
        return s;
    }
};

// Spikes at k*d_row for k = 0..C; a final spike landing exactly at
// d_crop is clamped to the last sample, anything beyond is a spec error.
CombFunction build_comb(const PlanterSpec& spec);

TriangleKernel build_triangle(int width);

// Full convolution of comb and triangle, center-aligned, trimmed back to
// the crop-set width, clipped to [0, 1] where widened spikes overlap.
CombFunction modify_comb(const CombFunction& comb, const TriangleKernel& tri);

}  // namespace cope
