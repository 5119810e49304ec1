#pragma once

#include <string>
#include <vector>

#include "cope/comb.hpp"
#include "cope/profile.hpp"
#include "cope/range_sep.hpp"
#include "cope/row_sep.hpp"

namespace cope {

// One extracted plot. Row boundaries are continuous (inter-set
// midpoints can land on half pixels); range boundaries stay on the
// pixel grid.
struct PlotBoundary {
    int row = 0;     // m in [0, M)
    int range = 0;   // z in [0, N)
    double x_left = 0.0;
    double x_right = 0.0;
    int y_top = 0;
    int y_bot = 0;
    int y_top_tuned = 0;
    int y_bot_tuned = 0;
    bool flagged = false;  // tuning reverted (would have inverted the plot)
};

// Complete M x N extraction result.
struct PlotGrid {
    int m_rows = 0;
    int n_ranges = 0;
    std::vector<PlotBoundary> plots;  // indexed range-major: z * M + m
    PlanterSpec spec;
    std::string provenance;  // config echo set by the pipeline

    PlotBoundary& at(int row, int range) {
        return plots[static_cast<std::size_t>(range) * m_rows + row];
    }
    const PlotBoundary& at(int row, int range) const {
        return plots[static_cast<std::size_t>(range) * m_rows + row];
    }
};

// Assembles the untuned grid from per-range layouts and the range
// separation lines (tuned values start equal to the untuned ones).
PlotGrid build_grid(const std::vector<CropSetLayout>& layouts, const RangeSeparation& ranges,
                    const PlanterSpec& spec, const FieldShape& field);

// Plant counts per row over the plot's column band, across the window
// [y_top - d_ran_gap, y_bot + d_ran_gap] clamped to the mask.
EnergyProfile local_range_energy(const PlantMask& mask, const PlotBoundary& plot, int d_ran_gap);

// Normalizes the local profile, smooths it with the triangle, and scans
// integer moves within +/- d_ran_gap of y. Ties break toward the
// smallest |move|, negative first.
int tune_boundary(const EnergyProfile& local, int y, int d_ran_gap, const TriangleKernel& tri);

// Tunes every plot's top and bottom boundary independently; a plot whose
// tuned boundaries would invert reverts to the untuned ones and is
// flagged.
PlotGrid finetune_grid(const PlantMask& mask, const PlotGrid& grid, int workers = 1);

}  // namespace cope
