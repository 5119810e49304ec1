#pragma once

#include <vector>

#include "cope/comb.hpp"
#include "cope/profile.hpp"
#include "cope/range_sep.hpp"

namespace cope {

// Weights of the three offset-objective terms. The paper leaves the
// values open; unit weights are the configurable default.
struct RowSepConfig {
    double w0 = 1.0;
    double w1 = 1.0;
    double w2 = 1.0;

    void validate() const;
};

// Field dimensions: M plot rows by N ranges. M must divide into whole
// crop sets.
struct FieldShape {
    int m_rows = 0;
    int n_ranges = 0;

    void validate(int c_rows) const;
};

// Horizontal layout of one range: crop-set offsets and the derived
// crop-set and plot boundary lines.
struct CropSetLayout {
    int range_index = 0;
    std::vector<int> offsets;              // delta-x per crop set
    std::vector<int> x_off;                // accumulated set starts, x_off[0] = 0
    std::vector<double> set_boundaries;    // M/C + 1 values
    std::vector<double> plot_boundaries;   // M + 1 values
};

// Returns the integer offset in [-d_gap, d_gap] minimizing
//   w0*dx^2/d_row^2 + (2/d_gap) * (w1*<f, local> + w2*<f, global>),
// where <f, h> aligns f's first sample with profile position
// x_off + dx and sums products over the crop-set width; profile samples
// outside the image contribute zero. Ties break toward the smallest
// |dx|, negative first.
int optimize_offset(const NormalizedProfile& local, const NormalizedProfile& global,
                    const CombFunction& comb, const PlanterSpec& spec, const RowSepConfig& cfg,
                    int x_off);

// Solves the M/C offset problems of one range left to right and derives
// its boundary lines. `y_lo`/`y_hi` bound the range band, inclusive.
CropSetLayout layout_range(const PlantMask& mask, int y_lo, int y_hi,
                           const NormalizedProfile& global_norm, const CombFunction& comb,
                           const PlanterSpec& spec, const FieldShape& field,
                           const RowSepConfig& cfg, int range_index = 0, int workers = 1);

// One layout per range; range z spans [adjusted[z], adjusted[z+1]].
std::vector<CropSetLayout> layout_field(const PlantMask& mask, const RangeSeparation& ranges,
                                        const CombFunction& comb, const PlanterSpec& spec,
                                        const FieldShape& field, const RowSepConfig& cfg,
                                        int workers = 1);

}  // namespace cope
