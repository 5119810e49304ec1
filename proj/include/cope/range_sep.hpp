#pragma once

#include <vector>

#include "cope/profile.hpp"

namespace cope {

// Search region for the equidistant fit. The paper does not constrain
// (y0, dy); these bounds exist so every candidate keeps all N+1 lines
// inside the profile, and they are overridable from the CLI config.
struct SearchBox {
    int y0_min = 0;
    int y0_max = 0;
    double dy_min = 0.5;
    double dy_max = 0.5;
};

SearchBox default_search_box(int profile_len, int n_ranges);

struct EquidistantFit {
    int y0 = 0;
    double delta_y = 0.0;
};

// N+1 horizontal range-separation lines: the equidistant fit and the
// per-line adjusted positions.
struct RangeSeparation {
    std::vector<int> equidistant;
    std::vector<int> adjusted;
    double delta_y = 0.0;

    int n_ranges() const noexcept { return static_cast<int>(adjusted.size()) - 1; }
};

// Minimizes sum over n = 0..N of h_ra(y0 + n*dy) by exhaustive scan:
// integer y0 over the box, dy on a half-pixel grid, samples rounded to
// the nearest pixel. Ties break toward the smallest y0, then the
// smallest dy.
EquidistantFit fit_equidistant(const EnergyProfile& h_ra, int n_ranges, const SearchBox& box,
                               int workers = 1);

// Moves each line to the profile minimum within +/- d_ran_gap (integer
// scan, clamped to the profile). Ties break toward the smallest |delta|,
// negative before positive.
std::vector<int> adjust_lines(const EnergyProfile& h_ra, const std::vector<int>& equidistant,
                              int d_ran_gap);

// fit + adjust + strict monotonicity check on the adjusted lines.
RangeSeparation separate_ranges(const EnergyProfile& h_ra, int n_ranges, const SearchBox& box,
                                int d_ran_gap, int workers = 1);

}  // namespace cope
