#include "cope/comb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "cope/error.hpp"

namespace cope {

void PlanterSpec::validate() const {
    if (c_rows < 1) throw ValidationError("planter spec: C must be >= 1");
    if (d_crop <= 0) throw ValidationError("planter spec: d_crop must be positive");
    if (d_row <= 0) throw ValidationError("planter spec: d_row must be positive");
    if (d_gap <= 0) throw ValidationError("planter spec: d_gap must be positive");
    if (d_gap >= d_row) throw ValidationError("planter spec: d_gap must be smaller than d_row");
    if (d_ran_gap < 0) throw ValidationError("planter spec: d_ran_gap must be >= 0");
}

std::vector<std::string> PlanterSpec::warnings() const {
    std::vector<std::string> notes;
    if (std::abs(d_crop - c_rows * d_row) > d_gap) {
        notes.push_back("d_crop (" + std::to_string(d_crop) + ") differs from C*d_row (" +
                        std::to_string(c_rows * d_row) + ") by more than d_gap; check the measured geometry");
    }
    return notes;
}

CombFunction build_comb(const PlanterSpec& spec) {
    spec.validate();
    CombFunction comb;
    comb.samples.assign(static_cast<std::size_t>(spec.d_crop), 0.0);
    comb.spike_positions.reserve(static_cast<std::size_t>(spec.c_rows) + 1);
    for (int k = 0; k <= spec.c_rows; ++k) {
        int pos = k * spec.d_row;
        if (pos > spec.d_crop) {
            throw ValidationError("comb spike " + std::to_string(k) + " at " + std::to_string(pos) +
                                  " lies beyond the crop-set width " + std::to_string(spec.d_crop));
        }
        pos = std::min(pos, spec.d_crop - 1);
        comb.spike_positions.push_back(pos);
        comb.samples[static_cast<std::size_t>(pos)] = 1.0;
    }
    return comb;
}

TriangleKernel build_triangle(int width) {
    if (width < 1) throw ValidationError("triangle width must be >= 1");
    int n = width % 2 == 1 ? width : width + 1;
    TriangleKernel tri;
    tri.width = n;
    tri.samples.resize(static_cast<std::size_t>(n));
    int r = n / 2;
    for (int i = 0; i < n; ++i) {
        tri.samples[static_cast<std::size_t>(i)] =
            1.0 - static_cast<double>(std::abs(i - r)) / static_cast<double>(r + 1);
    }
    return tri;
}

CombFunction modify_comb(const CombFunction& comb, const TriangleKernel& tri) {
    CombFunction out;
    out.spike_positions = comb.spike_positions;
    const int n = comb.length();
    const int r = tri.radius();
    out.samples.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int t = -r; t <= r; ++t) {
            int k = i + t;
            if (k < 0 || k >= n) continue;
            acc += comb.samples[static_cast<std::size_t>(k)] *
                   tri.samples[static_cast<std::size_t>(r - t)];
        }
        out.samples[static_cast<std::size_t>(i)] = std::min(1.0, acc);
    }
    return out;
}

}  // namespace cope
