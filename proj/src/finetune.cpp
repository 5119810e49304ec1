#include "cope/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cope/error.hpp"
#include "cope/kernels.hpp"
#include "cope/parallel.hpp"

namespace cope {

PlotGrid build_grid(const std::vector<CropSetLayout>& layouts, const RangeSeparation& ranges,
                    const PlanterSpec& spec, const FieldShape& field) {
    if (static_cast<int>(layouts.size()) != field.n_ranges) {
        throw ValidationError("build_grid: expected one layout per range");
    }
    PlotGrid grid;
    grid.m_rows = field.m_rows;
    grid.n_ranges = field.n_ranges;
    grid.spec = spec;
    grid.plots.reserve(static_cast<std::size_t>(field.m_rows) * field.n_ranges);
    for (int z = 0; z < field.n_ranges; ++z) {
        const auto& bounds = layouts[static_cast<std::size_t>(z)].plot_boundaries;
        for (int m = 0; m < field.m_rows; ++m) {
            PlotBoundary p;
            p.row = m;
            p.range = z;
            p.x_left = bounds[static_cast<std::size_t>(m)];
            p.x_right = bounds[static_cast<std::size_t>(m) + 1];
            p.y_top = ranges.adjusted[static_cast<std::size_t>(z)];
            p.y_bot = ranges.adjusted[static_cast<std::size_t>(z) + 1];
            p.y_top_tuned = p.y_top;
            p.y_bot_tuned = p.y_bot;
            grid.plots.push_back(p);
        }
    }
    return grid;
}

EnergyProfile local_range_energy(const PlantMask& mask, const PlotBoundary& plot, int d_ran_gap) {
    int x_lo = std::max(0, static_cast<int>(std::ceil(plot.x_left)));
    int x_hi = std::min(mask.width() - 1, static_cast<int>(std::floor(plot.x_right)));
    if (x_lo > x_hi) {
        throw ValidationError("local_range_energy: degenerate plot column band (row " +
                              std::to_string(plot.row) + ", range " + std::to_string(plot.range) +
                              ")");
    }
    int y_lo = std::max(0, plot.y_top - d_ran_gap);
    int y_hi = std::min(mask.height() - 1, plot.y_bot + d_ran_gap);
    if (y_lo > y_hi) {
        throw ValidationError("local_range_energy: window outside mask (row " +
                              std::to_string(plot.row) + ", range " + std::to_string(plot.range) +
                              ")");
    }

    EnergyProfile p;
    p.axis = Axis::along_y;
    p.origin = y_lo;
    p.values.assign(static_cast<std::size_t>(y_hi - y_lo + 1), 0);
    kernels::row_sums(mask.row(y_lo) + x_lo, static_cast<std::size_t>(mask.width()),
                      x_hi - x_lo + 1, y_hi - y_lo + 1, p.values.data());
    return p;
}

int tune_boundary(const EnergyProfile& local, int y, int d_ran_gap, const TriangleKernel& tri) {
    if (d_ran_gap <= 0) return y;
    NormalizedProfile norm = normalize(local);
    const int len = norm.length();
    const int r = tri.radius();

    // Same-length zero-padded smoothing.
    std::vector<double> smoothed(static_cast<std::size_t>(len), 0.0);
    for (int i = 0; i < len; ++i) {
        double acc = 0.0;
        int t_lo = std::max(-r, -i);
        int t_hi = std::min(r, len - 1 - i);
        for (int t = t_lo; t <= t_hi; ++t) {
            acc += norm.values[static_cast<std::size_t>(i + t)] *
                   tri.samples[static_cast<std::size_t>(r + t)];
        }
        smoothed[static_cast<std::size_t>(i)] = acc;
    }

    double best = std::numeric_limits<double>::infinity();
    int best_delta = 0;
    bool found = false;
    auto consider = [&](int delta) {
        int idx = y + delta - norm.origin;
        if (idx < 0 || idx >= len) return;
        double v = smoothed[static_cast<std::size_t>(idx)];
        if (!found || v < best) {
            found = true;
            best = v;
            best_delta = delta;
        }
    };
    consider(0);
    for (int mag = 1; mag <= d_ran_gap; ++mag) {
        consider(-mag);
        consider(mag);
    }
    return y + best_delta;
}

PlotGrid finetune_grid(const PlantMask& mask, const PlotGrid& grid, int workers) {
    PlotGrid out = grid;
    const int d = grid.spec.d_ran_gap;
    if (d <= 0) return out;
    const TriangleKernel tri = build_triangle(d);
    parallel_tasks(workers, static_cast<int>(out.plots.size()), [&](int i) {
        PlotBoundary& p = out.plots[static_cast<std::size_t>(i)];
        EnergyProfile local = local_range_energy(mask, p, d);
        int top = tune_boundary(local, p.y_top, d, tri);
        int bot = tune_boundary(local, p.y_bot, d, tri);
        if (top < bot) {
            p.y_top_tuned = top;
            p.y_bot_tuned = bot;
        } else {
            p.y_top_tuned = p.y_top;
            p.y_bot_tuned = p.y_bot;
            p.flagged = true;
        }
    });
    return out;
}

}  // namespace cope
