#pragma once

#include <vector>

#include "cope/finetune.hpp"

namespace cope {

// Half-open pixel rectangle: width = x_right - x_left.
struct Rect {
    double x_left = 0.0;
    double x_right = 0.0;
    double y_top = 0.0;
    double y_bot = 0.0;

    double area() const noexcept { return (x_right - x_left) * (y_bot - y_top); }
};

struct GroundTruthPlot {
    int row = 0;
    int range = 0;
    Rect rect;
    bool empty = false;  // the plot was planted but has no plants
};

struct GroundTruthGrid {
    std::vector<GroundTruthPlot> plots;
};

// area(a intersect b) / area(a union b); rejects zero-area rectangles.
double iou(const Rect& a, const Rect& b);

Rect plot_rect(const PlotBoundary& p);

// Mean IoU over ground-truth plots, paired by (row, range). Every
// ground-truth key must exist in the grid.
double mean_iou(const PlotGrid& grid, const GroundTruthGrid& gt);

// Variant over two plain plot lists (the CLI evaluate path).
double mean_iou(const std::vector<GroundTruthPlot>& extracted, const GroundTruthGrid& gt);

// Per-plot IoU in ground-truth order, for reports and histograms.
std::vector<double> per_plot_iou(const std::vector<GroundTruthPlot>& extracted,
                                 const GroundTruthGrid& gt);

}  // namespace cope
