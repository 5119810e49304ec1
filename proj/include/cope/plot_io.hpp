#pragma once

#include <string>
#include <vector>

#include "cope/finetune.hpp"
#include "cope/metrics.hpp"
#include "cope/raster.hpp"

namespace cope {

// One plot in the interchange format. `rect` is ROI-local; `src_rect`
// is the same rectangle in source-image coordinates (equal when the ROI
// is the whole image).
struct PlotRecord {
    int row = 0;
    int range = 0;
    Rect rect;
    Rect src_rect;
    bool has_untuned = false;
    int y_top_untuned = 0;
    int y_bot_untuned = 0;
    bool flagged = false;
    bool empty = false;
};

// The single interchange format shared by extract, evaluate, synth and
// ground-truth labeling.
struct PlotFile {
    int rows = 0;
    int ranges = 0;
    RegionOfInterest roi;
    std::vector<PlotRecord> plots;
};

PlotFile plot_file_from_grid(const PlotGrid& grid, const RegionOfInterest& roi);
PlotFile plot_file_from_truth(const GroundTruthGrid& truth, int rows, int ranges, int width,
                              int height);
GroundTruthGrid truth_from_plot_file(const PlotFile& file);

void write_plot_json(const PlotFile& file, const std::string& path);
void write_plot_csv(const PlotFile& file, const std::string& path);

// Reads either format; JSON is detected by a leading '{'.
PlotFile read_plot_file(const std::string& path);

}  // namespace cope
