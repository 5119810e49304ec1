#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cope/comb.hpp"
#include "cope/finetune.hpp"
#include "cope/image_io.hpp"
#include "cope/metrics.hpp"
#include "cope/plot_io.hpp"
#include "cope/range_sep.hpp"
#include "cope/raster.hpp"
#include "cope/row_sep.hpp"

namespace cope {

enum class InputKind { rgb, mask };
enum class Segmenter { hue_threshold, otsu };

// Everything a run needs; populated from the config file plus flag
// overrides by the CLI.
struct RunConfig {
    std::string input_path;
    InputKind input_kind = InputKind::rgb;

    std::optional<RegionOfInterest> roi;  // absent: whole image

    Segmenter segmenter = Segmenter::hue_threshold;
    int hue_lo = 20;
    int hue_hi = 90;

    PlanterSpec spec;
    FieldShape field;
    RowSepConfig weights;
    std::optional<SearchBox> search_box;  // absent: derived from the ROI

    std::string output_dir;
    bool overlay = false;
    bool debug_csv = false;
    int workers = 0;               // 0: all hardware threads
    std::string kernel_backend;    // "", "scalar", "avx2"

    void validate() const;
};

// Reads a run config from a flat key=value file. Keys match the long
// CLI flag names (input, kind, roi, segmenter, hue-lo, hue-hi, c,
// d-crop, d-row, d-gap, d-ran-gap, rows, ranges, w0, w1, w2,
// range-search, out, overlay, debug-csv, workers, kernel). [section]
// headers group lines cosmetically and are ignored; # and ; start
// comments. Unknown keys are validation errors.
RunConfig load_run_config_ini(const std::string& path);

// In-memory pipeline on a ready mask: profiles, range separation, per
// range layout, fine-tuning.
struct ExtractResult {
    PlotGrid grid;
    RangeSeparation ranges;
    std::vector<CropSetLayout> layouts;
    std::vector<std::pair<std::string, double>> timings;  // stage, seconds
};

ExtractResult extract_from_mask(const PlantMask& mask, const PlanterSpec& spec,
                                const FieldShape& field, const RowSepConfig& weights,
                                const std::optional<SearchBox>& box = std::nullopt,
                                int workers = 1);

// Full run: load, crop, segment, extract, write artifacts (plots.json,
// plots.csv, report.json, optional overlay.png and debug CSVs).
struct RunResult {
    ExtractResult extract;
    RegionOfInterest roi;
    std::string json_path;
    std::string csv_path;
    std::string overlay_path;  // empty when overlay is off
    std::string report_path;
};

RunResult run(const RunConfig& cfg);

struct EvalReport {
    double mean = 0.0;
    bool has_empty_split = false;
    double mean_non_empty = 0.0;
    std::vector<double> per_plot;  // ground-truth order
    int deciles[10] = {0};
    int below_half = 0;

    std::string text() const;
};

EvalReport evaluate_files(const std::string& plots_path, const std::string& truth_path);
EvalReport evaluate_sets(const std::vector<GroundTruthPlot>& extracted,
                         const GroundTruthGrid& truth);

// Fig-13 style rendering: plots filled from a fixed 8-color palette
// keyed by (row + range) mod 8, with solid borders.
RgbImage render_overlay(const RgbImage& base, const PlotFile& plots);

// Green-on-black rendering of a mask, for overlays on mask input.
RgbImage mask_to_rgb(const PlantMask& mask);

}  // namespace cope
