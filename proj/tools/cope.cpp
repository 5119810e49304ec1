// cope: comb-function plot extraction for grid-planted field rasters.
//
// Subcommands: extract, evaluate, synth, render-overlay, dump-profiles.
// Exit codes: 0 success, 1 validation error, 2 processing error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cope/error.hpp"
#include "cope/image_io.hpp"
#include "cope/kernels.hpp"
#include "cope/pipeline.hpp"
#include "cope/plot_io.hpp"
#include "cope/synthgen.hpp"

namespace {

struct RoiOpt {
    std::vector<int> v;

    std::optional<cope::RegionOfInterest> get() const {
        if (v.empty()) return std::nullopt;
        if (v.size() != 4) {
            throw cope::ValidationError("--roi needs four values: x0 y0 width height");
        }
        return cope::RegionOfInterest{v[0], v[1], v[2], v[3]};
    }
};

void add_planter_options(CLI::App* cmd, cope::PlanterSpec& spec) {
    cmd->add_option("--c", spec.c_rows, "Rows planted per planter pass (C)");
    cmd->add_option("--d-crop", spec.d_crop, "Crop-set width in pixels");
    cmd->add_option("--d-row", spec.d_row, "Plot pitch within a crop set, pixels");
    cmd->add_option("--d-gap", spec.d_gap, "Plot gap width, pixels");
    cmd->add_option("--d-ran-gap", spec.d_ran_gap, "Range boundary correction bound, pixels");
}

void add_segmentation_options(CLI::App* cmd, std::string& segmenter, int& hue_lo, int& hue_hi) {
    cmd->add_option("--segmenter", segmenter, "Plant segmentation strategy: hue or otsu")
        ->check(CLI::IsMember({"hue", "otsu"}));
    cmd->add_option("--hue-lo", hue_lo,
                    "Lower hue bound, 0..179 half-degree scale (vegetation default 20)");
    cmd->add_option("--hue-hi", hue_hi, "Upper hue bound, 0..179 half-degree scale (default 90)");
}

cope::PlantMask load_any_mask(const std::string& path, const std::string& kind,
                              const std::string& segmenter, int hue_lo, int hue_hi) {
    if (kind == "mask") return cope::load_mask(path);
    cope::HueImage hue = cope::to_hue(cope::load_image(path));
    return segmenter == "otsu" ? cope::segment_otsu(hue)
                               : cope::segment_hue_threshold(hue, hue_lo, hue_hi);
}

int run_extract(const cope::RunConfig& cfg) {
    for (const auto& w : cfg.spec.warnings()) {
        std::cout << "warning: " << w << "\n";
    }
    cope::RunResult res = cope::run(cfg);
    std::cout << "extracted " << res.extract.grid.plots.size() << " plots ("
              << res.extract.grid.m_rows << " rows x " << res.extract.grid.n_ranges
              << " ranges)\n";
    for (const auto& [stage, secs] : res.extract.timings) {
        std::printf("  %-16s %8.3f s\n", stage.c_str(), secs);
    }
    std::cout << "wrote " << res.json_path << "\n";
    std::cout << "wrote " << res.csv_path << "\n";
    if (!res.overlay_path.empty()) std::cout << "wrote " << res.overlay_path << "\n";
    std::cout << "wrote " << res.report_path << "\n";
    int flagged = 0;
    for (const auto& p : res.extract.grid.plots) flagged += p.flagged ? 1 : 0;
    if (flagged > 0) {
        std::cout << flagged << " plot(s) flagged: tuning reverted (see report)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "COPE plot extraction: locates experimental plots in grid-planted field rasters\n"
        "from plant-pixel projection profiles and comb matched filters."};
    app.require_subcommand(1);

    // ------------------------------------------------------------ extract
    auto* extract = app.add_subcommand(
        "extract", "Run the full pipeline on an orthomosaic image or plant mask");
    std::string config_path;
    extract->add_option("--config", config_path,
                        "Key=value config file; explicit flags override its values");
    cope::RunConfig flag_cfg;
    std::string kind = "rgb";
    std::string segmenter = "hue";
    RoiOpt roi;
    std::vector<double> box_opt;
    auto* o_input = extract->add_option("--input", flag_cfg.input_path,
                                        "Input raster (PNG or TIFF; mask: PNG/PGM)");
    auto* o_kind = extract->add_option("--kind", kind, "Input kind: rgb or mask")
                       ->check(CLI::IsMember({"rgb", "mask"}));
    auto* o_roi = extract
                      ->add_option("--roi", roi.v,
                                   "Region of interest: x0 y0 width height (default: whole image)")
                      ->expected(4);
    auto* o_segmenter =
        extract->add_option("--segmenter", segmenter, "Plant segmentation strategy: hue or otsu")
            ->check(CLI::IsMember({"hue", "otsu"}));
    auto* o_hue_lo = extract->add_option(
        "--hue-lo", flag_cfg.hue_lo,
        "Lower hue bound, 0..179 half-degree scale (vegetation default 20)");
    auto* o_hue_hi = extract->add_option("--hue-hi", flag_cfg.hue_hi,
                                         "Upper hue bound, 0..179 half-degree scale (default 90)");
    auto* o_c = extract->add_option("--c", flag_cfg.spec.c_rows, "Rows planted per pass (C)");
    auto* o_d_crop = extract->add_option("--d-crop", flag_cfg.spec.d_crop, "Crop-set width, px");
    auto* o_d_row = extract->add_option("--d-row", flag_cfg.spec.d_row, "Plot pitch, px");
    auto* o_d_gap = extract->add_option("--d-gap", flag_cfg.spec.d_gap, "Plot gap width, px");
    auto* o_d_ran_gap = extract->add_option("--d-ran-gap", flag_cfg.spec.d_ran_gap,
                                            "Range boundary correction bound, px");
    auto* o_rows = extract->add_option("--rows", flag_cfg.field.m_rows, "Number of plot rows M");
    auto* o_ranges =
        extract->add_option("--ranges", flag_cfg.field.n_ranges, "Number of ranges N");
    auto* o_w0 = extract->add_option("--w0", flag_cfg.weights.w0, "Offset penalty weight");
    auto* o_w1 = extract->add_option("--w1", flag_cfg.weights.w1, "Local profile term weight");
    auto* o_w2 = extract->add_option("--w2", flag_cfg.weights.w2, "Global profile term weight");
    auto* o_box = extract
                      ->add_option("--range-search", box_opt,
                                   "Range-line search bounds: y0_min y0_max dy_min dy_max")
                      ->expected(4);
    auto* o_out = extract->add_option("--out", flag_cfg.output_dir, "Output directory");
    auto* o_overlay =
        extract->add_flag("--overlay", flag_cfg.overlay, "Write a color-coded overlay PNG");
    auto* o_debug_csv = extract->add_flag("--debug-csv", flag_cfg.debug_csv,
                                          "Write range_lines.csv and layout.csv too");
    auto* o_workers = extract->add_option(
        "--workers", flag_cfg.workers,
        "Worker threads (0 = all cores); results do not depend on it");
    auto* o_kernel = extract
                         ->add_option("--kernel", flag_cfg.kernel_backend,
                                      "Force kernel backend: scalar or avx2")
                         ->check(CLI::IsMember({"scalar", "avx2"}));

    // ----------------------------------------------------------- evaluate
    auto* evaluate = app.add_subcommand(
        "evaluate", "Mean IoU of extracted plots against ground truth (same plot format)");
    std::string eval_plots;
    std::string eval_truth;
    evaluate->add_option("--plots", eval_plots, "Extracted plots (JSON or CSV)")->required();
    evaluate->add_option("--truth", eval_truth, "Ground truth plots (JSON or CSV)")->required();

    // -------------------------------------------------------------- synth
    auto* synth = app.add_subcommand(
        "synth", "Generate a synthetic grid-planted field mask with known ground truth");
    cope::SynthConfig synth_cfg;
    std::string synth_out;
    std::string mask_format = "pgm";
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", synth_cfg.seed, "PRNG seed (std::mt19937_64 bit stream)");
    synth->add_option("--rows", synth_cfg.m_rows, "Plot rows M");
    synth->add_option("--ranges", synth_cfg.n_ranges, "Ranges N");
    add_planter_options(synth, synth_cfg.spec);
    synth->add_option("--range-pitch", synth_cfg.range_pitch, "Nominal range pitch, pixels");
    synth->add_option("--range-gap", synth_cfg.range_gap, "Gap between ranges, pixels");
    synth->add_option("--guard-rows", synth_cfg.guard_rows,
                      "Planted border above/below the field, pixels");
    synth->add_option("--plant-density", synth_cfg.plant_density, "In-plot pixel probability");
    synth->add_option("--noise-density", synth_cfg.noise_density, "Background pixel probability");
    synth->add_option("--empty-fraction", synth_cfg.empty_plot_fraction,
                      "Probability a plot has no plants");
    synth->add_option("--jitter", synth_cfg.germination_jitter,
                      "Max per-plot germination delay of the material top, pixels");
    synth->add_option("--width", synth_cfg.width, "Raster width (0 = derive)");
    synth->add_option("--height", synth_cfg.height, "Raster height (0 = derive)");
    synth->add_option("--mask-format", mask_format, "Mask file format: pgm or png")
        ->check(CLI::IsMember({"pgm", "png"}));

    // ------------------------------------------------------ render-overlay
    auto* render = app.add_subcommand("render-overlay",
                                      "Draw color-coded plot rectangles over an image or mask");
    std::string ro_image;
    std::string ro_kind = "rgb";
    std::string ro_plots;
    std::string ro_out;
    std::string ro_coords = "local";
    render->add_option("--image", ro_image, "Base raster (PNG/TIFF, or PGM/PNG mask)")->required();
    render->add_option("--kind", ro_kind, "Base kind: rgb or mask")
        ->check(CLI::IsMember({"rgb", "mask"}));
    render->add_option("--plots", ro_plots, "Plot file (JSON or CSV)")->required();
    render->add_option("--out", ro_out, "Output PNG path")->required();
    render->add_option("--coords", ro_coords,
                       "Rectangle coordinates to draw: local (ROI frame) or src (source image)")
        ->check(CLI::IsMember({"local", "src"}));

    // ------------------------------------------------------- dump-profiles
    auto* dump = app.add_subcommand(
        "dump-profiles", "Write the energy profiles (and comb functions) as CSV for plotting");
    std::string dp_input;
    std::string dp_kind = "rgb";
    std::string dp_segmenter = "hue";
    int dp_hue_lo = 20;
    int dp_hue_hi = 90;
    std::string dp_out;
    cope::PlanterSpec dp_spec;
    bool dp_have_spec = false;
    dump->add_option("--input", dp_input, "Input raster")->required();
    dump->add_option("--kind", dp_kind, "Input kind: rgb or mask")
        ->check(CLI::IsMember({"rgb", "mask"}));
    add_segmentation_options(dump, dp_segmenter, dp_hue_lo, dp_hue_hi);
    dump->add_option("--out", dp_out, "Output directory")->required();
    auto* dp_c = dump->add_option("--c", dp_spec.c_rows, "Rows per pass (enables comb CSVs)");
    dump->add_option("--d-crop", dp_spec.d_crop, "Crop-set width")->needs(dp_c);
    dump->add_option("--d-row", dp_spec.d_row, "Plot pitch")->needs(dp_c);
    dump->add_option("--d-gap", dp_spec.d_gap, "Plot gap width")->needs(dp_c);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) {
            cope::RunConfig run_cfg;
            if (!config_path.empty()) run_cfg = cope::load_run_config_ini(config_path);
            if (o_input->count()) run_cfg.input_path = flag_cfg.input_path;
            if (o_kind->count()) {
                run_cfg.input_kind =
                    kind == "mask" ? cope::InputKind::mask : cope::InputKind::rgb;
            }
            if (o_roi->count()) run_cfg.roi = roi.get();
            if (o_segmenter->count()) {
                run_cfg.segmenter = segmenter == "otsu" ? cope::Segmenter::otsu
                                                        : cope::Segmenter::hue_threshold;
            }
            if (o_hue_lo->count()) run_cfg.hue_lo = flag_cfg.hue_lo;
            if (o_hue_hi->count()) run_cfg.hue_hi = flag_cfg.hue_hi;
            if (o_c->count()) run_cfg.spec.c_rows = flag_cfg.spec.c_rows;
            if (o_d_crop->count()) run_cfg.spec.d_crop = flag_cfg.spec.d_crop;
            if (o_d_row->count()) run_cfg.spec.d_row = flag_cfg.spec.d_row;
            if (o_d_gap->count()) run_cfg.spec.d_gap = flag_cfg.spec.d_gap;
            if (o_d_ran_gap->count()) run_cfg.spec.d_ran_gap = flag_cfg.spec.d_ran_gap;
            if (o_rows->count()) run_cfg.field.m_rows = flag_cfg.field.m_rows;
            if (o_ranges->count()) run_cfg.field.n_ranges = flag_cfg.field.n_ranges;
            if (o_w0->count()) run_cfg.weights.w0 = flag_cfg.weights.w0;
            if (o_w1->count()) run_cfg.weights.w1 = flag_cfg.weights.w1;
            if (o_w2->count()) run_cfg.weights.w2 = flag_cfg.weights.w2;
            if (o_box->count()) {
                run_cfg.search_box =
                    cope::SearchBox{static_cast<int>(box_opt[0]), static_cast<int>(box_opt[1]),
                                    box_opt[2], box_opt[3]};
            }
            if (o_out->count()) run_cfg.output_dir = flag_cfg.output_dir;
            if (o_overlay->count()) run_cfg.overlay = flag_cfg.overlay;
            if (o_debug_csv->count()) run_cfg.debug_csv = flag_cfg.debug_csv;
            if (o_workers->count()) run_cfg.workers = flag_cfg.workers;
            if (o_kernel->count()) run_cfg.kernel_backend = flag_cfg.kernel_backend;
            return run_extract(run_cfg);
        }
        if (*evaluate) {
            cope::EvalReport rep = cope::evaluate_files(eval_plots, eval_truth);
            std::cout << rep.text();
            return 0;
        }
        if (*synth) {
            cope::SynthResult res = cope::generate(synth_cfg);
            std::filesystem::create_directories(synth_out);
            std::string mask_path = synth_out + "/mask." + mask_format;
            cope::save_mask(res.mask, mask_path);
            cope::PlotFile truth =
                cope::plot_file_from_truth(res.truth, synth_cfg.m_rows, synth_cfg.n_ranges,
                                           res.mask.width(), res.mask.height());
            cope::write_plot_json(truth, synth_out + "/truth.json");
            cope::write_plot_csv(truth, synth_out + "/truth.csv");
            std::cout << "wrote " << mask_path << " (" << res.mask.width() << "x"
                      << res.mask.height() << ")\n";
            std::cout << "wrote " << synth_out << "/truth.json\n";
            return 0;
        }
        if (*render) {
            cope::RgbImage base = ro_kind == "mask" ? cope::mask_to_rgb(cope::load_mask(ro_image))
                                                    : cope::load_image(ro_image);
            cope::PlotFile plots = cope::read_plot_file(ro_plots);
            if (ro_coords == "src") {
                for (auto& p : plots.plots) p.rect = p.src_rect;
            }
            cope::save_png_rgb(cope::render_overlay(base, plots), ro_out);
            std::cout << "wrote " << ro_out << "\n";
            return 0;
        }
        if (*dump) {
            dp_have_spec = dp_c->count() > 0;
            cope::PlantMask mask =
                load_any_mask(dp_input, dp_kind, dp_segmenter, dp_hue_lo, dp_hue_hi);
            std::filesystem::create_directories(dp_out);
            auto write_profile = [&](const cope::EnergyProfile& p, const std::string& name) {
                std::ofstream out(dp_out + "/" + name);
                out << "index,value\n";
                for (std::size_t i = 0; i < p.values.size(); ++i) {
                    out << (p.origin + static_cast<int>(i)) << ',' << p.values[i] << '\n';
                }
            };
            write_profile(cope::range_energy(mask), "h_ra.csv");
            write_profile(cope::global_row_energy(mask), "h_ro_gl.csv");
            if (dp_have_spec) {
                cope::CombFunction comb = cope::build_comb(dp_spec);
                cope::CombFunction mod =
                    cope::modify_comb(comb, cope::build_triangle(dp_spec.d_gap));
                auto write_comb = [&](const cope::CombFunction& c, const std::string& name) {
                    std::ofstream out(dp_out + "/" + name);
                    out << "index,value\n";
                    for (std::size_t i = 0; i < c.samples.size(); ++i) {
                        out << i << ',' << c.samples[i] << '\n';
                    }
                };
                write_comb(comb, "comb.csv");
                write_comb(mod, "comb_modified.csv");
            }
            std::cout << "wrote profiles to " << dp_out << "\n";
            return 0;
        }
    } catch (const cope::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == cope::ErrorKind::validation ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
