#include "cope/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "cope/error.hpp"
#include "cope/kernels.hpp"

namespace cope {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void RunConfig::validate() const {
    if (input_path.empty()) throw ValidationError("config: input path is required");
    if (output_dir.empty()) throw ValidationError("config: output directory is required");
    spec.validate();
    field.validate(spec.c_rows);
    weights.validate();
    if (hue_lo < 0 || hue_hi > 179 || hue_lo > hue_hi) {
        throw ValidationError("config: hue thresholds must satisfy 0 <= lo <= hi <= 179");
    }
    if (workers < 0) throw ValidationError("config: workers must be >= 0");
    if (roi && (roi->width <= 0 || roi->height <= 0)) {
        throw ValidationError("config: roi dimensions must be positive");
    }
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_values(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ' ' || ch == '\t' || ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' needs an integer, got '" + v + "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config: key '" + key + "' needs a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ValidationError("config: key '" + key + "' needs a boolean, got '" + v + "'");
}

}  // namespace

RunConfig load_run_config_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') continue;  // section headers are cosmetic
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config: line " + std::to_string(line_no) +
                                  " is not key=value: '" + line + "'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "input") {
            cfg.input_path = value;
        } else if (key == "kind") {
            if (value == "rgb") {
                cfg.input_kind = InputKind::rgb;
            } else if (value == "mask") {
                cfg.input_kind = InputKind::mask;
            } else {
                throw ValidationError("config: kind must be rgb or mask, got '" + value + "'");
            }
        } else if (key == "roi") {
            auto v = split_values(value);
            if (v.size() != 4) {
                throw ValidationError("config: roi needs four values: x0 y0 width height");
            }
            cfg.roi = RegionOfInterest{to_int(key, v[0]), to_int(key, v[1]), to_int(key, v[2]),
                                       to_int(key, v[3])};
        } else if (key == "segmenter") {
            if (value == "hue") {
                cfg.segmenter = Segmenter::hue_threshold;
            } else if (value == "otsu") {
                cfg.segmenter = Segmenter::otsu;
            } else {
                throw ValidationError("config: segmenter must be hue or otsu, got '" + value +
                                      "'");
            }
        } else if (key == "hue-lo") {
            cfg.hue_lo = to_int(key, value);
        } else if (key == "hue-hi") {
            cfg.hue_hi = to_int(key, value);
        } else if (key == "c") {
            cfg.spec.c_rows = to_int(key, value);
        } else if (key == "d-crop") {
            cfg.spec.d_crop = to_int(key, value);
        } else if (key == "d-row") {
            cfg.spec.d_row = to_int(key, value);
        } else if (key == "d-gap") {
            cfg.spec.d_gap = to_int(key, value);
        } else if (key == "d-ran-gap") {
            cfg.spec.d_ran_gap = to_int(key, value);
        } else if (key == "rows") {
            cfg.field.m_rows = to_int(key, value);
        } else if (key == "ranges") {
            cfg.field.n_ranges = to_int(key, value);
        } else if (key == "w0") {
            cfg.weights.w0 = to_double(key, value);
        } else if (key == "w1") {
            cfg.weights.w1 = to_double(key, value);
        } else if (key == "w2") {
            cfg.weights.w2 = to_double(key, value);
        } else if (key == "range-search") {
            auto v = split_values(value);
            if (v.size() != 4) {
                throw ValidationError(
                    "config: range-search needs four values: y0_min y0_max dy_min dy_max");
            }
            cfg.search_box = SearchBox{to_int(key, v[0]), to_int(key, v[1]), to_double(key, v[2]),
                                       to_double(key, v[3])};
        } else if (key == "out") {
            cfg.output_dir = value;
        } else if (key == "overlay") {
            cfg.overlay = to_bool(key, value);
        } else if (key == "debug-csv") {
            cfg.debug_csv = to_bool(key, value);
        } else if (key == "workers") {
            cfg.workers = to_int(key, value);
        } else if (key == "kernel") {
            cfg.kernel_backend = value;
        } else {
            throw ValidationError("config: unknown key '" + key + "' (line " +
                                  std::to_string(line_no) + ")");
        }
    }
    return cfg;
}

ExtractResult extract_from_mask(const PlantMask& mask, const PlanterSpec& spec,
                                const FieldShape& field, const RowSepConfig& weights,
                                const std::optional<SearchBox>& box, int workers) {
    spec.validate();
    field.validate(spec.c_rows);
    weights.validate();
    if (workers < 1) workers = 1;

    ExtractResult res;
    auto t0 = std::chrono::steady_clock::now();

    EnergyProfile h_ra = range_energy(mask, workers);
    res.timings.emplace_back("range-energy", seconds_since(t0));

    t0 = std::chrono::steady_clock::now();
    SearchBox search = box ? *box : default_search_box(h_ra.length(), field.n_ranges);
    res.ranges = separate_ranges(h_ra, field.n_ranges, search, spec.d_ran_gap, workers);
    res.timings.emplace_back("range-separation", seconds_since(t0));

    t0 = std::chrono::steady_clock::now();
    CombFunction comb = modify_comb(build_comb(spec), build_triangle(spec.d_gap));
    res.layouts = layout_field(mask, res.ranges, comb, spec, field, weights, workers);
    res.timings.emplace_back("row-separation", seconds_since(t0));

    t0 = std::chrono::steady_clock::now();
    PlotGrid untuned = build_grid(res.layouts, res.ranges, spec, field);
    res.grid = finetune_grid(mask, untuned, workers);
    res.timings.emplace_back("fine-tuning", seconds_since(t0));
    return res;
}

namespace {

json config_echo(const RunConfig& cfg, int workers) {
    json j;
    j["input"] = cfg.input_path;
    j["input_kind"] = cfg.input_kind == InputKind::rgb ? "rgb" : "mask";
    if (cfg.roi) {
        j["roi"] = {{"x0", cfg.roi->x0},
                    {"y0", cfg.roi->y0},
                    {"width", cfg.roi->width},
                    {"height", cfg.roi->height}};
    }
    j["segmenter"] = cfg.segmenter == Segmenter::hue_threshold ? "hue" : "otsu";
    j["hue_lo"] = cfg.hue_lo;
    j["hue_hi"] = cfg.hue_hi;
    j["planter"] = {{"c", cfg.spec.c_rows},
                    {"d_crop", cfg.spec.d_crop},
                    {"d_row", cfg.spec.d_row},
                    {"d_gap", cfg.spec.d_gap},
                    {"d_ran_gap", cfg.spec.d_ran_gap}};
    j["field"] = {{"rows", cfg.field.m_rows}, {"ranges", cfg.field.n_ranges}};
    j["weights"] = {{"w0", cfg.weights.w0}, {"w1", cfg.weights.w1}, {"w2", cfg.weights.w2}};
    if (cfg.search_box) {
        j["search_box"] = {{"y0_min", cfg.search_box->y0_min},
                           {"y0_max", cfg.search_box->y0_max},
                           {"dy_min", cfg.search_box->dy_min},
                           {"dy_max", cfg.search_box->dy_max}};
    }
    j["workers"] = workers;
    j["kernel_backend"] = kernels::backend_name(kernels::active_backend());
    return j;
}

void write_debug_csvs(const RunResult& res, const std::string& dir) {
    {
        std::ofstream out(dir + "/range_lines.csv");
        out << "index,y_equidistant,y_adjusted\n";
        for (std::size_t i = 0; i < res.extract.ranges.adjusted.size(); ++i) {
            out << i << ',' << res.extract.ranges.equidistant[i] << ','
                << res.extract.ranges.adjusted[i] << '\n';
        }
    }
    {
        std::ofstream out(dir + "/layout.csv");
        out << "range,crop_set,delta_x,x_off,set_boundary\n";
        for (const auto& layout : res.extract.layouts) {
            for (std::size_t i = 0; i < layout.offsets.size(); ++i) {
                out << layout.range_index << ',' << i << ',' << layout.offsets[i] << ','
                    << layout.x_off[i] << ',' << layout.set_boundaries[i] << '\n';
            }
        }
    }
    {
        std::ofstream out(dir + "/plot_boundaries.csv");
        out << "range,boundary,x\n";
        for (const auto& layout : res.extract.layouts) {
            for (std::size_t m = 0; m < layout.plot_boundaries.size(); ++m) {
                out << layout.range_index << ',' << m << ',' << layout.plot_boundaries[m] << '\n';
            }
        }
    }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    if (!cfg.kernel_backend.empty()) {
        kernels::set_backend(kernels::parse_backend(cfg.kernel_backend));
    }
    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    std::filesystem::create_directories(cfg.output_dir);

    RunResult res;
    std::vector<std::pair<std::string, double>> io_timings;
    auto t0 = std::chrono::steady_clock::now();

    PlantMask mask;
    RgbImage rgb;
    bool have_rgb = false;
    try {
        if (cfg.input_kind == InputKind::rgb) {
            rgb = load_image(cfg.input_path);
            have_rgb = true;
            res.roi = cfg.roi.value_or(RegionOfInterest{0, 0, rgb.width(), rgb.height()});
            if (cfg.roi) rgb = crop(rgb, *cfg.roi);
        } else {
            mask = load_mask(cfg.input_path);
            res.roi = cfg.roi.value_or(RegionOfInterest{0, 0, mask.width(), mask.height()});
            if (cfg.roi) mask = crop(mask, *cfg.roi);
        }
    } catch (const Error& e) {
        rethrow_with_context(e, "load stage: ");
    }
    io_timings.emplace_back("load", seconds_since(t0));

    t0 = std::chrono::steady_clock::now();
    if (have_rgb) {
        try {
            HueImage hue = to_hue(rgb);
            mask = cfg.segmenter == Segmenter::hue_threshold
                       ? segment_hue_threshold(hue, cfg.hue_lo, cfg.hue_hi)
                       : segment_otsu(hue);
        } catch (const Error& e) {
            rethrow_with_context(e, "segmentation stage: ");
        }
        io_timings.emplace_back("segmentation", seconds_since(t0));
    }

    try {
        res.extract =
            extract_from_mask(mask, cfg.spec, cfg.field, cfg.weights, cfg.search_box, workers);
    } catch (const Error& e) {
        rethrow_with_context(e, "extraction stage: ");
    }
    res.extract.timings.insert(res.extract.timings.begin(), io_timings.begin(), io_timings.end());

    json echo = config_echo(cfg, workers);
    res.extract.grid.provenance = echo.dump();

    t0 = std::chrono::steady_clock::now();
    PlotFile plots = plot_file_from_grid(res.extract.grid, res.roi);
    res.json_path = cfg.output_dir + "/plots.json";
    res.csv_path = cfg.output_dir + "/plots.csv";
    write_plot_json(plots, res.json_path);
    write_plot_csv(plots, res.csv_path);

    if (cfg.overlay) {
        RgbImage base = have_rgb ? std::move(rgb) : mask_to_rgb(mask);
        res.overlay_path = cfg.output_dir + "/overlay.png";
        save_png_rgb(render_overlay(base, plots), res.overlay_path);
    }
    if (cfg.debug_csv) write_debug_csvs(res, cfg.output_dir);
    res.extract.timings.emplace_back("outputs", seconds_since(t0));

    // Run report: config echo, stage timings, per-range offsets, flags.
    json report;
    report["config"] = echo;
    json timings = json::array();
    for (const auto& [stage, secs] : res.extract.timings) {
        timings.push_back({{"stage", stage}, {"seconds", secs}});
    }
    report["timings"] = std::move(timings);
    json offsets = json::array();
    for (const auto& layout : res.extract.layouts) {
        offsets.push_back({{"range", layout.range_index}, {"delta_x", layout.offsets}});
    }
    report["crop_set_offsets"] = std::move(offsets);
    json flagged = json::array();
    for (const auto& p : res.extract.grid.plots) {
        if (p.flagged) flagged.push_back({{"row", p.row}, {"range", p.range}});
    }
    report["flagged_plots"] = std::move(flagged);
    json warn = json::array();
    for (const auto& w : cfg.spec.warnings()) warn.push_back(w);
    report["warnings"] = std::move(warn);
    res.report_path = cfg.output_dir + "/report.json";
    std::ofstream rep(res.report_path);
    rep << report.dump(2) << "\n";
    if (!rep) throw ProcessingError("failed to write " + res.report_path);
    return res;
}

EvalReport evaluate_sets(const std::vector<GroundTruthPlot>& extracted,
                         const GroundTruthGrid& truth) {
    EvalReport rep;
    rep.per_plot = per_plot_iou(extracted, truth);
    if (rep.per_plot.empty()) throw ValidationError("evaluation: ground truth has no plots");
    double sum = 0.0;
    double sum_ne = 0.0;
    int n_ne = 0;
    for (std::size_t i = 0; i < rep.per_plot.size(); ++i) {
        double v = rep.per_plot[i];
        sum += v;
        if (!truth.plots[i].empty) {
            sum_ne += v;
            ++n_ne;
        }
        int bin = std::min(9, static_cast<int>(v * 10.0));
        rep.deciles[bin]++;
        if (v < 0.5) rep.below_half++;
    }
    rep.mean = sum / static_cast<double>(rep.per_plot.size());
    rep.has_empty_split = n_ne != static_cast<int>(rep.per_plot.size()) && n_ne > 0;
    rep.mean_non_empty = n_ne > 0 ? sum_ne / n_ne : rep.mean;
    return rep;
}

EvalReport evaluate_files(const std::string& plots_path, const std::string& truth_path) {
    PlotFile plots = read_plot_file(plots_path);
    PlotFile truth_file = read_plot_file(truth_path);
    std::vector<GroundTruthPlot> extracted;
    extracted.reserve(plots.plots.size());
    for (const auto& p : plots.plots) {
        extracted.push_back(GroundTruthPlot{p.row, p.range, p.rect, false});
    }
    return evaluate_sets(extracted, truth_from_plot_file(truth_file));
}

std::string EvalReport::text() const {
    std::string s;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mean IoU: %.4f over %zu plots\n", mean, per_plot.size());
    s += buf;
    if (has_empty_split) {
        std::snprintf(buf, sizeof(buf), "mean IoU (non-empty plots): %.4f\n", mean_non_empty);
        s += buf;
    }
    s += "IoU histogram (deciles):\n";
    for (int d = 0; d < 10; ++d) {
        std::snprintf(buf, sizeof(buf), "  [%.1f, %.1f%s: %d\n", d / 10.0, (d + 1) / 10.0,
                      d == 9 ? "]" : ")", deciles[d]);
        s += buf;
    }
    std::snprintf(buf, sizeof(buf), "plots below 0.5: %d\n", below_half);
    s += buf;
    return s;
}

namespace {

constexpr std::uint8_t kPalette[8][3] = {
    {230, 25, 75}, {60, 180, 75},  {255, 225, 25}, {0, 130, 200},
    {245, 130, 48}, {145, 30, 180}, {70, 240, 240}, {240, 50, 230},
};

}  // namespace

RgbImage mask_to_rgb(const PlantMask& mask) {
    RgbImage img(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y) {
        const std::uint8_t* src = mask.row(y);
        std::uint8_t* dst = img.row(y);
        for (int x = 0; x < mask.width(); ++x) {
            if (src[x]) {
                dst[3 * x] = 30;
                dst[3 * x + 1] = 200;
                dst[3 * x + 2] = 30;
            }
        }
    }
    return img;
}

RgbImage render_overlay(const RgbImage& base, const PlotFile& plots) {
    RgbImage img = base;
    auto clamp = [](int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); };
    for (const auto& p : plots.plots) {
        const std::uint8_t* color = kPalette[(p.row + p.range) % 8];
        int x0 = clamp(static_cast<int>(std::lround(p.rect.x_left)), 0, img.width());
        int x1 = clamp(static_cast<int>(std::lround(p.rect.x_right)), 0, img.width());
        int y0 = clamp(static_cast<int>(std::lround(p.rect.y_top)), 0, img.height());
        int y1 = clamp(static_cast<int>(std::lround(p.rect.y_bot)), 0, img.height());
        for (int y = y0; y < y1; ++y) {
            std::uint8_t* row = img.row(y);
            bool y_edge = y == y0 || y == y1 - 1;
            for (int x = x0; x < x1; ++x) {
                std::uint8_t* px = row + 3 * x;
                if (y_edge || x == x0 || x == x1 - 1) {
                    px[0] = color[0];
                    px[1] = color[1];
                    px[2] = color[2];
                } else {
                    // 40% fill keeps the plants visible underneath.
                    px[0] = static_cast<std::uint8_t>((px[0] * 3 + color[0] * 2) / 5);
                    px[1] = static_cast<std::uint8_t>((px[1] * 3 + color[1] * 2) / 5);
                    px[2] = static_cast<std::uint8_t>((px[2] * 3 + color[2] * 2) / 5);
                }
            }
        }
    }
    return img;
}

}  // namespace cope
