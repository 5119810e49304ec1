#include "cope/plot_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cope/error.hpp"

namespace cope {

namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "cope-plots";
constexpr int kFormatVersion = 1;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Trim to the shortest representation that round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

}  // namespace

PlotFile plot_file_from_grid(const PlotGrid& grid, const RegionOfInterest& roi) {
    PlotFile file;
    file.rows = grid.m_rows;
    file.ranges = grid.n_ranges;
    file.roi = roi;
    file.plots.reserve(grid.plots.size());
    for (const auto& p : grid.plots) {
        PlotRecord rec;
        rec.row = p.row;
        rec.range = p.range;
        rec.rect = plot_rect(p);
        rec.src_rect = Rect{rec.rect.x_left + roi.x0, rec.rect.x_right + roi.x0,
                            rec.rect.y_top + roi.y0, rec.rect.y_bot + roi.y0};
        rec.has_untuned = true;
        rec.y_top_untuned = p.y_top;
        rec.y_bot_untuned = p.y_bot;
        rec.flagged = p.flagged;
        file.plots.push_back(rec);
    }
    return file;
}

PlotFile plot_file_from_truth(const GroundTruthGrid& truth, int rows, int ranges, int width,
                              int height) {
    PlotFile file;
    file.rows = rows;
    file.ranges = ranges;
    file.roi = RegionOfInterest{0, 0, width, height};
    file.plots.reserve(truth.plots.size());
    for (const auto& g : truth.plots) {
        PlotRecord rec;
        rec.row = g.row;
        rec.range = g.range;
        rec.rect = g.rect;
        rec.src_rect = g.rect;
        rec.empty = g.empty;
        file.plots.push_back(rec);
    }
    return file;
}

GroundTruthGrid truth_from_plot_file(const PlotFile& file) {
    GroundTruthGrid truth;
    truth.plots.reserve(file.plots.size());
    for (const auto& rec : file.plots) {
        truth.plots.push_back(GroundTruthPlot{rec.row, rec.range, rec.rect, rec.empty});
    }
    return truth;
}

void write_plot_json(const PlotFile& file, const std::string& path) {
    json root;
    root["format"] = kFormatTag;
    root["version"] = kFormatVersion;
    root["field"] = {{"rows", file.rows}, {"ranges", file.ranges}};
    root["roi"] = {{"x0", file.roi.x0},
                   {"y0", file.roi.y0},
                   {"width", file.roi.width},
                   {"height", file.roi.height}};
    json plots = json::array();
    for (const auto& p : file.plots) {
        json e;
        e["row"] = p.row;
        e["range"] = p.range;
        e["x_left"] = p.rect.x_left;
        e["x_right"] = p.rect.x_right;
        e["y_top"] = p.rect.y_top;
        e["y_bot"] = p.rect.y_bot;
        e["src_x_left"] = p.src_rect.x_left;
        e["src_x_right"] = p.src_rect.x_right;
        e["src_y_top"] = p.src_rect.y_top;
        e["src_y_bot"] = p.src_rect.y_bot;
        if (p.has_untuned) {
            e["y_top_untuned"] = p.y_top_untuned;
            e["y_bot_untuned"] = p.y_bot_untuned;
        }
        if (p.flagged) e["flagged"] = true;
        if (p.empty) e["empty"] = true;
        plots.push_back(std::move(e));
    }
    root["plots"] = std::move(plots);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << root.dump(2) << "\n";
    if (!out) throw ProcessingError("failed to write " + path);
}

void write_plot_csv(const PlotFile& file, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open file for writing: " + path);
    out << "row,range,x_left,x_right,y_top,y_bot,"
           "src_x_left,src_x_right,src_y_top,src_y_bot,"
           "y_top_untuned,y_bot_untuned,flagged,empty\n";
    for (const auto& p : file.plots) {
        out << p.row << ',' << p.range << ',' << fmt_double(p.rect.x_left) << ','
            << fmt_double(p.rect.x_right) << ',' << fmt_double(p.rect.y_top) << ','
            << fmt_double(p.rect.y_bot) << ',' << fmt_double(p.src_rect.x_left) << ','
            << fmt_double(p.src_rect.x_right) << ',' << fmt_double(p.src_rect.y_top) << ','
            << fmt_double(p.src_rect.y_bot) << ',';
        if (p.has_untuned) {
            out << p.y_top_untuned << ',' << p.y_bot_untuned;
        } else {
            out << ',';
        }
        out << ',' << (p.flagged ? 1 : 0) << ',' << (p.empty ? 1 : 0) << '\n';
    }
    if (!out) throw ProcessingError("failed to write " + path);
}

namespace {

PlotFile parse_plot_json(const std::string& text, const std::string& path) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ProcessingError("bad JSON in " + path + ": " + e.what());
    }
    try {
        if (!root.contains("format") || root["format"] != kFormatTag) {
            throw ProcessingError("not a " + std::string(kFormatTag) + " file: " + path);
        }
        PlotFile file;
        file.rows = root.at("field").at("rows").get<int>();
        file.ranges = root.at("field").at("ranges").get<int>();
        if (root.contains("roi")) {
            const auto& r = root["roi"];
            file.roi = RegionOfInterest{r.at("x0").get<int>(), r.at("y0").get<int>(),
                                        r.at("width").get<int>(), r.at("height").get<int>()};
        }
        for (const auto& e : root.at("plots")) {
            PlotRecord p;
            p.row = e.at("row").get<int>();
            p.range = e.at("range").get<int>();
            p.rect = Rect{e.at("x_left").get<double>(), e.at("x_right").get<double>(),
                          e.at("y_top").get<double>(), e.at("y_bot").get<double>()};
            if (e.contains("src_x_left")) {
                p.src_rect = Rect{e.at("src_x_left").get<double>(), e.at("src_x_right").get<double>(),
                                  e.at("src_y_top").get<double>(), e.at("src_y_bot").get<double>()};
            } else {
                p.src_rect = p.rect;
            }
            if (e.contains("y_top_untuned")) {
                p.has_untuned = true;
                p.y_top_untuned = e.at("y_top_untuned").get<int>();
                p.y_bot_untuned = e.at("y_bot_untuned").get<int>();
            }
            p.flagged = e.value("flagged", false);
            p.empty = e.value("empty", false);
            file.plots.push_back(p);
        }
        return file;
    } catch (const json::exception& e) {
        throw ProcessingError("plot schema mismatch in " + path + ": " + e.what());
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

PlotFile parse_plot_csv(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ProcessingError("empty CSV: " + path);
    std::vector<std::string> header = split_csv_line(line);
    auto col = [&](const char* name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    };
    int c_row = col("row");
    int c_range = col("range");
    int c_xl = col("x_left");
    int c_xr = col("x_right");
    int c_yt = col("y_top");
    int c_yb = col("y_bot");
    if (c_row < 0 || c_range < 0 || c_xl < 0 || c_xr < 0 || c_yt < 0 || c_yb < 0) {
        throw ProcessingError("CSV header missing required plot columns: " + path);
    }
    int c_empty = col("empty");
    int c_flagged = col("flagged");

    PlotFile file;
    int max_row = -1;
    int max_range = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        auto get = [&](int c) -> std::string {
            if (c < 0 || c >= static_cast<int>(f.size())) return "";
            return f[static_cast<std::size_t>(c)];
        };
        PlotRecord p;
        try {
            p.row = std::stoi(get(c_row));
            p.range = std::stoi(get(c_range));
            p.rect = Rect{std::stod(get(c_xl)), std::stod(get(c_xr)), std::stod(get(c_yt)),
                          std::stod(get(c_yb))};
        } catch (const std::exception&) {
            throw ProcessingError("bad CSV row in " + path + ": " + line);
        }
        p.src_rect = p.rect;
        if (!get(c_empty).empty()) p.empty = get(c_empty) != "0";
        if (!get(c_flagged).empty()) p.flagged = get(c_flagged) != "0";
        max_row = std::max(max_row, p.row);
        max_range = std::max(max_range, p.range);
        file.plots.push_back(p);
    }
    file.rows = max_row + 1;
    file.ranges = max_range + 1;
    return file;
}

}  // namespace

PlotFile read_plot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return parse_plot_json(text, path);
    }
    return parse_plot_csv(text, path);
}

}  // namespace cope
