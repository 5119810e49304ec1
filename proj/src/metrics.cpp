#include "cope/metrics.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "cope/error.hpp"

namespace cope {

double iou(const Rect& a, const Rect& b) {
    if (a.area() <= 0 || b.area() <= 0) {
        throw ValidationError("iou: zero-area rectangle");
    }
    double iw = std::min(a.x_right, b.x_right) - std::max(a.x_left, b.x_left);
    double ih = std::min(a.y_bot, b.y_bot) - std::max(a.y_top, b.y_top);
    if (iw <= 0 || ih <= 0) return 0.0;
    double inter = iw * ih;
    return inter / (a.area() + b.area() - inter);
}

Rect plot_rect(const PlotBoundary& p) {
    return Rect{p.x_left, p.x_right, static_cast<double>(p.y_top_tuned),
                static_cast<double>(p.y_bot_tuned)};
}

namespace {

std::vector<double> paired_iou(const std::vector<GroundTruthPlot>& extracted,
                               const GroundTruthGrid& gt) {
    std::map<std::pair<int, int>, const GroundTruthPlot*> by_key;
    for (const auto& p : extracted) {
        by_key[{p.row, p.range}] = &p;
    }
    std::vector<double> out;
    out.reserve(gt.plots.size());
    std::string missing;
    for (const auto& g : gt.plots) {
        auto it = by_key.find({g.row, g.range});
        if (it == by_key.end()) {
            missing += (missing.empty() ? "" : ", ");
            missing += "(" + std::to_string(g.row) + "," + std::to_string(g.range) + ")";
            continue;
        }
        out.push_back(iou(it->second->rect, g.rect));
    }
    if (!missing.empty()) {
        throw ValidationError("evaluation: extracted plots missing for " + missing);
    }
    return out;
}

}  // namespace

std::vector<double> per_plot_iou(const std::vector<GroundTruthPlot>& extracted,
                                 const GroundTruthGrid& gt) {
    return paired_iou(extracted, gt);
}

double mean_iou(const std::vector<GroundTruthPlot>& extracted, const GroundTruthGrid& gt) {
    if (gt.plots.empty()) {
        throw ValidationError("evaluation: ground truth has no plots");
    }
    std::vector<double> vals = paired_iou(extracted, gt);
    double sum = 0.0;
    for (double v : vals) sum += v;
    return sum / static_cast<double>(vals.size());
}

double mean_iou(const PlotGrid& grid, const GroundTruthGrid& gt) {
    std::vector<GroundTruthPlot> extracted;
    extracted.reserve(grid.plots.size());
    for (const auto& p : grid.plots) {
        extracted.push_back(GroundTruthPlot{p.row, p.range, plot_rect(p), false});
    }
    return mean_iou(extracted, gt);
}

}  // namespace cope
