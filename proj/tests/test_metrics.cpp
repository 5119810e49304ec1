#include <doctest.h>

#include <random>

#include "cope/metrics.hpp"

using namespace cope;

TEST_CASE("iou: identity, worked overlap, disjoint") {
    Rect a{0, 10, 0, 10};
    CHECK(iou(a, a) == 1.0);

    Rect b{5, 15, 0, 10};  // intersection 50, union 150
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    Rect far{20, 30, 0, 10};
    CHECK(iou(a, far) == 0.0);

    Rect touching{10, 20, 0, 10};  // half-open: shared edge is no overlap
    CHECK(iou(a, touching) == 0.0);
}

TEST_CASE("iou: zero-area rectangle is an error") {
    Rect a{0, 10, 0, 10};
    Rect degenerate{3, 3, 0, 10};
    CHECK_THROWS_AS(iou(a, degenerate), ValidationError);
    CHECK_THROWS_AS(iou(degenerate, a), ValidationError);
}

TEST_CASE("iou: symmetric on random rectangle pairs") {
    std::mt19937 rng(99);
    auto rand_rect = [&]() {
        double x = static_cast<double>(rng() % 100);
        double y = static_cast<double>(rng() % 100);
        double w = 1.0 + static_cast<double>(rng() % 50);
        double h = 1.0 + static_cast<double>(rng() % 50);
        return Rect{x, x + w, y, y + h};
    };
    for (int i = 0; i < 100; ++i) {
        Rect a = rand_rect();
        Rect b = rand_rect();
        double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("iou: nonincreasing under axis-aligned translation") {
    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        double w = 5.0 + static_cast<double>(rng() % 40);
        double h = 5.0 + static_cast<double>(rng() % 40);
        Rect a{0, w, 0, h};
        double prev = 1.0;
        for (int t = 0; t < 60; ++t) {
            Rect b{t + 0.0, t + w, 0, h};
            double v = iou(a, b);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

namespace {

PlotGrid tiny_grid() {
    PlotGrid grid;
    grid.m_rows = 2;
    grid.n_ranges = 1;
    for (int m = 0; m < 2; ++m) {
        PlotBoundary p;
        p.row = m;
        p.range = 0;
        p.x_left = m * 10.0;
        p.x_right = (m + 1) * 10.0;
        p.y_top = 0;
        p.y_bot = 10;
        p.y_top_tuned = 0;
        p.y_bot_tuned = 10;
        grid.plots.push_back(p);
    }
    return grid;
}

}  // namespace

TEST_CASE("mean_iou: identical grids score one") {
    PlotGrid grid = tiny_grid();
    GroundTruthGrid gt;
    for (const auto& p : grid.plots) {
        gt.plots.push_back(GroundTruthPlot{p.row, p.range, plot_rect(p), false});
    }
    CHECK(mean_iou(grid, gt) == 1.0);
}

TEST_CASE("mean_iou: arithmetic mean over paired plots") {
    PlotGrid grid = tiny_grid();
    GroundTruthGrid gt;
    gt.plots.push_back(GroundTruthPlot{0, 0, Rect{0, 10, 0, 10}, false});  // IoU 1.0
    // Second truth rect shifted so IoU = 50/150 = 1/3.
    gt.plots.push_back(GroundTruthPlot{1, 0, Rect{15, 25, 0, 10}, false});
    CHECK(mean_iou(grid, gt) == doctest::Approx((1.0 + 1.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("mean_iou: missing keys are reported") {
    PlotGrid grid = tiny_grid();
    GroundTruthGrid gt;
    gt.plots.push_back(GroundTruthPlot{0, 0, Rect{0, 10, 0, 10}, false});
    gt.plots.push_back(GroundTruthPlot{5, 7, Rect{0, 10, 0, 10}, false});
    CHECK_THROWS_WITH_AS(mean_iou(grid, gt), doctest::Contains("(5,7)"), ValidationError);
}
