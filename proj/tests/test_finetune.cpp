#include <doctest.h>

#include <random>

#include "cope/finetune.hpp"
#include "oracles.hpp"

using namespace cope;

namespace {

EnergyProfile make_local(std::vector<std::uint32_t> values, int origin) {
    EnergyProfile p;
    p.axis = Axis::along_y;
    p.values = std::move(values);
    p.origin = origin;
    return p;
}

PlotBoundary make_plot(double xl, double xr, int yt, int yb) {
    PlotBoundary p;
    p.x_left = xl;
    p.x_right = xr;
    p.y_top = yt;
    p.y_bot = yb;
    p.y_top_tuned = yt;
    p.y_bot_tuned = yb;
    return p;
}

}  // namespace

TEST_CASE("local range energy: full-width plot over the whole window equals range energy") {
    std::mt19937 rng(3);
    PlantMask mask(24, 30);
    for (auto& b : mask.bits()) b = rng() % 2;
    PlotBoundary plot = make_plot(0.0, 23.0, 0, 29);
    EnergyProfile local = local_range_energy(mask, plot, 100);
    EnergyProfile full = range_energy(mask);
    CHECK(local.origin == 0);
    CHECK(local.values == full.values);
}

TEST_CASE("local range energy: empty column band, hand-counted band, degenerate plot") {
    PlantMask mask(30, 20);
    mask.set(12, 4, 1);
    mask.set(13, 4, 1);
    mask.set(12, 9, 1);
    mask.set(25, 5, 1);  // outside the column band

    PlotBoundary empty_band = make_plot(0.0, 9.0, 5, 12);
    CHECK(local_range_energy(mask, empty_band, 3).total() == 0);

    PlotBoundary band = make_plot(10.0, 19.0, 4, 9);
    EnergyProfile p = local_range_energy(mask, band, 2);
    CHECK(p.origin == 2);
    REQUIRE(p.length() == 10);  // rows 2..11
    CHECK(p.at(4) == 2);
    CHECK(p.at(9) == 1);
    CHECK(p.at(5) == 0);

    PlotBoundary degenerate = make_plot(5.6, 5.4, 0, 10);
    CHECK_THROWS_AS(local_range_energy(mask, degenerate, 2), ValidationError);
}

TEST_CASE("local range energy: window clamps at the mask edges") {
    PlantMask mask(10, 12);
    PlotBoundary plot = make_plot(0.0, 9.0, 2, 9);
    EnergyProfile p = local_range_energy(mask, plot, 100);
    CHECK(p.origin == 0);
    CHECK(p.length() == 12);
}

TEST_CASE("tune_boundary: zero correction bound returns the input") {
    EnergyProfile local = make_local({5, 4, 3, 2, 1}, 0);
    TriangleKernel tri = build_triangle(3);
    CHECK(tune_boundary(local, 2, 0, tri) == 2);
}

TEST_CASE("tune_boundary: finds a planted smoothed minimum") {
    // Deep valley centered at y = 70; the scan window stays clear of the
    // profile edges so the minimum is the valley itself.
    std::vector<std::uint32_t> v(201, 50);
    for (int y = 62; y <= 78; ++y) v[static_cast<std::size_t>(y)] = 0;
    EnergyProfile local = make_local(v, 0);
    int d = 30;
    TriangleKernel tri = build_triangle(d);
    int got = tune_boundary(local, 50, d, tri);
    CHECK(got == 70);
    CHECK(got == oracle::tune_boundary(v, 0, 50, d, d));
}

TEST_CASE("tune_boundary: constant profile stays put") {
    EnergyProfile local = make_local(std::vector<std::uint32_t>(120, 9), 0);
    TriangleKernel tri = build_triangle(20);
    CHECK(tune_boundary(local, 60, 20, tri) == 60);
}

TEST_CASE("tune_boundary: matches the oracle on randomized instances") {
    std::mt19937 rng(616);
    for (int trial = 0; trial < 240; ++trial) {
        int len = 30 + static_cast<int>(rng() % 400);
        int origin = static_cast<int>(rng() % 50);
        std::vector<std::uint32_t> v(static_cast<std::size_t>(len));
        for (auto& x : v) x = rng() % 40;
        int d = 1 + static_cast<int>(rng() % 60);
        int y = origin + static_cast<int>(rng() % len);
        EnergyProfile local = make_local(v, origin);
        TriangleKernel tri = build_triangle(d);
        int got = tune_boundary(local, y, d, tri);
        CHECK(got == oracle::tune_boundary(v, origin, y, d, d));
        CHECK(std::abs(got - y) <= d);
    }
}

namespace {

// One range flanked by material above and below, as inside a real
// field: rows [0, 30) material, gap band [30, 70 + jitter), plot
// material up to 160. Plot columns at pitch 20 with gap 4.
PlantMask flanked_field(int width, int jitter_first_plot) {
    PlantMask mask(width, 200);
    for (int x = 0; x < width; ++x) {
        int col = x % 20;
        bool material_col = col >= 2 && col < 18;
        if (!material_col) continue;
        int plot = x / 20;
        int top = 70 + (plot == 0 ? jitter_first_plot : 0);
        for (int y = 0; y < 30; ++y) mask.set(x, y, 1);
        for (int y = top; y < 160; ++y) mask.set(x, y, 1);
    }
    return mask;
}

}  // namespace

TEST_CASE("finetune_grid: clean gap centered on the untuned boundary stays put") {
    PlantMask mask = flanked_field(60, 0);
    PlotGrid grid;
    grid.m_rows = 3;
    grid.n_ranges = 1;
    // Triangle wider than the gap band gives a strict smoothed minimum
    // at the band center.
    grid.spec = PlanterSpec{1, 20, 20, 4, 60};
    for (int m = 0; m < 3; ++m) {
        PlotBoundary p = make_plot(m * 20.0, (m + 1) * 20.0, 50, 160);
        p.row = m;
        grid.plots.push_back(p);
    }
    PlotGrid tuned = finetune_grid(mask, grid);
    for (const auto& p : tuned.plots) {
        CHECK(std::abs(p.y_top_tuned - 50) <= 1);
        CHECK(!p.flagged);
    }
}

TEST_CASE("finetune_grid: tuned top tracks per-plot germination delay") {
    const int jitter = 14;
    PlantMask mask = flanked_field(60, jitter);
    PlotGrid grid;
    grid.m_rows = 3;
    grid.n_ranges = 1;
    grid.spec = PlanterSpec{1, 20, 20, 4, 60};
    for (int m = 0; m < 3; ++m) {
        PlotBoundary p = make_plot(m * 20.0, (m + 1) * 20.0, 50, 160);
        p.row = m;
        grid.plots.push_back(p);
    }
    PlotGrid tuned = finetune_grid(mask, grid);
    // Plot 0's gap band is [30, 84): center 57 = nominal 50 + jitter/2.
    CHECK(std::abs(tuned.plots[0].y_top_tuned - (50 + jitter / 2)) <= 1);
    CHECK(std::abs(tuned.plots[1].y_top_tuned - 50) <= 1);
    CHECK(std::abs(tuned.plots[2].y_top_tuned - 50) <= 1);
}

TEST_CASE("finetune_grid: empty plot is left unchanged") {
    PlantMask mask(40, 100);  // nothing anywhere
    PlotGrid grid;
    grid.m_rows = 2;
    grid.n_ranges = 1;
    grid.spec = PlanterSpec{1, 20, 20, 4, 15};
    for (int m = 0; m < 2; ++m) {
        PlotBoundary p = make_plot(m * 20.0, (m + 1) * 20.0, 10, 90);
        p.row = m;
        grid.plots.push_back(p);
    }
    PlotGrid tuned = finetune_grid(mask, grid);
    for (const auto& p : tuned.plots) {
        CHECK(p.y_top_tuned == 10);
        CHECK(p.y_bot_tuned == 90);
        CHECK(!p.flagged);
    }
}

TEST_CASE("finetune_grid: inverted tuning reverts and flags the plot") {
    // All material except one deep valley mid-plot; both boundaries are
    // pulled onto the valley center, which would invert the plot.
    PlantMask mask(20, 200);
    for (int y = 0; y < 200; ++y) {
        for (int x = 0; x < 20; ++x) mask.set(x, y, 1);
    }
    for (int y = 94; y <= 106; ++y) {
        for (int x = 0; x < 20; ++x) mask.set(x, y, 0);
    }
    PlotGrid grid;
    grid.m_rows = 1;
    grid.n_ranges = 1;
    grid.spec = PlanterSpec{1, 20, 20, 4, 25};
    PlotBoundary p = make_plot(0.0, 19.0, 92, 110);
    grid.plots.push_back(p);
    PlotGrid tuned = finetune_grid(mask, grid);
    CHECK(tuned.plots[0].flagged);
    CHECK(tuned.plots[0].y_top_tuned == 92);
    CHECK(tuned.plots[0].y_bot_tuned == 110);
}

TEST_CASE("finetune_grid: identical results for any worker count") {
    PlantMask mask = flanked_field(120, 7);
    PlotGrid grid;
    grid.m_rows = 6;
    grid.n_ranges = 1;
    grid.spec = PlanterSpec{1, 20, 20, 4, 60};
    for (int m = 0; m < 6; ++m) {
        PlotBoundary p = make_plot(m * 20.0, (m + 1) * 20.0, 50, 160);
        p.row = m;
        grid.plots.push_back(p);
    }
    PlotGrid serial = finetune_grid(mask, grid, 1);
    for (int workers : {2, 5}) {
        PlotGrid par = finetune_grid(mask, grid, workers);
        for (std::size_t i = 0; i < serial.plots.size(); ++i) {
            CHECK(par.plots[i].y_top_tuned == serial.plots[i].y_top_tuned);
            CHECK(par.plots[i].y_bot_tuned == serial.plots[i].y_bot_tuned);
            CHECK(par.plots[i].flagged == serial.plots[i].flagged);
        }
    }
}

TEST_CASE("finetune_grid: smoothed objective never increases at the tuned position") {
    std::mt19937 rng(2718);
    PlantMask mask(40, 120);
    for (auto& b : mask.bits()) b = (rng() % 10) < 3 ? 1 : 0;
    PlotGrid grid;
    grid.m_rows = 2;
    grid.n_ranges = 1;
    grid.spec = PlanterSpec{1, 20, 20, 4, 30};
    for (int m = 0; m < 2; ++m) {
        PlotBoundary p = make_plot(m * 20.0, (m + 1) * 20.0, 35, 85);
        p.row = m;
        grid.plots.push_back(p);
    }
    PlotGrid tuned = finetune_grid(mask, grid);
    for (std::size_t i = 0; i < tuned.plots.size(); ++i) {
        const auto& p = tuned.plots[i];
        EnergyProfile local = local_range_energy(mask, p, grid.spec.d_ran_gap);
        // Oracle smoothing evaluated at both positions.
        auto smoothed_at = [&](int y) {
            std::vector<double> norm = oracle::normalize(local.values);
            std::vector<double> tri = oracle::triangle(grid.spec.d_ran_gap);
            int r = static_cast<int>(tri.size() / 2);
            double acc = 0.0;
            int idx = y - local.origin;
            for (int t = -r; t <= r; ++t) {
                int k = idx + t;
                if (k < 0 || k >= static_cast<int>(norm.size())) continue;
                acc += norm[static_cast<std::size_t>(k)] * tri[static_cast<std::size_t>(r + t)];
            }
            return acc;
        };
        if (!p.flagged) {
            CHECK(smoothed_at(p.y_top_tuned) <= smoothed_at(p.y_top));
            CHECK(smoothed_at(p.y_bot_tuned) <= smoothed_at(p.y_bot));
        }
    }
}
