#include "cope/synthgen.hpp"

#include <algorithm>
#include <random>

#include "cope/error.hpp"

namespace cope {

namespace {

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int int_draw(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

void SynthConfig::validate() const {
    spec.validate();
    if (m_rows < 1 || n_ranges < 1) throw ValidationError("synth: M and N must be >= 1");
    if (m_rows % spec.c_rows != 0) throw ValidationError("synth: M must be a multiple of C");
    if (plant_density < 0 || plant_density > 1 || noise_density < 0 || noise_density > 1 ||
        empty_plot_fraction < 0 || empty_plot_fraction > 1) {
        throw ValidationError("synth: densities must lie in [0, 1]");
    }
    if (noise_density >= plant_density && plant_density > 0) {
        throw ValidationError("synth: noise_density must be below plant_density");
    }
    if (germination_jitter < 0) throw ValidationError("synth: jitter must be >= 0");
    if (range_gap < 2 || range_pitch <= range_gap) {
        throw ValidationError("synth: need range_pitch > range_gap >= 2");
    }
    if (!crop_set_offsets.empty()) {
        if (static_cast<int>(crop_set_offsets.size()) != n_ranges) {
            throw ValidationError("synth: crop_set_offsets must have one list per range");
        }
        for (const auto& per_range : crop_set_offsets) {
            if (static_cast<int>(per_range.size()) != m_rows / spec.c_rows) {
                throw ValidationError("synth: each offset list needs M/C entries");
            }
            for (int v : per_range) {
                if (std::abs(v) > spec.d_gap) {
                    throw ValidationError("synth: |offset| must not exceed d_gap");
                }
            }
        }
    }
    if (!range_lines.empty() && static_cast<int>(range_lines.size()) != n_ranges + 1) {
        throw ValidationError("synth: range_lines must have N+1 entries");
    }
}

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    const int c = cfg.spec.c_rows;
    const int m_rows = cfg.m_rows;
    const int n_ranges = cfg.n_ranges;
    const int n_sets = m_rows / c;
    const int d_gap = cfg.spec.d_gap;
    const int d_row = cfg.spec.d_row;
    const int d_crop = cfg.spec.d_crop;
    const int jmax = cfg.germination_jitter;

    std::mt19937_64 rng(cfg.seed);

    SynthResult out;

    // Draw 1: true offsets.
    if (cfg.crop_set_offsets.empty()) {
        out.offsets.assign(static_cast<std::size_t>(n_ranges), {});
        for (int z = 0; z < n_ranges; ++z) {
            auto& per_range = out.offsets[static_cast<std::size_t>(z)];
            per_range.reserve(static_cast<std::size_t>(n_sets));
            for (int i = 0; i < n_sets; ++i) {
                per_range.push_back(i == 0 ? int_draw(rng, d_gap / 4, d_gap / 2)
                                           : int_draw(rng, -d_gap / 4, d_gap / 4));
            }
        }
    } else {
        out.offsets = cfg.crop_set_offsets;
    }

    // Draw 2: per-plot empty flags and jitter, range-major.
    std::vector<std::uint8_t> empty_flags(static_cast<std::size_t>(m_rows) * n_ranges, 0);
    out.jitter.assign(static_cast<std::size_t>(m_rows) * n_ranges, 0);
    for (int z = 0; z < n_ranges; ++z) {
        for (int m = 0; m < m_rows; ++m) {
            std::size_t idx = static_cast<std::size_t>(z) * m_rows + m;
            empty_flags[idx] = unit_draw(rng) < cfg.empty_plot_fraction ? 1 : 0;
            out.jitter[idx] = int_draw(rng, 0, jmax);
        }
    }

    // Range boundary lines.
    if (cfg.range_lines.empty()) {
        out.range_lines.resize(static_cast<std::size_t>(n_ranges) + 1);
        for (int z = 0; z <= n_ranges; ++z) {
            out.range_lines[static_cast<std::size_t>(z)] = cfg.guard_rows + z * cfg.range_pitch;
        }
    } else {
        out.range_lines = cfg.range_lines;
    }
    const std::vector<int>& lines = out.range_lines;
    const int gy_lo = cfg.range_gap / 2;
    const int gy_hi = cfg.range_gap - gy_lo;

    // Per-range crop-set origins (first gap center of each set).
    std::vector<std::vector<int>> set_origin(static_cast<std::size_t>(n_ranges));
    int max_center = 0;
    for (int z = 0; z < n_ranges; ++z) {
        auto& origins = set_origin[static_cast<std::size_t>(z)];
        origins.resize(static_cast<std::size_t>(n_sets));
        int x_off = 0;
        for (int i = 0; i < n_sets; ++i) {
            origins[static_cast<std::size_t>(i)] =
                x_off + out.offsets[static_cast<std::size_t>(z)][static_cast<std::size_t>(i)];
            x_off = origins[static_cast<std::size_t>(i)] + d_crop;
        }
        max_center = std::max(max_center, origins.back() + c * d_row);
    }

    const int gx_lo = d_gap / 2;
    const int gx_hi = d_gap - gx_lo;
    const int width = cfg.width > 0 ? cfg.width : max_center + gx_hi;
    const int height = cfg.height > 0 ? cfg.height : lines.back() + cfg.guard_rows;

    // Geometry checks: material must fit the raster and jitter must not
    // swallow a whole plot.
    for (int z = 0; z < n_ranges; ++z) {
        int plot_rows = lines[static_cast<std::size_t>(z) + 1] - gy_lo -
                        (lines[static_cast<std::size_t>(z)] + gy_hi);
        if (plot_rows <= jmax) {
            throw ValidationError("synth: range " + std::to_string(z) +
                                  " is too short for the requested jitter");
        }
    }
    // Edge gap bands may clip at the raster, but plant material must fit.
    if (lines.front() < 0 || lines.back() - gy_lo > height || max_center + gx_hi > width) {
        throw ValidationError("synth: field geometry overflows the raster");
    }
    for (const auto& origins : set_origin) {
        if (origins.front() - gx_lo < -d_gap) {
            throw ValidationError("synth: first crop set starts before the raster");
        }
    }

    // Column classification per range: which plot column a pixel belongs
    // to, or -1 in a gap / outside the field.
    std::vector<std::vector<int>> col_plot(static_cast<std::size_t>(n_ranges));
    for (int z = 0; z < n_ranges; ++z) {
        auto& cols = col_plot[static_cast<std::size_t>(z)];
        cols.assign(static_cast<std::size_t>(width), -1);
        for (int i = 0; i < n_sets; ++i) {
            int origin = set_origin[static_cast<std::size_t>(z)][static_cast<std::size_t>(i)];
            for (int k = 0; k < c; ++k) {
                int lo = origin + k * d_row + gx_hi;
                int hi = origin + (k + 1) * d_row - gx_lo;  // exclusive
                for (int x = std::max(0, lo); x < std::min(width, hi); ++x) {
                    cols[static_cast<std::size_t>(x)] = i * c + k;
                }
            }
        }
    }

    // Row classification: guard bands, gap bands, jitter window, plot
    // interior.
    enum class Zone : std::uint8_t { guard_top, guard_bot, band, jitter_window, interior };
    std::vector<Zone> row_zone(static_cast<std::size_t>(height));
    std::vector<int> row_range(static_cast<std::size_t>(height), 0);
    std::vector<int> row_depth(static_cast<std::size_t>(height), 0);  // depth into the jitter window
    for (int y = 0; y < height; ++y) {
        std::size_t yi = static_cast<std::size_t>(y);
        if (y < lines.front() - gy_lo) {
            row_zone[yi] = Zone::guard_top;
            row_range[yi] = 0;
        } else if (y >= lines.back() + gy_hi) {
            row_zone[yi] = Zone::guard_bot;
            row_range[yi] = n_ranges - 1;
        } else {
            int z = n_ranges;
            while (z > 0 && y < lines[static_cast<std::size_t>(z)] - gy_lo) --z;
            // y >= lines[z] - gy_lo (z in [0, N]); decide against band z.
            if (z < static_cast<int>(lines.size()) - 1 &&
                y >= lines[static_cast<std::size_t>(z)] + gy_hi + jmax) {
                row_zone[yi] = Zone::interior;
                row_range[yi] = z;
            } else if (z < static_cast<int>(lines.size()) - 1 &&
                       y >= lines[static_cast<std::size_t>(z)] + gy_hi) {
                row_zone[yi] = Zone::jitter_window;
                row_range[yi] = z;
                row_depth[yi] = y - (lines[static_cast<std::size_t>(z)] + gy_hi);
            } else {
                row_zone[yi] = Zone::band;
                row_range[yi] = std::min(z, n_ranges - 1);
            }
        }
    }

    // Draw 3: pixel pass, one draw per pixel.
    out.mask = PlantMask(width, height);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = out.mask.row(y);
        std::size_t yi = static_cast<std::size_t>(y);
        Zone zone = row_zone[yi];
        int z = row_range[yi];
        const int* cols = col_plot[static_cast<std::size_t>(z)].data();
        for (int x = 0; x < width; ++x) {
            double u = unit_draw(rng);
            double density = cfg.noise_density;
            int m = cols[x];
            if (m >= 0) {
                switch (zone) {
                    case Zone::guard_top:
                    case Zone::guard_bot:
                        density = cfg.plant_density;
                        break;
                    case Zone::interior:
                    case Zone::jitter_window: {
                        std::size_t idx = static_cast<std::size_t>(z) * m_rows + m;
                        bool grown = zone == Zone::interior ||
                                     out.jitter[idx] <= row_depth[yi];
                        if (grown && !empty_flags[idx]) density = cfg.plant_density;
                        break;
                    }
                    case Zone::band:
                        break;
                }
            }
            row[x] = u < density ? 1 : 0;
        }
    }

    // Ground truth: boundary lines from the true offsets via the same
    // crop-set boundary convention the extractor uses.
    for (int z = 0; z < n_ranges; ++z) {
        std::vector<double> bound(static_cast<std::size_t>(m_rows) + 1, 0.0);
        const auto& offs = out.offsets[static_cast<std::size_t>(z)];
        const auto& origins = set_origin[static_cast<std::size_t>(z)];
        for (int m = 0; m <= m_rows; ++m) {
            int i = m / c;
            int k = m % c;
            double anchor;
            if (i == 0) {
                anchor = static_cast<double>(origins[0]);
            } else if (i < n_sets) {
                anchor = static_cast<double>(origins[static_cast<std::size_t>(i)]) -
                         static_cast<double>(offs[static_cast<std::size_t>(i)]) / 2.0;
            } else {
                anchor = static_cast<double>(origins.back() + d_crop);  // m == M
            }
            bound[static_cast<std::size_t>(m)] = anchor + static_cast<double>(k) * d_row;
        }
        for (int m = 0; m < m_rows; ++m) {
            std::size_t idx = static_cast<std::size_t>(z) * m_rows + m;
            GroundTruthPlot plot;
            plot.row = m;
            plot.range = z;
            plot.empty = empty_flags[idx] != 0;
            plot.rect.x_left = bound[static_cast<std::size_t>(m)];
            plot.rect.x_right = bound[static_cast<std::size_t>(m) + 1];
            plot.rect.y_top = static_cast<double>(lines[static_cast<std::size_t>(z)]) +
                              static_cast<double>(out.jitter[idx]) / 2.0;
            double below_jitter = 0.0;
            if (z + 1 < n_ranges) {
                below_jitter = static_cast<double>(
                    out.jitter[static_cast<std::size_t>(z + 1) * m_rows + m]);
            }
            plot.rect.y_bot = static_cast<double>(lines[static_cast<std::size_t>(z) + 1]) +
                              below_jitter / 2.0;
            out.truth.plots.push_back(plot);
        }
    }
    return out;
}

}  // namespace cope
