#include "cope/row_sep.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "cope/error.hpp"
#include "cope/parallel.hpp"

namespace cope {

void RowSepConfig::validate() const {
    if (w0 < 0 || w1 < 0 || w2 < 0) {
        throw ValidationError("row separation weights must be nonnegative");
    }
    if (w0 == 0 && w1 == 0 && w2 == 0) {
        throw ValidationError("at least one row separation weight must be positive");
    }
}

void FieldShape::validate(int c_rows) const {
    if (m_rows < 1 || n_ranges < 1) {
        throw ValidationError("field shape: M and N must be >= 1");
    }
    if (c_rows < 1 || m_rows % c_rows != 0) {
        throw ValidationError("field shape: M (" + std::to_string(m_rows) +
                              ") must be a multiple of C (" + std::to_string(c_rows) + ")");
    }
}

namespace {

double comb_dot(const CombFunction& comb, const NormalizedProfile& h, int start) {
    double acc = 0.0;
    const int n = comb.length();
    const int lo = h.origin;
    const int hi = h.origin + h.length() - 1;
    int m_begin = std::max(0, lo - start);
    int m_end = std::min(n - 1, hi - start);
    for (int m = m_begin; m <= m_end; ++m) {
        acc += comb.samples[static_cast<std::size_t>(m)] *
               h.values[static_cast<std::size_t>(start + m - lo)];
    }
    return acc;
}

}  // namespace

int optimize_offset(const NormalizedProfile& local, const NormalizedProfile& global,
                    const CombFunction& comb, const PlanterSpec& spec, const RowSepConfig& cfg,
                    int x_off) {
    cfg.validate();
    const int d_gap = spec.d_gap;
    const int lo = local.origin;
    const int hi = local.origin + local.length() - 1;
    if (x_off + d_gap + spec.d_crop < lo || x_off - d_gap > hi) {
        throw ProcessingError("crop set window around x=" + std::to_string(x_off) +
                              " lies entirely outside the profile");
    }

    const double gap_scale = 2.0 / static_cast<double>(d_gap);
    const double row_sq = static_cast<double>(spec.d_row) * static_cast<double>(spec.d_row);

    double best = std::numeric_limits<double>::infinity();
    int best_dx = 0;
    auto consider = [&](int dx) {
        double cost = cfg.w0 * static_cast<double>(dx) * static_cast<double>(dx) / row_sq;
        if (cfg.w1 != 0) cost += cfg.w1 * gap_scale * comb_dot(comb, local, x_off + dx);
        if (cfg.w2 != 0) cost += cfg.w2 * gap_scale * comb_dot(comb, global, x_off + dx);
        if (cost < best) {
            best = cost;
            best_dx = dx;
        }
    };
    // |dx| ascending, negative before positive; strict improvement only.
    consider(0);
    for (int mag = 1; mag <= d_gap; ++mag) {
        consider(-mag);
        consider(mag);
    }
    return best_dx;
}

CropSetLayout layout_range(const PlantMask& mask, int y_lo, int y_hi,
                           const NormalizedProfile& global_norm, const CombFunction& comb,
                           const PlanterSpec& spec, const FieldShape& field,
                           const RowSepConfig& cfg, int range_index, int workers) {
    spec.validate();
    field.validate(spec.c_rows);

    NormalizedProfile local_norm = normalize(local_row_energy(mask, y_lo, y_hi, workers));

    const int n_sets = field.m_rows / spec.c_rows;
    CropSetLayout layout;
    layout.range_index = range_index;
    layout.offsets.reserve(static_cast<std::size_t>(n_sets));
    layout.x_off.reserve(static_cast<std::size_t>(n_sets));

    // Offsets accumulate left to right; each solve anchors at the end of
    // the previous crop set.
    int x_off = 0;
    for (int i = 0; i < n_sets; ++i) {
        layout.x_off.push_back(x_off);
        int dx = optimize_offset(local_norm, global_norm, comb, spec, cfg, x_off);
        layout.offsets.push_back(dx);
        x_off += dx + spec.d_crop;
    }

    // Crop-set boundaries: leading edge, inter-set midpoints, trailing
    // edge.
    layout.set_boundaries.resize(static_cast<std::size_t>(n_sets) + 1);
    layout.set_boundaries[0] = static_cast<double>(layout.offsets[0]);
    for (int j = 1; j < n_sets; ++j) {
        layout.set_boundaries[static_cast<std::size_t>(j)] =
            static_cast<double>(layout.x_off[static_cast<std::size_t>(j)]) +
            static_cast<double>(layout.offsets[static_cast<std::size_t>(j)]) / 2.0;
    }
    layout.set_boundaries[static_cast<std::size_t>(n_sets)] = static_cast<double>(x_off);

    // Plot boundaries: crop-set boundary where m is a set edge, fixed
    // pitch from that edge inside the set.
    layout.plot_boundaries.resize(static_cast<std::size_t>(field.m_rows) + 1);
    for (int m = 0; m <= field.m_rows; ++m) {
        int k = m % spec.c_rows;
        if (k == 0) {
            layout.plot_boundaries[static_cast<std::size_t>(m)] =
                layout.set_boundaries[static_cast<std::size_t>(m / spec.c_rows)];
        } else {
            layout.plot_boundaries[static_cast<std::size_t>(m)] =
                layout.plot_boundaries[static_cast<std::size_t>(m - k)] +
                static_cast<double>(k) * spec.d_row;
        }
    }

    auto check_increasing = [&](const std::vector<double>& v, const char* what) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i] <= v[i - 1]) {
                throw ValidationError(std::string(what) + " " + std::to_string(i - 1) + " and " +
                                      std::to_string(i) + " are out of order in range " +
                                      std::to_string(range_index));
            }
        }
    };
    check_increasing(layout.set_boundaries, "crop-set boundaries");
    check_increasing(layout.plot_boundaries, "plot boundaries");
    return layout;
}

std::vector<CropSetLayout> layout_field(const PlantMask& mask, const RangeSeparation& ranges,
                                        const CombFunction& comb, const PlanterSpec& spec,
                                        const FieldShape& field, const RowSepConfig& cfg,
                                        int workers) {
    const int n = ranges.n_ranges();
    if (n < 1 || n != field.n_ranges) {
        throw ValidationError("layout_field: range separation has " + std::to_string(n) +
                              " ranges, field expects " + std::to_string(field.n_ranges));
    }
    NormalizedProfile global_norm = normalize(global_row_energy(mask, workers));

    std::vector<CropSetLayout> layouts(static_cast<std::size_t>(n));
    parallel_tasks(workers, n, [&](int z) {
        try {
            layouts[static_cast<std::size_t>(z)] =
                layout_range(mask, ranges.adjusted[static_cast<std::size_t>(z)],
                             ranges.adjusted[static_cast<std::size_t>(z) + 1], global_norm, comb,
                             spec, field, cfg, z, 1);
        } catch (const Error& e) {
            rethrow_with_context(e, "range " + std::to_string(z) + ": ");
        }
    });
    return layouts;
}

}  // namespace cope
