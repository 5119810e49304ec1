#include "cope/profile.hpp"

#include <algorithm>

#include "cope/error.hpp"
#include "cope/kernels.hpp"
#include "cope/parallel.hpp"

namespace cope {

namespace {

void check_nonempty(const PlantMask& mask) {
    if (mask.width() <= 0 || mask.height() <= 0) {
        throw ValidationError("profile: mask is empty");
    }
}

// Splits [0, n) into `parts` contiguous chunks.
std::vector<std::pair<int, int>> chunk_ranges(int n, int parts) {
    parts = std::max(1, std::min(parts, n));
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(parts));
    int base = n / parts;
    int extra = n % parts;
    int start = 0;
    for (int i = 0; i < parts; ++i) {
        int len = base + (i < extra ? 1 : 0);
        out.emplace_back(start, start + len);
        start += len;
    }
    return out;
}

}  // namespace

EnergyProfile range_energy(const PlantMask& mask, int workers) {
    check_nonempty(mask);
    EnergyProfile p;
    p.axis = Axis::along_y;
    p.origin = 0;
    p.values.assign(static_cast<std::size_t>(mask.height()), 0);
    auto chunks = chunk_ranges(mask.height(), workers);
    parallel_tasks(workers, static_cast<int>(chunks.size()), [&](int i) {
        auto [lo, hi] = chunks[static_cast<std::size_t>(i)];
        kernels::row_sums(mask.row(lo), static_cast<std::size_t>(mask.width()), mask.width(),
                          hi - lo, p.values.data() + lo);
    });
    return p;
}

EnergyProfile global_row_energy(const PlantMask& mask, int workers) {
    check_nonempty(mask);
    return local_row_energy(mask, 0, mask.height() - 1, workers);
}

EnergyProfile local_row_energy(const PlantMask& mask, int y_lo, int y_hi, int workers) {
    check_nonempty(mask);
    if (y_lo < 0 || y_hi >= mask.height() || y_lo > y_hi) {
        throw ValidationError("local_row_energy: bad row band [" + std::to_string(y_lo) + ", " +
                              std::to_string(y_hi) + "] for mask height " +
                              std::to_string(mask.height()));
    }
    EnergyProfile p;
    p.axis = Axis::along_x;
    p.origin = 0;
    p.values.assign(static_cast<std::size_t>(mask.width()), 0);

    int rows = y_hi - y_lo + 1;
    auto chunks = chunk_ranges(rows, workers);
    if (chunks.size() == 1) {
        kernels::column_sums_accumulate(mask.row(y_lo), static_cast<std::size_t>(mask.width()),
                                        mask.width(), rows, p.values.data());
        return p;
    }
    // Per-chunk partial sums reduced in chunk order; integer adds make
    // the result identical for any worker count.
    std::vector<std::vector<std::uint32_t>> partial(chunks.size());
    parallel_tasks(workers, static_cast<int>(chunks.size()), [&](int i) {
        auto [lo, hi] = chunks[static_cast<std::size_t>(i)];
        partial[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(mask.width()), 0);
        kernels::column_sums_accumulate(mask.row(y_lo + lo), static_cast<std::size_t>(mask.width()),
                                        mask.width(), hi - lo,
                                        partial[static_cast<std::size_t>(i)].data());
    });
    for (const auto& part : partial) {
        for (std::size_t x = 0; x < part.size(); ++x) p.values[x] += part[x];
    }
    return p;
}

NormalizedProfile normalize(const EnergyProfile& p) {
    if (p.values.empty()) {
        throw ValidationError("normalize: empty profile");
    }
    NormalizedProfile out;
    out.axis = p.axis;
    out.origin = p.origin;
    out.values.resize(p.values.size());
    double mean = static_cast<double>(p.total()) / static_cast<double>(p.values.size());
    if (mean == 0.0) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        double v = static_cast<double>(p.values[i]);
        out.values[i] = v >= mean ? 1.0 : v / mean;
    }
    return out;
}

}  // namespace cope
