#include "cope/range_sep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cope/error.hpp"
#include "cope/parallel.hpp"

namespace cope {

namespace {

// Candidate dy values live on a half-pixel grid; dy2 = 2*dy keeps the
// scan and the sample rounding in exact integer arithmetic.
inline int sample_pos(int y0, int n, int dy2) {
    return (2 * y0 + n * dy2 + 1) / 2;  // nearest pixel, halves round up
}

struct FitCandidate {
    std::uint64_t cost = std::numeric_limits<std::uint64_t>::max();
    int y0 = 0;
    int dy2 = 0;
    bool valid = false;

    // Tie order: smaller y0 wins, then smaller dy.
    bool better_than(const FitCandidate& o) const {
        if (!o.valid) return valid;
        if (!valid) return false;
        if (cost != o.cost) return cost < o.cost;
        if (y0 != o.y0) return y0 < o.y0;
        return dy2 < o.dy2;
    }
};

}  // namespace

SearchBox default_search_box(int profile_len, int n_ranges) {
    SearchBox box;
    box.y0_min = 0;
    box.y0_max = profile_len / (n_ranges + 1);
    box.dy_min = 0.5 * profile_len / (n_ranges + 1);
    box.dy_max = 1.5 * profile_len / n_ranges;
    return box;
}

EquidistantFit fit_equidistant(const EnergyProfile& h_ra, int n_ranges, const SearchBox& box,
                               int workers) {
    if (n_ranges < 1) throw ValidationError("fit_equidistant: need at least one range");
    if (h_ra.values.empty()) throw ValidationError("fit_equidistant: empty profile");
    const int len = h_ra.length();
    const int dy2_min = std::max(1, static_cast<int>(std::ceil(box.dy_min * 2.0)));
    const int dy2_max = static_cast<int>(std::floor(box.dy_max * 2.0));
    if (box.y0_min > box.y0_max || dy2_min > dy2_max) {
        throw ValidationError("fit_equidistant: empty search box");
    }

    const std::uint32_t* vals = h_ra.values.data();
    auto evaluate = [&](int y0, int dy2, FitCandidate& best) {
        // Feasible only when every sampled line lands inside the profile.
        if (sample_pos(y0, n_ranges, dy2) > len - 1) return;
        if (y0 < 0) return;
        std::uint64_t cost = 0;
        for (int n = 0; n <= n_ranges; ++n) {
            cost += vals[sample_pos(y0, n, dy2)];
        }
        FitCandidate c{cost, y0, dy2, true};
        if (c.better_than(best)) best = c;
    };

    const int n_y0 = box.y0_max - box.y0_min + 1;
    FitCandidate best;
    if (workers <= 1 || n_y0 < 4) {
        for (int y0 = box.y0_min; y0 <= box.y0_max; ++y0) {
            for (int dy2 = dy2_min; dy2 <= dy2_max; ++dy2) {
                evaluate(y0, dy2, best);
            }
        }
    } else {
        // Partition on y0; per-chunk winners merge in index order so the
        // tie-break is identical to the serial scan.
        int n_chunks = std::min(workers * 4, n_y0);
        std::vector<FitCandidate> chunk_best(static_cast<std::size_t>(n_chunks));
        parallel_tasks(workers, n_chunks, [&](int c) {
            int lo = box.y0_min + static_cast<int>((static_cast<std::int64_t>(n_y0) * c) / n_chunks);
            int hi = box.y0_min +
                     static_cast<int>((static_cast<std::int64_t>(n_y0) * (c + 1)) / n_chunks);
            FitCandidate local;
            for (int y0 = lo; y0 < hi; ++y0) {
                for (int dy2 = dy2_min; dy2 <= dy2_max; ++dy2) {
                    evaluate(y0, dy2, local);
                }
            }
            chunk_best[static_cast<std::size_t>(c)] = local;
        });
        for (const auto& c : chunk_best) {
            if (c.better_than(best)) best = c;
        }
    }

    if (!best.valid) {
        throw ValidationError("fit_equidistant: no feasible (y0, dy) in the search box");
    }
    return EquidistantFit{best.y0, best.dy2 / 2.0};
}

std::vector<int> adjust_lines(const EnergyProfile& h_ra, const std::vector<int>& equidistant,
                              int d_ran_gap) {
    if (d_ran_gap < 0) throw ValidationError("adjust_lines: d_ran_gap must be >= 0");
    const int len = h_ra.length();
    for (int y : equidistant) {
        if (y < 0 || y >= len) {
            throw ValidationError("adjust_lines: line " + std::to_string(y) +
                                  " outside profile [0, " + std::to_string(len - 1) + "]");
        }
    }
    std::vector<int> adjusted;
    adjusted.reserve(equidistant.size());
    for (int y : equidistant) {
        std::uint32_t best_val = h_ra.values[static_cast<std::size_t>(y)];
        int best_delta = 0;
        // |delta| ascending, negative before positive, strict improvement
        // only: realizes the tie-break directly.
        for (int mag = 1; mag <= d_ran_gap; ++mag) {
            for (int delta : {-mag, mag}) {
                int pos = y + delta;
                if (pos < 0 || pos >= len) continue;
                std::uint32_t v = h_ra.values[static_cast<std::size_t>(pos)];
                if (v < best_val) {
                    best_val = v;
                    best_delta = delta;
                }
            }
        }
        adjusted.push_back(y + best_delta);
    }
    return adjusted;
}

RangeSeparation separate_ranges(const EnergyProfile& h_ra, int n_ranges, const SearchBox& box,
                                int d_ran_gap, int workers) {
    EquidistantFit fit = fit_equidistant(h_ra, n_ranges, box, workers);
    RangeSeparation sep;
    sep.delta_y = fit.delta_y;
    sep.equidistant.reserve(static_cast<std::size_t>(n_ranges) + 1);
    int dy2 = static_cast<int>(std::lround(fit.delta_y * 2.0));
    for (int n = 0; n <= n_ranges; ++n) {
        sep.equidistant.push_back((2 * fit.y0 + n * dy2 + 1) / 2);
    }
    sep.adjusted = adjust_lines(h_ra, sep.equidistant, d_ran_gap);
    for (std::size_t i = 1; i < sep.adjusted.size(); ++i) {
        if (sep.adjusted[i] <= sep.adjusted[i - 1]) {
            throw ValidationError("range separation lines " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) +
                                  " are out of order after adjustment; widen the field geometry "
                                  "or reduce d_ran_gap");
        }
    }
    return sep;
}

}  // namespace cope
