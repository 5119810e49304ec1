#pragma once

// Independent brute-force implementations of every optimization the
// library performs, written directly from the objective definitions and
// structured differently from the library (candidate lists + explicit
// tie keys instead of streaming scans). Used to pin argmin positions
// and tie-breaks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

namespace oracle {

struct FitResult {
    int y0 = 0;
    int dy2 = 0;  // delta-y in half pixels
    bool valid = false;
};

// Minimizes sum over n of h[round(y0 + n * dy)] by full enumeration.
inline FitResult fit_equidistant(const std::vector<std::uint32_t>& h, int n_ranges, int y0_min,
                                 int y0_max, double dy_min, double dy_max) {
    struct Cand {
        std::uint64_t cost;
        int y0;
        int dy2;
    };
    std::vector<Cand> cands;
    int dy2_min = std::max(1, static_cast<int>(std::ceil(dy_min * 2.0)));
    int dy2_max = static_cast<int>(std::floor(dy_max * 2.0));
    const int len = static_cast<int>(h.size());
    for (int y0 = std::max(0, y0_min); y0 <= y0_max; ++y0) {
        for (int dy2 = dy2_min; dy2 <= dy2_max; ++dy2) {
            bool ok = true;
            std::uint64_t cost = 0;
            for (int n = 0; n <= n_ranges; ++n) {
                int pos = static_cast<int>(std::floor(y0 + n * (dy2 / 2.0) + 0.5));
                if (pos < 0 || pos >= len) {
                    ok = false;
                    break;
                }
                cost += h[static_cast<std::size_t>(pos)];
            }
            if (ok) cands.push_back({cost, y0, dy2});
        }
    }
    FitResult res;
    if (cands.empty()) return res;
    auto best = std::min_element(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.cost, a.y0, a.dy2) < std::tie(b.cost, b.y0, b.dy2);
    });
    res.y0 = best->y0;
    res.dy2 = best->dy2;
    res.valid = true;
    return res;
}

// Minimum of h within [y - d, y + d], ties at smaller |delta| first and
// negative before positive.
inline int adjust_line(const std::vector<std::uint32_t>& h, int y, int d) {
    struct Cand {
        std::uint32_t val;
        int abs_delta;
        int positive;
        int delta;
    };
    std::vector<Cand> cands;
    for (int delta = -d; delta <= d; ++delta) {
        int pos = y + delta;
        if (pos < 0 || pos >= static_cast<int>(h.size())) continue;
        cands.push_back({h[static_cast<std::size_t>(pos)], std::abs(delta), delta > 0 ? 1 : 0,
                         delta});
    }
    auto best = std::min_element(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.val, a.abs_delta, a.positive) < std::tie(b.val, b.abs_delta, b.positive);
    });
    return y + best->delta;
}

// Offset objective from its definition. Profile samples outside
// [origin, origin + len) count as zero. The arithmetic mirrors the
// term order of the definition so costs are bit-comparable.
inline double offset_cost(const std::vector<double>& comb, const std::vector<double>& local,
                          int local_origin, const std::vector<double>& global, int global_origin,
                          double w0, double w1, double w2, int d_row, int d_gap, int x_off,
                          int dx) {
    auto dot = [&](const std::vector<double>& h, int origin) {
        double acc = 0.0;
        for (std::size_t m = 0; m < comb.size(); ++m) {
            int pos = x_off + dx + static_cast<int>(m);
            int idx = pos - origin;
            if (idx < 0 || idx >= static_cast<int>(h.size())) continue;
            acc += comb[m] * h[static_cast<std::size_t>(idx)];
        }
        return acc;
    };
    double gap_scale = 2.0 / static_cast<double>(d_gap);
    double cost = w0 * static_cast<double>(dx) * static_cast<double>(dx) /
                  (static_cast<double>(d_row) * static_cast<double>(d_row));
    if (w1 != 0) cost += w1 * gap_scale * dot(local, local_origin);
    if (w2 != 0) cost += w2 * gap_scale * dot(global, global_origin);
    return cost;
}

inline int optimize_offset(const std::vector<double>& comb, const std::vector<double>& local,
                           int local_origin, const std::vector<double>& global, int global_origin,
                           double w0, double w1, double w2, int d_row, int d_gap, int x_off) {
    struct Cand {
        double cost;
        int abs_dx;
        int positive;
        int dx;
    };
    std::vector<Cand> cands;
    for (int dx = -d_gap; dx <= d_gap; ++dx) {
        double cost = offset_cost(comb, local, local_origin, global, global_origin, w0, w1, w2,
                                  d_row, d_gap, x_off, dx);
        cands.push_back({cost, std::abs(dx), dx > 0 ? 1 : 0, dx});
    }
    auto best = std::min_element(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.cost, a.abs_dx, a.positive) < std::tie(b.cost, b.abs_dx, b.positive);
    });
    return best->dx;
}

// Unit-height triangle of the requested (odd) sample count.
inline std::vector<double> triangle(int width) {
    int n = width % 2 == 1 ? width : width + 1;
    std::vector<double> t(static_cast<std::size_t>(n));
    int r = n / 2;
    for (int i = 0; i < n; ++i) {
        t[static_cast<std::size_t>(i)] = 1.0 - std::abs(i - r) / static_cast<double>(r + 1);
    }
    return t;
}

// Full discrete convolution, center trim to the comb length, clip at 1.
inline std::vector<double> modified_comb(const std::vector<double>& comb,
                                         const std::vector<double>& tri) {
    std::size_t full = comb.size() + tri.size() - 1;
    std::vector<double> conv(full, 0.0);
    for (std::size_t i = 0; i < comb.size(); ++i) {
        for (std::size_t j = 0; j < tri.size(); ++j) {
            conv[i + j] += comb[i] * tri[j];
        }
    }
    std::size_t r = (tri.size() - 1) / 2;
    std::vector<double> out(comb.size());
    for (std::size_t i = 0; i < comb.size(); ++i) {
        out[i] = std::min(1.0, conv[i + r]);
    }
    return out;
}

// Normalization rule: 1 at or above the mean, value/mean below it.
inline std::vector<double> normalize(const std::vector<std::uint32_t>& raw) {
    double sum = 0.0;
    for (std::uint32_t v : raw) sum += static_cast<double>(v);
    double mean = sum / static_cast<double>(raw.size());
    std::vector<double> out(raw.size(), 0.0);
    if (mean == 0.0) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double v = static_cast<double>(raw[i]);
        out[i] = v >= mean ? 1.0 : v / mean;
    }
    return out;
}

// Boundary fine-tune from the definition: normalize, smooth with the
// triangle (zero padding), scan |delta| <= d.
inline int tune_boundary(const std::vector<std::uint32_t>& local, int origin, int y, int d,
                         int tri_width) {
    if (d <= 0) return y;
    std::vector<double> norm = normalize(local);
    std::vector<double> tri = triangle(tri_width);
    int r = static_cast<int>(tri.size() / 2);
    int len = static_cast<int>(norm.size());
    std::vector<double> smoothed(norm.size(), 0.0);
    for (int i = 0; i < len; ++i) {
        double acc = 0.0;
        for (int t = -r; t <= r; ++t) {
            if (i + t < 0 || i + t >= len) continue;
            acc += norm[static_cast<std::size_t>(i + t)] * tri[static_cast<std::size_t>(r + t)];
        }
        smoothed[static_cast<std::size_t>(i)] = acc;
    }
    struct Cand {
        double val;
        int abs_delta;
        int positive;
        int delta;
    };
    std::vector<Cand> cands;
    for (int delta = -d; delta <= d; ++delta) {
        int idx = y + delta - origin;
        if (idx < 0 || idx >= len) continue;
        cands.push_back({smoothed[static_cast<std::size_t>(idx)], std::abs(delta),
                         delta > 0 ? 1 : 0, delta});
    }
    if (cands.empty()) return y;
    auto best = std::min_element(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.val, a.abs_delta, a.positive) < std::tie(b.val, b.abs_delta, b.positive);
    });
    return y + best->delta;
}

}  // namespace oracle
