#pragma once

// Independent reference implementations used to cross-check the library.
// Deliberately naive: exhaustive enumeration, no shared code with clmea.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline bool dominates(const Point& a, const Point& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) {
            return false;
        }
        strict = strict || a[k] < b[k];
    }
    return strict;
}

/// Fronts by repeated extraction of the points no remaining point dominates.
inline std::vector<std::vector<std::size_t>> peel_fronts(const std::vector<Point>& pts) {
    std::vector<bool> taken(pts.size(), false);
    std::vector<std::vector<std::size_t>> fronts;
    std::size_t left = pts.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (taken[i]) {
                continue;
            }
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                dominated = !taken[j] && dominates(pts[j], pts[i]);
            }
            if (!dominated) {
                front.push_back(i);
            }
        }
        for (const auto i : front) {
            taken[i] = true;
        }
        left -= front.size();
        fronts.push_back(front);
    }
    return fronts;
}

/// 2-D hypervolume by inclusion-exclusion over all non-empty subsets.
inline double hv_inclusion_exclusion(const std::vector<Point>& front, const Point& ref) {
    const std::size_t n = front.size();
    double total = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        double x = -std::numeric_limits<double>::infinity();
        double y = -std::numeric_limits<double>::infinity();
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                x = std::max(x, front[i][0]);
                y = std::max(y, front[i][1]);
                ++bits;
            }
        }
        const double box = std::max(0.0, ref[0] - x) * std::max(0.0, ref[1] - y);
        total += (bits % 2 == 1) ? box : -box;
    }
    return total;
}

/// Hypervolume by coordinate compression: sums every grid cell whose lower
/// corner is dominated by some point. Works for any M, cost O(n^M * n).
inline double hv_grid(const std::vector<Point>& front, const Point& ref) {
    const std::size_t m = ref.size();
    std::vector<std::vector<double>> axis(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (const auto& p : front) {
            if (p[k] < ref[k]) {
                axis[k].push_back(p[k]);
            }
        }
        axis[k].push_back(ref[k]);
        std::sort(axis[k].begin(), axis[k].end());
        axis[k].erase(std::unique(axis[k].begin(), axis[k].end()), axis[k].end());
    }
    std::vector<std::size_t> idx(m, 0);
    double total = 0.0;
    while (true) {
        bool valid = true;
        for (std::size_t k = 0; k < m; ++k) {
            valid = valid && idx[k] + 1 < axis[k].size();
        }
        if (valid) {
            bool covered = false;
            for (const auto& p : front) {
                bool all = true;
                for (std::size_t k = 0; k < m && all; ++k) {
                    all = p[k] <= axis[k][idx[k]];
                }
                if (all) {
                    covered = true;
                    break;
                }
            }
            if (covered) {
                double volume = 1.0;
                for (std::size_t k = 0; k < m; ++k) {
                    volume *= axis[k][idx[k] + 1] - axis[k][idx[k]];
                }
                total += volume;
            }
        }
        std::size_t k = 0;
        while (k < m && ++idx[k] >= axis[k].size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == m) {
            break;
        }
    }
    return total;
}

/// Two-sided signed-rank p-value by enumerating all 2^n sign assignments of
/// the observed (average) ranks.
inline double wilcoxon_enumerated_p(const std::vector<double>& diffs) {
    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(diffs[a]) < std::abs(diffs[b]); });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
            ++j;
        }
        for (std::size_t t = i; t <= j; ++t) {
            rank[order[t]] = (static_cast<double>(i + j) + 2.0) / 2.0;
        }
        i = j + 1;
    }
    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0) {
            observed += rank[i];
        }
    }
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                w += rank[i];
            }
        }
        lower += w <= observed + 1e-9 ? 1 : 0;
        upper += w >= observed - 1e-9 ? 1 : 0;
    }
    const double p = 2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(total);
    return std::min(1.0, p);
}

inline double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

inline double nearest(const Point& p, const std::vector<Point>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : set) {
        best = std::min(best, distance(p, q));
    }
    return best;
}

/// Maps each coordinate with (v - lo) / (hi - lo), a zero range mapping to v - lo.
inline std::vector<Point> minmax_scale(const std::vector<Point>& pts, const std::vector<Point>& basis) {
    const std::size_t m = basis.front().size();
    Point lo(m, std::numeric_limits<double>::infinity());
    Point hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& p : basis) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    std::vector<Point> out;
    for (const auto& p : pts) {
        Point q(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double r = hi[k] - lo[k];
            q[k] = (p[k] - lo[k]) / (r > 0 ? r : 1.0);
        }
        out.push_back(q);
    }
    return out;
}

} // namespace oracle
