#include "clmea/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clmea/errors.hpp"
#include "clmea/kernel.hpp"

namespace clmea {
namespace {

using Point2 = std::pair<double, double>;

// Area dominated by 2-D points (all strictly inside the reference box).
double sweep_2d(std::vector<Point2> points, double ref_x, double ref_y) {
    std::sort(points.begin(), points.end());
    double area = 0.0;
    double ceiling = ref_y;
    for (const auto& [x, y] : points) {
        if (y < ceiling) {
            area += (ref_x - x) * (ceiling - y);
            ceiling = y;
        }
    }
    return area;
}

std::vector<ObjectiveVector> inside_box(const std::vector<ObjectiveVector>& front, std::span<const double> reference) {
    std::vector<ObjectiveVector> kept;
    for (const auto& p : front) {
        require(p.size() == reference.size(), "hypervolume: point and reference differ in length");
        bool inside = true;
        for (std::size_t k = 0; k < p.size() && inside; ++k) {
            inside = p[k] < reference[k];
        }
        if (inside) {
            kept.push_back(p);
        }
    }
    return kept;
}

double volume_3d(std::vector<ObjectiveVector> points, std::span<const double> reference) {
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    double volume = 0.0;
    std::vector<Point2> slice;
    for (std::size_t i = 0; i < points.size(); ++i) {
        slice.emplace_back(points[i][0], points[i][1]);
        const double next_z = i + 1 < points.size() ? points[i + 1][2] : reference[2];
        const double depth = next_z - points[i][2];
        if (depth > 0.0) {
            volume += sweep_2d(slice, reference[0], reference[1]) * depth;
        }
    }
    return volume;
}

} // namespace

double hypervolume(const std::vector<ObjectiveVector>& front, std::span<const double> reference) {
    const std::size_t m = reference.size();
    if (m != 2 && m != 3) {
        throw UnsupportedDimension("hypervolume: exact computation supports 2 or 3 objectives");
    }
    auto points = inside_box(front, reference);
    if (points.empty()) {
        return 0.0;
    }
    if (m == 2) {
        std::vector<Point2> p2;
        p2.reserve(points.size());
        for (const auto& p : points) {
            p2.emplace_back(p[0], p[1]);
        }
        return sweep_2d(std::move(p2), reference[0], reference[1]);
    }
    return volume_3d(std::move(points), reference);
}

MonteCarloEstimate mc_hypervolume(const std::vector<ObjectiveVector>& front, std::span<const double> reference,
                                  std::size_t samples, Rng& rng) {
    const auto points = inside_box(front, reference);
    if (points.empty() || samples == 0) {
        return {};
    }
    const std::size_t m = reference.size();
    ObjectiveVector lo(reference.begin(), reference.end());
    for (const auto& p : points) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], p[k]);
        }
    }
    double box = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        box *= reference[k] - lo[k];
    }
    if (!(box > 0.0)) {
        return {};
    }
    std::size_t hits = 0;
    ObjectiveVector s(m);
    for (std::size_t t = 0; t < samples; ++t) {
        for (std::size_t k = 0; k < m; ++k) {
            s[k] = rng.uniform(lo[k], reference[k]);
        }
        for (const auto& p : points) {
            if (weakly_dominates(p, s)) {
                ++hits;
                break;
            }
        }
    }
    const double n = static_cast<double>(samples);
    const double fraction = static_cast<double>(hits) / n;
    return {box * fraction, box * std::sqrt(fraction * (1.0 - fraction) / n)};
}

double hv_improvement(const std::vector<ObjectiveVector>& front, std::span<const double> candidate,
                      std::span<const double> reference) {
    require(!front.empty(), "hv_improvement: existing front must be non-empty");
    require(candidate.size() == reference.size(), "hv_improvement: candidate and reference differ in length");
    for (std::size_t k = 0; k < candidate.size(); ++k) {
        if (!(candidate[k] < reference[k])) {
            return 0.0;
        }
    }
    for (const auto& p : front) {
        if (weakly_dominates(p, candidate)) {
            return 0.0;
        }
    }
    std::vector<ObjectiveVector> extended = front;
    extended.emplace_back(candidate.begin(), candidate.end());
    return std::max(0.0, hypervolume(extended, reference) - hypervolume(front, reference));
}

double igd(const std::vector<ObjectiveVector>& reference_front, const std::vector<ObjectiveVector>& solutions) {
    require(!solutions.empty(), "igd: solution set must be non-empty");
    require(!reference_front.empty(), "igd: reference front must be non-empty");
    double total = 0.0;
    for (const auto& p : reference_front) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : solutions) {
            best = std::min(best, squared_distance(p, q));
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference_front.size());
}

ObjectiveVector adaptive_reference_point(const std::vector<ObjectiveVector>& points, double scale) {
    require(!points.empty(), "adaptive_reference_point: no points");
    ObjectiveVector z = points.front();
    for (const auto& p : points) {
        for (std::size_t k = 0; k < z.size(); ++k) {
            z[k] = std::max(z[k], p[k]);
        }
    }
    for (double& v : z) {
        v = v > 0.0 ? v * scale : v + (scale - 1.0);
    }
    return z;
}

} // namespace clmea
