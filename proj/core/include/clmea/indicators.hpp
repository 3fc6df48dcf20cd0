#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clmea/random.hpp"
#include "clmea/types.hpp"

namespace clmea {

/// Exact hypervolume dominated by `front` and bounded by `reference`.
/// Points not strictly better than the reference in every objective contribute
/// nothing. Supports two and three objectives; throws UnsupportedDimension otherwise.
double hypervolume(const std::vector<ObjectiveVector>& front, std::span<const double> reference);

struct MonteCarloEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Uniform sampling estimate over the box [min(front), reference]. Works for any M.
MonteCarloEstimate mc_hypervolume(const std::vector<ObjectiveVector>& front, std::span<const double> reference,
                                  std::size_t samples, Rng& rng);

/// HV(front + candidate) - HV(front). Exactly zero when the candidate is weakly
/// dominated by the front or lies outside the reference box.
double hv_improvement(const std::vector<ObjectiveVector>& front, std::span<const double> candidate,
                      std::span<const double> reference);

/// Mean distance from each reference-front point to its nearest solution.
double igd(const std::vector<ObjectiveVector>& reference_front, const std::vector<ObjectiveVector>& solutions);

/// Componentwise max of `points`, scaled by `scale` for positive coordinates and
/// shifted by (scale - 1) otherwise.
ObjectiveVector adaptive_reference_point(const std::vector<ObjectiveVector>& points, double scale = 1.1);

} // namespace clmea
