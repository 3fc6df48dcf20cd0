#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "clmea/random.hpp"
#include "clmea/types.hpp"

namespace clmea {

/// Pareto dominance under minimization: a is no worse everywhere and strictly
/// better somewhere. Throws ContractViolation on length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// a is no worse than b in every objective.
bool weakly_dominates(std::span<const double> a, std::span<const double> b);

using Front = std::vector<std::size_t>;

/// Partitions the indices of `objectives` into successive non-dominated fronts.
/// Front 0 is the maximal non-dominated set; indices inside a front keep input order.
std::vector<Front> nondominated_sort(const std::vector<ObjectiveVector>& objectives);

/// 1-based front index of every point.
std::vector<std::size_t> front_ranks(const std::vector<ObjectiveVector>& objectives);

/// Indices of the non-dominated points in input order.
Front first_front(const std::vector<ObjectiveVector>& objectives);

/// NSGA-II crowding distance with per-objective max-min normalization inside the
/// front. Per-objective extremes receive +infinity.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front_objectives);

/// Front index (1-based) and crowding distance for each member of a population.
struct RankedPopulation {
    std::vector<std::size_t> front_index;
    std::vector<double> crowding;
    std::vector<Front> fronts;
};

RankedPopulation rank_population(const std::vector<ObjectiveVector>& objectives);

/// Picks min(count, |objectives|) indices by ascending front, then descending
/// crowding, then input order. The result is ordered by that preference.
std::vector<std::size_t> environmental_selection(const std::vector<ObjectiveVector>& objectives,
                                                 std::size_t count);

/// Binary tournament on (front index, crowding). Returns `count` parent indices.
std::vector<std::size_t> tournament_selection(const RankedPopulation& ranked, std::size_t count, Rng& rng);

std::vector<DecisionVector> latin_hypercube_sample(std::size_t count, const BoundsBox& bounds, Rng& rng);

struct SbxParams {
    double eta = 20.0;
    double probability = 1.0;
};

struct PolynomialMutationParams {
    double eta = 20.0;
    /// Per-variable probability; a negative value means 1/D.
    double probability = -1.0;
};

/// Simulated binary crossover. Each variable is crossed independently with
/// probability `params.probability`; the spread factor keeps the midpoint of
/// a crossed pair equal to the parents' midpoint. Children are clipped to bounds.
std::pair<DecisionVector, DecisionVector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                                        const SbxParams& params, const BoundsBox& bounds,
                                                        Rng& rng);

DecisionVector polynomial_mutation(std::span<const double> x, const PolynomialMutationParams& params,
                                   const BoundsBox& bounds, Rng& rng);

/// v = base + scale * (a - b). Unclipped.
DecisionVector rank_based_mutation(std::span<const double> base, std::span<const double> a,
                                   std::span<const double> b, double scale);

/// DE binomial crossover: each variable taken from `mutant` with probability
/// `rate`, at least one variable always from the mutant.
DecisionVector binomial_crossover(std::span<const double> target, std::span<const double> mutant, double rate,
                                  Rng& rng);

/// SBX on consecutive pairs of the mating pool (wrapping around) followed by
/// polynomial mutation; returns `count` children.
std::vector<DecisionVector> reproduce(const std::vector<DecisionVector>& mating_pool, std::size_t count,
                                      const SbxParams& sbx, const PolynomialMutationParams& pm,
                                      const BoundsBox& bounds, Rng& rng);

} // namespace clmea
