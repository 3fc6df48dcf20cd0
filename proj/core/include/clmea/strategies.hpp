#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "clmea/kernel.hpp"
#include "clmea/random.hpp"
#include "clmea/surrogates.hpp"
#include "clmea/types.hpp"

namespace clmea {

/// Tunables shared by the three infill strategies.
struct StrategyParams {
    std::size_t population_size = 50;     ///< NP
    std::size_t infill_count = 1;         ///< n, candidates returned per strategy call
    std::size_t hv_generations = 50;      ///< generations of the HV-based non-dominated search
    std::size_t local_generations = 10;   ///< generations of the sparse-region local search
    double mutation_scale = 0.5;          ///< Mu in v = x_r1 + Mu (x_r2 - x_r3)
    double first_rank_threshold = 0.9;    ///< pre-screening stops once this share is predicted rank 1
    std::size_t prescreen_max_loops = 20; ///< hard cap on pre-screening pool regenerations
    std::size_t local_train_size = 100;   ///< archive points used to train each local surrogate
    double de_crossover_rate = 0.9;       ///< binomial crossover after rank-based mutation

    SbxParams sbx{};
    PolynomialMutationParams mutation{};
    WidthPolicy width{};
    SigmaPolicy sigma{};
    double regularization = 1e-10;
    double reference_scale = 1.1;  ///< adaptive HV reference point factor

    /// Throws ContractViolation when a field is out of range.
    void validate() const;
};

/// Replaces RBF predictions with an exact objective function (test hook).
using ObjectiveOracle = std::function<ObjectiveVector(std::span<const double>)>;

struct StrategyHooks {
    ObjectiveOracle exact_objectives;
};

enum class StrategyKind { kPrescreen, kHvSearch, kLocalSearch };

std::string_view to_string(StrategyKind kind);

/// Every candidate a strategy scored before choosing, with the score it got.
/// Candidates that duplicate archived points are not logged.
struct CandidatePool {
    std::vector<DecisionVector> candidates;
    std::vector<ObjectiveVector> predictions;  ///< empty for the pre-screening pool
    std::vector<double> scores;
};

struct InfillBatch {
    std::vector<DecisionVector> candidates;
    std::vector<StrategyKind> provenance;
    std::vector<double> scores;
    std::vector<bool> fallback;  ///< true when a fresh LHS point replaced an all-duplicate pool
    std::vector<CandidatePool> pools;

    // Pre-screening diagnostics.
    std::size_t loops = 0;
    double first_rank_share = 0.0;
    // Local-search diagnostics: training-set size per sparse point.
    std::vector<std::size_t> train_sizes;

    std::size_t size() const noexcept { return candidates.size(); }
};

/// Distance from u to the nearest archived decision vector, both mapped to [0,1]^D.
double decision_space_uncertainty(std::span<const double> u, const Archive& archive, const BoundsBox& bounds);

/// Distance from a predicted objective vector to the nearest archived objective
/// vector after per-objective min-max normalization over the archive.
double objective_space_uncertainty(std::span<const double> f_hat, const Archive& archive);

/// Classifier-assisted rank-based learning pre-screening.
InfillBatch classifier_rank_prescreen(const Archive& archive, const StrategyParams& params, const BoundsBox& bounds,
                                      Rng& rng);

/// Hypervolume-based non-dominated search on global RBF surrogates.
InfillBatch hv_nondominated_search(const Archive& archive, const StrategyParams& params, const BoundsBox& bounds,
                                   Rng& rng, const StrategyHooks& hooks = {});

/// Local search around the sparsest points of the archive's first front.
InfillBatch sparse_local_search(const Archive& archive, const StrategyParams& params, const BoundsBox& bounds,
                                Rng& rng, const StrategyHooks& hooks = {});

/// Indices of the sparse points chosen on a first front: highest finite
/// crowding distance first, per-objective extremes excluded. Falls back to
/// the front's members in input order when no interior point exists.
std::vector<std::size_t> select_sparse_points(const std::vector<ObjectiveVector>& front_objectives,
                                              std::size_t count);

} // namespace clmea
