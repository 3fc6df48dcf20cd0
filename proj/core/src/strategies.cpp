#include "clmea/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>

#include "clmea/errors.hpp"
#include "clmea/indicators.hpp"

namespace clmea {
namespace {

/// Objective predictions from RBF surrogates or, under test, the exact function.
class Predictor {
public:
    Predictor(const std::vector<DecisionVector>& x, const std::vector<ObjectiveVector>& f, const BoundsBox& bounds,
              const StrategyParams& params, const StrategyHooks& hooks) {
        if (hooks.exact_objectives) {
            exact_ = hooks.exact_objectives;
        } else {
            surrogate_.emplace(x, f, bounds, params.width, params.regularization);
        }
    }

    ObjectiveVector operator()(std::span<const double> x) const {
        return surrogate_ ? surrogate_->predict(x) : exact_(x);
    }

    std::vector<ObjectiveVector> all(const std::vector<DecisionVector>& xs) const {
        std::vector<ObjectiveVector> out;
        out.reserve(xs.size());
        for (const auto& x : xs) {
            out.push_back((*this)(x));
        }
        return out;
    }

private:
    std::optional<ObjectiveSurrogate> surrogate_;
    ObjectiveOracle exact_;
};

struct ObjectiveScaling {
    std::vector<double> lo;
    std::vector<double> range;

    explicit ObjectiveScaling(const Archive& archive) {
        const std::size_t m = archive.num_objectives();
        lo.assign(m, std::numeric_limits<double>::infinity());
        std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
        for (const auto& s : archive) {
            for (std::size_t k = 0; k < m; ++k) {
                lo[k] = std::min(lo[k], s.f[k]);
                hi[k] = std::max(hi[k], s.f[k]);
            }
        }
        range.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double r = hi[k] - lo[k];
            range[k] = r > 0.0 ? r : 1.0;
        }
    }

    ObjectiveVector apply(std::span<const double> f) const {
        ObjectiveVector out(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
            out[k] = (f[k] - lo[k]) / range[k];
        }
        return out;
    }
};

double nearest_distance(std::span<const double> p, const std::vector<DecisionVector>& set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : set) {
        best = std::min(best, squared_distance(p, q));
    }
    return std::sqrt(best);
}

std::vector<DecisionVector> unit_decisions(const Archive& archive, const BoundsBox& bounds) {
    std::vector<DecisionVector> out;
    out.reserve(archive.size());
    for (const auto& s : archive) {
        out.push_back(bounds.to_unit(s.x));
    }
    return out;
}

std::vector<ObjectiveVector> scaled_objectives(const Archive& archive, const ObjectiveScaling& scaling) {
    std::vector<ObjectiveVector> out;
    out.reserve(archive.size());
    for (const auto& s : archive) {
        out.push_back(scaling.apply(s.f));
    }
    return out;
}

bool near_any(std::span<const double> x, const std::vector<DecisionVector>& set) {
    const double tol2 = kDuplicateTolerance * kDuplicateTolerance;
    return std::any_of(set.begin(), set.end(), [&](const auto& y) { return squared_distance(x, y) < tol2; });
}

/// Top-scoring pool members (descending score, pool order on ties), skipping
/// points already taken by this batch; LHS points fill any shortfall.
void take_best(const CandidatePool& pool, std::size_t count, StrategyKind kind, const Archive& archive,
               const BoundsBox& bounds, Rng& rng, InfillBatch& batch) {
    std::vector<std::size_t> order(pool.candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pool.scores[a] > pool.scores[b]; });
    std::size_t taken = 0;
    for (const std::size_t i : order) {
        if (taken == count) {
            break;
        }
        if (near_any(pool.candidates[i], batch.candidates)) {
            continue;
        }
        batch.candidates.push_back(pool.candidates[i]);
        batch.provenance.push_back(kind);
        batch.scores.push_back(pool.scores[i]);
        batch.fallback.push_back(false);
        ++taken;
    }
    while (taken < count) {
        DecisionVector x = latin_hypercube_sample(1, bounds, rng).front();
        if (archive.contains(x) || near_any(x, batch.candidates)) {
            continue;
        }
        batch.candidates.push_back(std::move(x));
        batch.provenance.push_back(kind);
        batch.scores.push_back(0.0);
        batch.fallback.push_back(true);
        ++taken;
    }
}

/// Archive members picked by front then crowding, at most `count`.
std::vector<std::size_t> top_archive_members(const Archive& archive, std::size_t count) {
    return environmental_selection(archive.objectives(), count);
}

/// One generation of the surrogate-driven NSGA-II loop.
void evolve_generation(std::vector<DecisionVector>& population, std::vector<ObjectiveVector>& predicted,
                       const std::vector<DecisionVector>& mating_pool, const Predictor& predict,
                       const StrategyParams& params, const BoundsBox& bounds, Rng& rng) {
    const std::size_t np = population.size();
    auto children = reproduce(mating_pool, np, params.sbx, params.mutation, bounds, rng);
    auto child_predictions = predict.all(children);
    population.insert(population.end(), std::make_move_iterator(children.begin()),
                      std::make_move_iterator(children.end()));
    predicted.insert(predicted.end(), std::make_move_iterator(child_predictions.begin()),
                     std::make_move_iterator(child_predictions.end()));
    const auto survivors = environmental_selection(predicted, np);
    std::vector<DecisionVector> next_population;
    std::vector<ObjectiveVector> next_predicted;
    next_population.reserve(np);
    next_predicted.reserve(np);
    for (const std::size_t i : survivors) {
        next_population.push_back(std::move(population[i]));
        next_predicted.push_back(std::move(predicted[i]));
    }
    population = std::move(next_population);
    predicted = std::move(next_predicted);
}

std::vector<DecisionVector> tournament_pool(const std::vector<DecisionVector>& population,
                                            const std::vector<ObjectiveVector>& predicted, Rng& rng) {
    const auto ranked = rank_population(predicted);
    const auto winners = tournament_selection(ranked, population.size(), rng);
    std::vector<DecisionVector> pool;
    pool.reserve(winners.size());
    for (const std::size_t w : winners) {
        pool.push_back(population[w]);
    }
    return pool;
}

/// One member of `from`, avoiding `exclude` when possible.
std::size_t draw_donor(const std::vector<std::size_t>& from, std::initializer_list<std::size_t> exclude, Rng& rng) {
    std::vector<std::size_t> allowed;
    for (const std::size_t i : from) {
        if (std::find(exclude.begin(), exclude.end(), i) == exclude.end()) {
            allowed.push_back(i);
        }
    }
    if (allowed.empty()) {
        return from[rng.index(from.size())];
    }
    return allowed[rng.index(allowed.size())];
}

} // namespace

void StrategyParams::validate() const {
    require(population_size >= 4, "StrategyParams: population size must be at least 4");
    require(infill_count >= 1, "StrategyParams: infill count must be at least 1");
    require(first_rank_threshold > 0.0 && first_rank_threshold <= 1.0,
            "StrategyParams: first_rank_threshold must be in (0, 1]");
    require(prescreen_max_loops >= 1, "StrategyParams: prescreen_max_loops must be at least 1");
    require(local_train_size >= 1, "StrategyParams: local_train_size must be at least 1");
    require(de_crossover_rate >= 0.0 && de_crossover_rate <= 1.0, "StrategyParams: crossover rate out of range");
    require(reference_scale > 1.0, "StrategyParams: reference_scale must exceed 1");
    require(regularization >= 0.0, "StrategyParams: regularization must be non-negative");
}

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::kPrescreen:
        return "prescreen";
    case StrategyKind::kHvSearch:
        return "hv_search";
    case StrategyKind::kLocalSearch:
        return "local_search";
    }
    return "unknown";
}

double decision_space_uncertainty(std::span<const double> u, const Archive& archive, const BoundsBox& bounds) {
    require(!archive.empty(), "decision_space_uncertainty: empty archive");
    return nearest_distance(bounds.to_unit(u), unit_decisions(archive, bounds));
}

double objective_space_uncertainty(std::span<const double> f_hat, const Archive& archive) {
    require(!archive.empty(), "objective_space_uncertainty: empty archive");
    const ObjectiveScaling scaling(archive);
    return nearest_distance(scaling.apply(f_hat), scaled_objectives(archive, scaling));
}

std::vector<std::size_t> select_sparse_points(const std::vector<ObjectiveVector>& front_objectives,
                                              std::size_t count) {
    require(!front_objectives.empty(), "select_sparse_points: empty front");
    const auto crowding = crowding_distance(front_objectives);
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < crowding.size(); ++i) {
        if (std::isfinite(crowding[i])) {
            interior.push_back(i);
        }
    }
    std::stable_sort(interior.begin(), interior.end(),
                     [&](std::size_t a, std::size_t b) { return crowding[a] > crowding[b]; });
    if (interior.empty()) {
        interior.resize(front_objectives.size());
        std::iota(interior.begin(), interior.end(), std::size_t{0});
    }
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k < count; ++k) {
        chosen.push_back(interior[k % interior.size()]);
    }
    return chosen;
}

InfillBatch classifier_rank_prescreen(const Archive& archive, const StrategyParams& params, const BoundsBox& bounds,
                                      Rng& rng) {
    params.validate();
    require(archive.size() >= 4, "classifier_rank_prescreen: archive needs at least 4 samples");

    const auto members = top_archive_members(archive, params.population_size);
    std::vector<DecisionVector> population;
    std::vector<ObjectiveVector> objectives;
    for (const std::size_t i : members) {
        population.push_back(archive[i].x);
        objectives.push_back(archive[i].f);
    }
    const auto ranks = front_ranks(objectives);
    std::vector<int> labels(ranks.begin(), ranks.end());

    std::vector<DecisionVector> unit_population;
    for (const auto& x : population) {
        unit_population.push_back(bounds.to_unit(x));
    }
    const PnnModel classifier = pnn_fit(unit_population, labels, params.sigma);

    const std::size_t np = population.size();
    InfillBatch batch;
    double share = 0.0;
    std::size_t loops = 0;
    do {
        ++loops;
        const int best_label = *std::min_element(labels.begin(), labels.end());
        int second_label = std::numeric_limits<int>::max();
        for (const int l : labels) {
            if (l > best_label) {
                second_label = std::min(second_label, l);
            }
        }
        std::vector<std::size_t> first_level;
        std::vector<std::size_t> top_two_levels;
        for (std::size_t i = 0; i < np; ++i) {
            if (labels[i] == best_label) {
                first_level.push_back(i);
            }
            if (labels[i] == best_label || labels[i] == second_label) {
                top_two_levels.push_back(i);
            }
        }

        std::vector<DecisionVector> offspring;
        offspring.reserve(np);
        for (std::size_t i = 0; i < np; ++i) {
            const std::size_t r1 = draw_donor(first_level, {}, rng);
            const std::size_t r2 = draw_donor(first_level, {r1}, rng);
            const std::size_t r3 = draw_donor(top_two_levels, {r1, r2}, rng);
            auto mutant = bounds.clipped(
                rank_based_mutation(population[r1], population[r2], population[r3], params.mutation_scale));
            auto trial = binomial_crossover(population[i], mutant, params.de_crossover_rate, rng);
            offspring.push_back(polynomial_mutation(trial, params.mutation, bounds, rng));
        }

        std::size_t predicted_first = 0;
        for (std::size_t i = 0; i < np; ++i) {
            labels[i] = classifier.predict(bounds.to_unit(offspring[i]));
            predicted_first += labels[i] == 1 ? 1 : 0;
        }
        population = std::move(offspring);
        share = static_cast<double>(predicted_first) / static_cast<double>(np);
    } while (share < params.first_rank_threshold && loops < params.prescreen_max_loops);

    batch.loops = loops;
    batch.first_rank_share = share;

    const auto archive_unit = unit_decisions(archive, bounds);
    CandidatePool pool;
    for (auto& u : population) {
        if (archive.contains(u)) {
            continue;
        }
        pool.scores.push_back(nearest_distance(bounds.to_unit(u), archive_unit));
        pool.candidates.push_back(std::move(u));
    }
    take_best(pool, params.infill_count, StrategyKind::kPrescreen, archive, bounds, rng, batch);
    batch.pools.push_back(std::move(pool));
    return batch;
}

InfillBatch hv_nondominated_search(const Archive& archive, const StrategyParams& params, const BoundsBox& bounds,
                                   Rng& rng, const StrategyHooks& hooks) {
    params.validate();
    require(archive.size() >= 2, "hv_nondominated_search: archive needs at least 2 samples");

    const auto archive_x = archive.decisions();
    const auto archive_f = archive.objectives();
    const Predictor predict(archive_x, archive_f, bounds, params, hooks);

    std::vector<DecisionVector> population;
    for (const std::size_t i : top_archive_members(archive, params.population_size)) {
        population.push_back(archive[i].x);
    }
    auto predicted = predict.all(population);

    for (std::size_t gen = 0; gen < params.hv_generations; ++gen) {
        const auto mating_pool = tournament_pool(population, predicted, rng);
        evolve_generation(population, predicted, mating_pool, predict, params, bounds, rng);
    }

    std::vector<ObjectiveVector> archive_front;
    for (const std::size_t i : first_front(archive_f)) {
        archive_front.push_back(archive_f[i]);
    }
    CandidatePool pool;
    for (std::size_t i = 0; i < population.size(); ++i) {
        if (!archive.contains(population[i])) {
            pool.candidates.push_back(population[i]);
            pool.predictions.push_back(predicted[i]);
        }
    }
    std::vector<ObjectiveVector> reference_set = archive_front;
    reference_set.insert(reference_set.end(), pool.predictions.begin(), pool.predictions.end());
    const auto reference = adaptive_reference_point(reference_set, params.reference_scale);
    for (const auto& f : pool.predictions) {
        pool.scores.push_back(hv_improvement(archive_front, f, reference));
    }
    InfillBatch batch;
    take_best(pool, params.infill_count, StrategyKind::kHvSearch, archive, bounds, rng, batch);
    batch.pools.push_back(std::move(pool));
    return batch;
}

InfillBatch sparse_local_search(const Archive& archive, const StrategyParams& params, const BoundsBox& bounds,
                                Rng& rng, const StrategyHooks& hooks) {
    params.validate();
    require(archive.size() >= 2, "sparse_local_search: archive needs at least 2 samples");

    const auto archive_f = archive.objectives();
    const Front front = first_front(archive_f);
    std::vector<ObjectiveVector> front_objectives;
    for (const std::size_t i : front) {
        front_objectives.push_back(archive_f[i]);
    }
    const auto sparse = select_sparse_points(front_objectives, params.infill_count);

    const ObjectiveScaling scaling(archive);
    const auto scaled = scaled_objectives(archive, scaling);
    const auto archive_unit = unit_decisions(archive, bounds);

    InfillBatch batch;
    for (const std::size_t s : sparse) {
        const std::size_t centre = front[s];

        // Neighbourhood of the sparse point in normalized objective space.
        std::vector<std::size_t> order(archive.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<double> dist(archive.size());
        for (std::size_t i = 0; i < archive.size(); ++i) {
            dist[i] = squared_distance(scaled[i], scaled[centre]);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        order.resize(std::min(archive.size(), params.local_train_size));
        batch.train_sizes.push_back(order.size());

        std::vector<DecisionVector> train_x;
        std::vector<ObjectiveVector> train_f;
        for (const std::size_t i : order) {
            train_x.push_back(archive[i].x);
            train_f.push_back(archive[i].f);
        }
        const Predictor predict(train_x, train_f, bounds, params, hooks);

        std::vector<DecisionVector> population(
            train_x.begin(), train_x.begin() + static_cast<std::ptrdiff_t>(std::min(train_x.size(), params.population_size)));
        auto predicted = predict.all(population);

        for (std::size_t gen = 0; gen < params.local_generations; ++gen) {
            std::vector<DecisionVector> mating_pool;
            if (gen == 0) {
                // The sparse point is one parent of every pair in the first generation.
                for (const auto& neighbour : population) {
                    mating_pool.push_back(archive[centre].x);
                    mating_pool.push_back(neighbour);
                }
            } else {
                mating_pool = tournament_pool(population, predicted, rng);
            }
            evolve_generation(population, predicted, mating_pool, predict, params, bounds, rng);
        }

        CandidatePool pool;
        if (front.size() < 2) {
            for (std::size_t i = 0; i < population.size(); ++i) {
                if (archive.contains(population[i])) {
                    continue;
                }
                pool.candidates.push_back(population[i]);
                pool.predictions.push_back(predicted[i]);
                pool.scores.push_back(nearest_distance(bounds.to_unit(population[i]), archive_unit));
            }
        } else {
            std::vector<ObjectiveVector> merged = predicted;
            merged.insert(merged.end(), front_objectives.begin(), front_objectives.end());
            const Front merged_first = first_front(merged);
            std::vector<std::size_t> eligible;
            for (const std::size_t i : merged_first) {
                if (i < population.size() && !archive.contains(population[i])) {
                    eligible.push_back(i);
                }
            }
            if (eligible.empty()) {
                for (std::size_t i = 0; i < population.size(); ++i) {
                    if (!archive.contains(population[i])) {
                        eligible.push_back(i);
                    }
                }
            }
            for (const std::size_t i : eligible) {
                pool.candidates.push_back(population[i]);
                pool.predictions.push_back(predicted[i]);
                pool.scores.push_back(nearest_distance(scaling.apply(predicted[i]), scaled));
            }
        }
        take_best(pool, 1, StrategyKind::kLocalSearch, archive, bounds, rng, batch);
        batch.pools.push_back(std::move(pool));
    }
    return batch;
}

} // namespace clmea
