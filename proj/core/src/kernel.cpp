#include "clmea/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clmea/errors.hpp"

namespace clmea {

bool dominates(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dominates: objective vectors differ in length");
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        if (a[i] < b[i]) {
            strictly = true;
        }
    }
    return strictly;
}

bool weakly_dominates(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "weakly_dominates: objective vectors differ in length");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

std::vector<Front> nondominated_sort(const std::vector<ObjectiveVector>& objectives) {
    require(!objectives.empty(), "nondominated_sort: empty input");
    const std::size_t n = objectives.size();
    const std::size_t m = objectives.front().size();
    for (const auto& f : objectives) {
        require(f.size() == m, "nondominated_sort: objective vectors differ in length");
    }

    // Deb's fast non-dominated sort.
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j])) {
                dominated_by[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(objectives[j], objectives[i])) {
                dominated_by[j].push_back(i);
                ++domination_count[i];
            }
        }
    }

    std::vector<Front> fronts;
    Front current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        Front next;
        for (const std::size_t i : current) {
            for (const std::size_t j : dominated_by[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<std::size_t> front_ranks(const std::vector<ObjectiveVector>& objectives) {
    const auto fronts = nondominated_sort(objectives);
    std::vector<std::size_t> rank(objectives.size(), 0);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        for (const std::size_t i : fronts[k]) {
            rank[i] = k + 1;
        }
    }
    return rank;
}

Front first_front(const std::vector<ObjectiveVector>& objectives) {
    require(!objectives.empty(), "first_front: empty input");
    Front front;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objectives.size() && !dominated; ++j) {
            dominated = j != i && dominates(objectives[j], objectives[i]);
        }
        if (!dominated) {
            front.push_back(i);
        }
    }
    return front;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front_objectives) {
    const std::size_t n = front_objectives.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0) {
        return distance;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front_objectives.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front_objectives[a][k] < front_objectives[b][k];
        });
        const double lo = front_objectives[order.front()][k];
        const double hi = front_objectives[order.back()][k];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double range = hi - lo;
        if (!(range > 0.0)) {
            continue;
        }
        for (std::size_t r = 1; r + 1 < n; ++r) {
            const std::size_t i = order[r];
            if (std::isinf(distance[i])) {
                continue;
            }
            distance[i] += (front_objectives[order[r + 1]][k] - front_objectives[order[r - 1]][k]) / range;
        }
    }
    return distance;
}

RankedPopulation rank_population(const std::vector<ObjectiveVector>& objectives) {
    RankedPopulation ranked;
    ranked.front_index.assign(objectives.size(), 0);
    ranked.crowding.assign(objectives.size(), 0.0);
    if (objectives.empty()) {
        return ranked;
    }
    ranked.fronts = nondominated_sort(objectives);
    for (std::size_t k = 0; k < ranked.fronts.size(); ++k) {
        const Front& front = ranked.fronts[k];
        std::vector<ObjectiveVector> members;
        members.reserve(front.size());
        for (const std::size_t i : front) {
            members.push_back(objectives[i]);
        }
        const auto cd = crowding_distance(members);
        for (std::size_t j = 0; j < front.size(); ++j) {
            ranked.front_index[front[j]] = k + 1;
            ranked.crowding[front[j]] = cd[j];
        }
    }
    return ranked;
}

std::vector<std::size_t> environmental_selection(const std::vector<ObjectiveVector>& objectives,
                                                 std::size_t count) {
    if (objectives.empty()) {
        return {};
    }
    const RankedPopulation ranked = rank_population(objectives);
    std::vector<std::size_t> order(objectives.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranked.front_index[a] != ranked.front_index[b]) {
            return ranked.front_index[a] < ranked.front_index[b];
        }
        return ranked.crowding[a] > ranked.crowding[b];
    });
    order.resize(std::min(count, order.size()));
    return order;
}

std::vector<std::size_t> tournament_selection(const RankedPopulation& ranked, std::size_t count, Rng& rng) {
    const std::size_t n = ranked.front_index.size();
    require(n > 0, "tournament_selection: empty population");
    std::vector<std::size_t> winners;
    winners.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t a = rng.index(n);
        const std::size_t b = rng.index(n);
        bool a_wins = false;
        if (ranked.front_index[a] != ranked.front_index[b]) {
            a_wins = ranked.front_index[a] < ranked.front_index[b];
        } else if (ranked.crowding[a] != ranked.crowding[b]) {
            a_wins = ranked.crowding[a] > ranked.crowding[b];
        } else {
            a_wins = a <= b;
        }
        winners.push_back(a_wins ? a : b);
    }
    return winners;
}

std::vector<DecisionVector> latin_hypercube_sample(std::size_t count, const BoundsBox& bounds, Rng& rng) {
    require(count >= 1, "latin_hypercube_sample: count must be at least 1");
    const std::size_t dim = bounds.dim();
    std::vector<DecisionVector> samples(count, DecisionVector(dim));
    std::vector<std::size_t> strata(count);
    for (std::size_t d = 0; d < dim; ++d) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        rng.shuffle(strata.begin(), strata.end());
        const double lo = bounds.lower()[d];
        const double width = bounds.width(d);
        for (std::size_t i = 0; i < count; ++i) {
            const double u = (static_cast<double>(strata[i]) + rng.uniform()) / static_cast<double>(count);
            samples[i][d] = std::min(lo + u * width, bounds.upper()[d]);
        }
    }
    return samples;
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                                        const SbxParams& params, const BoundsBox& bounds,
                                                        Rng& rng) {
    require(p1.size() == p2.size(), "sbx_crossover: parents differ in dimension");
    require(p1.size() == bounds.dim(), "sbx_crossover: parents do not match bounds");
    DecisionVector c1(p1.begin(), p1.end());
    DecisionVector c2(p2.begin(), p2.end());
    const double exponent = 1.0 / (params.eta + 1.0);
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (!rng.bernoulli(params.probability)) {
            continue;
        }
        const double u = rng.uniform();
        const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent) : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
        const double mid = 0.5 * (p1[i] + p2[i]);
        const double half_gap = 0.5 * beta * (p1[i] - p2[i]);
        c1[i] = mid + half_gap;
        c2[i] = mid - half_gap;
    }
    bounds.clip(c1);
    bounds.clip(c2);
    return {std::move(c1), std::move(c2)};
}

DecisionVector polynomial_mutation(std::span<const double> x, const PolynomialMutationParams& params,
                                   const BoundsBox& bounds, Rng& rng) {
    require(x.size() == bounds.dim(), "polynomial_mutation: dimension mismatch");
    DecisionVector y(x.begin(), x.end());
    const double probability = params.probability < 0.0 ? 1.0 / static_cast<double>(x.size()) : params.probability;
    const double exponent = 1.0 / (params.eta + 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!rng.bernoulli(probability)) {
            continue;
        }
        const double lo = bounds.lower()[i];
        const double hi = bounds.upper()[i];
        const double width = hi - lo;
        const double delta1 = (y[i] - lo) / width;
        const double delta2 = (hi - y[i]) / width;
        const double u = rng.uniform();
        double deltaq = 0.0;
        if (u < 0.5) {
            const double xy = 1.0 - delta1;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, params.eta + 1.0);
            deltaq = std::pow(val, exponent) - 1.0;
        } else {
            const double xy = 1.0 - delta2;
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, params.eta + 1.0);
            deltaq = 1.0 - std::pow(val, exponent);
        }
        y[i] = std::clamp(y[i] + deltaq * width, lo, hi);
    }
    return y;
}

DecisionVector rank_based_mutation(std::span<const double> base, std::span<const double> a,
                                   std::span<const double> b, double scale) {
    require(base.size() == a.size() && a.size() == b.size(), "rank_based_mutation: dimension mismatch");
    DecisionVector v(base.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = base[i] + scale * (a[i] - b[i]);
    }
    return v;
}

DecisionVector binomial_crossover(std::span<const double> target, std::span<const double> mutant, double rate,
                                  Rng& rng) {
    require(target.size() == mutant.size(), "binomial_crossover: dimension mismatch");
    DecisionVector trial(target.begin(), target.end());
    const std::size_t forced = rng.index(trial.size());
    for (std::size_t i = 0; i < trial.size(); ++i) {
        if (i == forced || rng.bernoulli(rate)) {
            trial[i] = mutant[i];
        }
    }
    return trial;
}

std::vector<DecisionVector> reproduce(const std::vector<DecisionVector>& mating_pool, std::size_t count,
                                      const SbxParams& sbx, const PolynomialMutationParams& pm,
                                      const BoundsBox& bounds, Rng& rng) {
    require(!mating_pool.empty(), "reproduce: empty mating pool");
    std::vector<DecisionVector> children;
    children.reserve(count + 1);
    const std::size_t n = mating_pool.size();
    for (std::size_t k = 0; children.size() < count; k += 2) {
        const auto& a = mating_pool[k % n];
        const auto& b = mating_pool[(k + 1) % n];
        auto [c1, c2] = sbx_crossover(a, b, sbx, bounds, rng);
        children.push_back(polynomial_mutation(c1, pm, bounds, rng));
        if (children.size() < count) {
            children.push_back(polynomial_mutation(c2, pm, bounds, rng));
        }
    }
    return children;
}

} // namespace clmea
