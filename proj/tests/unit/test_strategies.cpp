#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "clmea/errors.hpp"
#include "clmea/indicators.hpp"
#include "clmea/kernel.hpp"
#include "clmea/problems.hpp"
#include "clmea/strategies.hpp"
#include "oracles.hpp"

using namespace clmea;

namespace {

Archive sampled_archive(const ProblemSpec& spec, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Archive archive;
    std::int64_t fe = 0;
    for (auto& x : latin_hypercube_sample(n, spec.bounds, rng)) {
        auto f = evaluate(spec, x);
        archive.add({std::move(x), std::move(f), ++fe});
    }
    return archive;
}

StrategyParams small_params() {
    StrategyParams p;
    p.population_size = 20;
    p.hv_generations = 10;
    p.local_generations = 5;
    p.local_train_size = 30;
    return p;
}

void check_batch_invariants(const InfillBatch& batch, const Archive& archive, const BoundsBox& bounds) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(bounds.contains(batch.candidates[i]));
        for (const auto& s : archive) {
            CHECK(oracle::distance(batch.candidates[i], s.x) >= kDuplicateTolerance);
        }
        for (std::size_t j = 0; j < i; ++j) {
            CHECK(oracle::distance(batch.candidates[i], batch.candidates[j]) >= kDuplicateTolerance);
        }
    }
}

void check_argmax(const InfillBatch& batch) {
    REQUIRE(batch.pools.size() == batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& scores = batch.pools[i].scores;
        if (batch.fallback[i]) {
            continue;
        }
        REQUIRE_FALSE(scores.empty());
        CHECK(batch.scores[i] == *std::max_element(scores.begin(), scores.end()));
        for (const double s : scores) {
            CHECK(s >= 0.0);
        }
    }
}

} // namespace

TEST_CASE("decision space uncertainty examples") {
    Archive a;
    a.add({{0.0, 0.0}, {0.0, 0.0}, 1});
    CHECK(decision_space_uncertainty(std::vector{3.0, 4.0}, a, BoundsBox::uniform(2, 0.0, 10.0)) ==
          doctest::Approx(0.5));
    CHECK(decision_space_uncertainty(std::vector{0.0, 0.0}, a, BoundsBox::uniform(2, 0.0, 10.0)) == 0.0);
    a.add({{1.0, 0.0}, {1.0, 0.0}, 2});
    CHECK(decision_space_uncertainty(std::vector{0.75, 0.0}, a, BoundsBox::uniform(2, 0.0, 1.0)) ==
          doctest::Approx(0.25));
}

TEST_CASE("objective space uncertainty examples") {
    Archive a;
    a.add({{0.1}, {0.0, 1.0}, 1});
    a.add({{0.2}, {1.0, 0.0}, 2});
    CHECK(objective_space_uncertainty(std::vector{0.5, 0.5}, a) == doctest::Approx(std::sqrt(0.5)));
    CHECK(objective_space_uncertainty(std::vector{0.0, 1.0}, a) == 0.0);
}

TEST_CASE("sparse point selection") {
    const std::vector<ObjectiveVector> front{{0, 1}, {0.5, 0.6}, {0.4, 0.5}, {1, 0}};
    const auto crowding = crowding_distance(front);
    const auto chosen = select_sparse_points(front, 1);
    REQUIRE(chosen.size() == 1);
    CHECK((chosen[0] == 1 || chosen[0] == 2));
    CHECK(crowding[chosen[0]] == std::max(crowding[1], crowding[2]));
    CHECK(select_sparse_points({{0, 1}, {1, 0}}, 3) == std::vector<std::size_t>{0, 1, 0});
}

TEST_CASE("prescreen on an all non-dominated archive exits after one pool") {
    Archive archive;
    Rng rng(1);
    const auto bounds = BoundsBox::uniform(3, 0.0, 1.0);
    std::int64_t fe = 0;
    for (auto& x : latin_hypercube_sample(30, bounds, rng)) {
        const double x0 = x[0];
        archive.add({std::move(x), {x0, 1.0 - x0}, ++fe});
    }
    const auto batch = classifier_rank_prescreen(archive, small_params(), bounds, rng);
    CHECK(batch.loops == 1);
    CHECK(batch.first_rank_share == 1.0);
    check_batch_invariants(batch, archive, bounds);
    check_argmax(batch);
}

TEST_CASE("prescreen loop guard") {
    const auto spec = ProblemSpec::zdt(1, 8);
    const auto archive = sampled_archive(spec, 40, 3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        auto params = small_params();
        params.prescreen_max_loops = 3;
        params.infill_count = 2;
        const auto batch = classifier_rank_prescreen(archive, params, spec.bounds, rng);
        CHECK(batch.loops >= 1);
        CHECK(batch.loops <= 3);
        if (batch.loops < 3) {
            CHECK(batch.first_rank_share >= params.first_rank_threshold);
        }
        CHECK(batch.size() == 2);
        check_batch_invariants(batch, archive, spec.bounds);
        const auto& pool = batch.pools.front();
        CHECK(std::is_sorted(batch.scores.rbegin(), batch.scores.rend()));
        for (std::size_t i = 0; i < pool.candidates.size(); ++i) {
            CHECK(pool.scores[i] == doctest::Approx(decision_space_uncertainty(pool.candidates[i], archive, spec.bounds)));
        }
    }
}

TEST_CASE("hv search with no generations ranks the seeded members") {
    const auto spec = ProblemSpec::zdt(1, 6);
    const auto archive = sampled_archive(spec, 30, 4);
    auto params = small_params();
    params.hv_generations = 0;
    Rng rng(4);
    const auto batch = hv_nondominated_search(archive, params, spec.bounds, rng);
    // Every seeded member is an archived point, so nothing is eligible.
    CHECK(batch.pools.front().candidates.empty());
    CHECK(batch.fallback.front());
    check_batch_invariants(batch, archive, spec.bounds);
}

TEST_CASE("hv search prefers positive improvements") {
    const auto spec = ProblemSpec::dtlz(2, 2, 10);
    const auto archive = sampled_archive(spec, 40, 5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const auto batch = hv_nondominated_search(archive, small_params(), spec.bounds, rng);
        check_batch_invariants(batch, archive, spec.bounds);
        check_argmax(batch);
        const auto& scores = batch.pools.front().scores;
        if (!scores.empty() && *std::max_element(scores.begin(), scores.end()) > 0.0) {
            CHECK(batch.scores.front() > 0.0);
        }
    }
}

TEST_CASE("hv search with exact objectives finds improving points") {
    const auto spec = ProblemSpec::zdt(1, 5);
    StrategyHooks hooks;
    hooks.exact_objectives = [&](std::span<const double> x) { return evaluate(spec, x); };
    int improving = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto archive = sampled_archive(spec, 30, 100 + seed);
        Rng rng(seed);
        const auto batch = hv_nondominated_search(archive, small_params(), spec.bounds, rng, hooks);
        std::vector<ObjectiveVector> front;
        for (const auto i : first_front(archive.objectives())) {
            front.push_back(archive[i].f);
        }
        const auto f = evaluate(spec, batch.candidates.front());
        auto set = front;
        set.push_back(f);
        const auto ref = adaptive_reference_point(set);
        improving += oracle::hv_grid(set, ref) - oracle::hv_grid(front, ref) > 0.0 ? 1 : 0;
    }
    CHECK(improving >= 8);
}

TEST_CASE("local search") {
    const auto spec = ProblemSpec::zdt(2, 8);
    const auto archive = sampled_archive(spec, 40, 6);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        auto params = small_params();
        params.infill_count = 2;
        const auto batch = sparse_local_search(archive, params, spec.bounds, rng);
        CHECK(batch.size() == 2);
        CHECK(batch.train_sizes == std::vector<std::size_t>{30, 30});
        check_batch_invariants(batch, archive, spec.bounds);
        check_argmax(batch);
    }
    auto params = small_params();
    params.local_train_size = 500;
    Rng rng(1);
    CHECK(sparse_local_search(archive, params, spec.bounds, rng).train_sizes == std::vector<std::size_t>{40});
}

TEST_CASE("local search with a single-point front") {
    Archive archive;
    Rng rng(2);
    const auto bounds = BoundsBox::uniform(4, 0.0, 1.0);
    std::int64_t fe = 0;
    for (auto& x : latin_hypercube_sample(20, bounds, rng)) {
        double s = 0.0;
        for (const double v : x) {
            s += v;
        }
        archive.add({std::move(x), {s, s}, ++fe});
    }
    const auto batch = sparse_local_search(archive, small_params(), bounds, rng);
    CHECK(batch.size() == 1);
    check_batch_invariants(batch, archive, bounds);
}

TEST_CASE("strategy parameter validation") {
    StrategyParams p;
    p.population_size = 3;
    CHECK_THROWS_AS(p.validate(), ContractViolation);
    p = {};
    p.first_rank_threshold = 0.0;
    CHECK_THROWS_AS(p.validate(), ContractViolation);
}
