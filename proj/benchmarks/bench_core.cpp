#include <cmath>
#include <benchmark/benchmark.h>

#include <vector>

#include "clmea/indicators.hpp"
#include "clmea/kernel.hpp"
#include "clmea/problems.hpp"
#include "clmea/random.hpp"
#include "clmea/surrogates.hpp"

namespace {

using namespace clmea;

// Points on a concave 2- or 3-objective front, so every one is non-dominated.
std::vector<ObjectiveVector> front_points(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ObjectiveVector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        ObjectiveVector p(m);
        double norm = 0.0;
        for (auto& v : p) {
            v = rng.uniform(0.01, 1.0);
            norm += v * v;
        }
        for (auto& v : p) {
            v /= std::sqrt(norm);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

void BM_Hypervolume(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto pts = front_points(static_cast<std::size_t>(state.range(1)), m, 1);
    const std::vector<double> ref(m, 1.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hypervolume(pts, ref));
    }
}
BENCHMARK(BM_Hypervolume)->Args({2, 100})->Args({2, 1000})->Args({3, 50})->Args({3, 200});

void BM_NondominatedSort(benchmark::State& state) {
    Rng rng(2);
    std::vector<ObjectiveVector> pts(static_cast<std::size_t>(state.range(0)), ObjectiveVector(2));
    for (auto& p : pts) {
        for (auto& v : p) {
            v = rng.uniform();
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(nondominated_sort(pts));
    }
}
BENCHMARK(BM_NondominatedSort)->Arg(100)->Arg(300)->Arg(1000);

void BM_RbfFit(benchmark::State& state) {
    Rng rng(3);
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto x = latin_hypercube_sample(k, BoundsBox::uniform(30, 0.0, 1.0), rng);
    std::vector<double> y(k);
    for (auto& v : y) {
        v = rng.uniform();
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(rbf_fit(x, y, WidthPolicy::median(), 0.0));
    }
}
BENCHMARK(BM_RbfFit)->Arg(100)->Arg(300);

} // namespace

BENCHMARK_MAIN();
