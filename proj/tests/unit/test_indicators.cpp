#include <doctest.h>

#include <cmath>

#include "clmea/errors.hpp"
#include "clmea/indicators.hpp"
#include "clmea/kernel.hpp"
#include "oracles.hpp"

using namespace clmea;

namespace {

std::vector<ObjectiveVector> random_front(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts) {
        for (auto& v : p) {
            v = rng.uniform();
        }
    }
    return pts;
}

} // namespace

TEST_CASE("hypervolume examples") {
    CHECK(hypervolume({{1, 1}}, std::vector{2.0, 2.0}) == 1.0);
    CHECK(hypervolume({{1, 2}, {2, 1}}, std::vector{3.0, 3.0}) == doctest::Approx(3.0));
    CHECK(hypervolume({{0, 0, 0}}, std::vector{1.0, 1.0, 1.0}) == 1.0);
    CHECK(hypervolume({{0, 0, 0}, {0.5, 0.5, 0.5}}, std::vector{1.0, 1.0, 1.0}) == 1.0);
    CHECK(hypervolume({}, std::vector{1.0, 1.0}) == 0.0);
    CHECK(hypervolume({{2, 0.5}}, std::vector{1.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(hypervolume({{0, 0, 0, 0}}, std::vector{1.0, 1.0, 1.0, 1.0}), UnsupportedDimension);
}

TEST_CASE("hypervolume agrees with grid and inclusion-exclusion oracles") {
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + rng.index(2);
        const auto front = random_front(rng, 1 + rng.index(8), m);
        const std::vector<double> ref(m, 1.0);
        const double exact = hypervolume(front, ref);
        CHECK(exact == doctest::Approx(oracle::hv_grid(front, ref)).epsilon(1e-12));
        if (m == 2) {
            CHECK(std::abs(exact - oracle::hv_inclusion_exclusion(front, ref)) <= 1e-9);
        }
    }
}

TEST_CASE("monte carlo hypervolume") {
    Rng rng(2);
    CHECK(mc_hypervolume({}, std::vector{1.0, 1.0}, 100, rng).value == 0.0);
    const auto unit = mc_hypervolume({{1, 1}}, std::vector{2.0, 2.0}, 1000000, rng);
    CHECK(std::abs(unit.value - 1.0) <= 3.0 * unit.standard_error + 1e-12);
    for (int t = 0; t < 20; ++t) {
        const auto front = random_front(rng, 5, 2);
        const std::vector<double> ref{1.0, 1.0};
        const auto est = mc_hypervolume(front, ref, 20000, rng);
        CHECK(std::abs(est.value - hypervolume(front, ref)) <= 3.0 * est.standard_error + 1e-12);
    }
}

TEST_CASE("hypervolume is monotone") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + rng.index(2);
        const auto pts = random_front(rng, 1 + rng.index(8), m);
        std::vector<ObjectiveVector> front;
        for (const auto i : first_front(pts)) {
            front.push_back(pts[i]);
        }
        const std::vector<double> ref(m, 1.1);
        const double before = hypervolume(front, ref);
        const auto extra = random_front(rng, 1, m).front();
        auto grown = front;
        grown.push_back(extra);
        CHECK(hypervolume(grown, ref) >= before - 1e-12);
        auto better = front[0];
        for (auto& v : better) {
            v *= 0.9;
        }
        if (better != front[0]) {
            grown = front;
            grown.push_back(better);
            CHECK(hypervolume(grown, ref) > before);
        }
    }
}

TEST_CASE("hv improvement") {
    const std::vector<ObjectiveVector> front{{1, 2}, {2, 1}};
    const std::vector<double> ref{3.0, 3.0};
    CHECK(hv_improvement(front, std::vector{1.0, 1.0}, ref) == doctest::Approx(1.0));
    CHECK(hv_improvement(front, std::vector{2.5, 2.5}, ref) == 0.0);
    CHECK(hv_improvement(front, std::vector{1.0, 2.0}, ref) == 0.0);
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 2 + rng.index(2);
        const auto pts = random_front(rng, 1 + rng.index(8), m);
        std::vector<ObjectiveVector> nd;
        for (const auto i : first_front(pts)) {
            nd.push_back(pts[i]);
        }
        const auto c = random_front(rng, 1, m).front();
        const std::vector<double> r(m, 1.0);
        auto with = nd;
        with.push_back(c);
        const double expected = oracle::hv_grid(with, r) - oracle::hv_grid(nd, r);
        CHECK(hv_improvement(nd, c, r) == doctest::Approx(expected).epsilon(1e-9));
        CHECK(hv_improvement(nd, c, r) >= 0.0);
    }
}

TEST_CASE("igd examples and properties") {
    const std::vector<ObjectiveVector> ref{{0, 1}, {1, 0}};
    CHECK(igd(ref, ref) == 0.0);
    CHECK(igd(ref, {{0, 1}}) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(igd(ref, {{0.5, 0.5}}) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(igd(ref, {}), ContractViolation);

    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        auto p = random_front(rng, 20, 2);
        auto q = random_front(rng, 5, 2);
        const double base = igd(p, q);
        rng.shuffle(p.begin(), p.end());
        rng.shuffle(q.begin(), q.end());
        CHECK(igd(p, q) == doctest::Approx(base).epsilon(1e-12));
        q.push_back(random_front(rng, 1, 2).front());
        CHECK(igd(p, q) <= base + 1e-15);
    }
}

TEST_CASE("adaptive reference point") {
    const auto r = adaptive_reference_point({{1.0, -2.0}, {2.0, 0.0}}, 1.1);
    CHECK(r[0] == doctest::Approx(2.2));
    CHECK(r[1] == doctest::Approx(0.1));
}
