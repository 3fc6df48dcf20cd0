#include <doctest.h>

#include <cmath>
#include <limits>

#include "clmea/errors.hpp"
#include "clmea/kernel.hpp"
#include "clmea/surrogates.hpp"
#include "oracles.hpp"

using namespace clmea;

TEST_CASE("rbf single point") {
    const auto model = rbf_fit({{0.3, 0.7}}, std::vector{3.0});
    CHECK(model.predict(std::vector{0.3, 0.7}) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("rbf two point system solved by hand") {
    const auto model = rbf_fit({{0.0}, {1.0}}, std::vector{0.0, 1.0}, WidthPolicy::fixed(1.0), 0.0);
    // w solves [[1, e^-1], [e^-1, 1]] w = (0, 1); yhat(0.5) = e^-0.25 (w0 + w1).
    const double e1 = std::exp(-1.0);
    const double expected = std::exp(-0.25) / (1.0 + e1);
    CHECK(model.predict(std::vector{0.5}) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.5694).epsilon(1e-4));
}

TEST_CASE("rbf interpolates at centers") {
    Rng rng(42);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + rng.index(19);
        const std::size_t k = 2 + rng.index(29);
        const auto x = latin_hypercube_sample(k, BoundsBox::uniform(d, 0.0, 1.0), rng);
        std::vector<double> y(k);
        for (auto& v : y) {
            v = rng.uniform(-5.0, 5.0);
        }
        const auto model = rbf_fit(x, y);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(std::abs(model.predict(x[i]) - y[i]) <= 1e-6 * std::max(1.0, std::abs(y[i])));
        }
    }
}

TEST_CASE("one-dimensional kernel systems interpolate or report singularity") {
    Rng rng(43);
    int singular = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t k = 2 + rng.index(29);
        const auto x = latin_hypercube_sample(k, BoundsBox::uniform(1, 0.0, 1.0), rng);
        std::vector<double> y(k);
        for (auto& v : y) {
            v = rng.uniform(-5.0, 5.0);
        }
        try {
            const auto model = rbf_fit(x, y);
            for (std::size_t i = 0; i < k; ++i) {
                CHECK(std::abs(model.predict(x[i]) - y[i]) <= 1e-6 * std::max(1.0, std::abs(y[i])));
            }
        } catch (const FitError&) {
            ++singular;
            CHECK(k > 8);
        }
    }
    CHECK(singular < 50);
}

TEST_CASE("rbf is linear in the targets") {
    Rng rng(7);
    const auto x = latin_hypercube_sample(12, BoundsBox::uniform(4, 0.0, 1.0), rng);
    std::vector<double> y(12);
    for (auto& v : y) {
        v = rng.uniform();
    }
    std::vector<double> scaled(y);
    for (auto& v : scaled) {
        v *= -3.5;
    }
    const auto a = rbf_fit(x, y);
    const auto b = rbf_fit(x, scaled);
    for (int q = 0; q < 50; ++q) {
        const std::vector<double> p{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        CHECK(b.predict(p) == doctest::Approx(-3.5 * a.predict(p)).epsilon(1e-9));
    }
}

TEST_CASE("rbf has no constant tail") {
    const std::vector<DecisionVector> x{{0.0}, {1.0}};
    const auto a = rbf_fit(x, std::vector{0.0, 1.0}, WidthPolicy::fixed(1.0));
    const auto b = rbf_fit(x, std::vector{10.0, 11.0}, WidthPolicy::fixed(1.0));
    CHECK(b.predict(std::vector{0.0}) == doctest::Approx(10.0));
    CHECK(b.predict(std::vector{1.0}) == doctest::Approx(11.0));
    CHECK(std::abs(b.predict(std::vector{0.5}) - (a.predict(std::vector{0.5}) + 10.0)) > 1e-3);
}

TEST_CASE("rbf decays far from the centers") {
    std::vector<DecisionVector> centers;
    std::vector<double> weights;
    for (int i = 0; i < 10; ++i) {
        centers.push_back({0.1 * i, 0.0});
        weights.push_back(i % 2 == 0 ? 1.0 : -1.0);
    }
    const RbfModel model(centers, weights, 0.2, 0.0);
    CHECK(std::abs(model.predict(std::vector{0.9 + 10 * 0.2, 0.0})) < 1e-10);
}

TEST_CASE("rbf fit errors") {
    CHECK_THROWS_AS(rbf_fit({{0.5}, {0.5}}, std::vector{1.0, 2.0}), FitError);
    CHECK_THROWS_AS(rbf_fit({}, std::vector<double>{}), ContractViolation);
    CHECK_THROWS_AS(rbf_fit({{0.0}}, std::vector{1.0, 2.0}), ContractViolation);
}

TEST_CASE("width heuristics") {
    CHECK(median_pairwise_distance({{0.0}, {1.0}, {3.0}}) == doctest::Approx(2.0));
    CHECK(mean_nearest_neighbor_distance({{0.0}, {1.0}, {3.0}}) == doctest::Approx((1.0 + 1.0 + 2.0) / 3.0));
}

TEST_CASE("pnn model construction") {
    const std::vector<int> labels{2, 1};
    const auto model = pnn_fit({{0.0}, {1.0}}, labels, SigmaPolicy::fixed(0.5));
    CHECK(model.sigma() == 0.5);
    REQUIRE(model.labels() == std::vector<int>{1, 2});
    CHECK(model.patterns()[0].size() == 1);
    CHECK(model.patterns()[1].size() == 1);

    const std::vector<int> same{3, 3, 3};
    const auto single = pnn_fit({{0.0}, {0.5}, {1.0}}, same);
    CHECK(single.labels() == std::vector<int>{3});
    CHECK(single.predict(std::vector{100.0}) == 3);
}

TEST_CASE("pnn prediction examples") {
    const std::vector<int> labels{1, 2};
    const auto far = pnn_fit({{0.0}, {50.0}}, labels, SigmaPolicy::fixed(1.0));
    CHECK(far.predict(std::vector{0.0}) == 1);
    CHECK(far.predict(std::vector{50.0}) == 2);

    const auto model = pnn_fit({{0.0}, {2.0}}, labels, SigmaPolicy::fixed(1.0));
    CHECK(model.predict(std::vector{0.5}) == 1);
    const auto s = model.scores(std::vector{0.5});
    CHECK(s[0] == doctest::Approx(std::exp(-0.125)));
    CHECK(s[1] == doctest::Approx(std::exp(-1.125)));
    CHECK(model.predict(std::vector{1.0}) == 1);

    const std::vector<int> reversed{5, 4};
    const auto tie = pnn_fit({{0.0}, {2.0}}, reversed, SigmaPolicy::fixed(1.0));
    CHECK(tie.predict(std::vector{1.0}) == 4);
}

TEST_CASE("pnn argmax is invariant to a common density constant") {
    Rng rng(19);
    const auto x = latin_hypercube_sample(40, BoundsBox::uniform(3, 0.0, 1.0), rng);
    std::vector<int> labels;
    for (std::size_t i = 0; i < x.size(); ++i) {
        labels.push_back(1 + static_cast<int>(rng.index(3)));
    }
    const auto model = pnn_fit(x, labels);
    const double sigma = model.sigma();
    const double constant = std::pow(2.0 * 3.141592653589793, 1.5) * sigma * sigma * sigma;
    for (int q = 0; q < 200; ++q) {
        const std::vector<double> p{rng.uniform(), rng.uniform(), rng.uniform()};
        auto s = model.scores(p);
        for (auto& v : s) {
            v /= constant;
        }
        const auto best = std::max_element(s.begin(), s.end()) - s.begin();
        CHECK(model.predict(p) == model.labels()[static_cast<std::size_t>(best)]);
    }
}

TEST_CASE("pnn with vanishing sigma is nearest-pattern classification") {
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        const auto x = latin_hypercube_sample(30, BoundsBox::uniform(4, 0.0, 1.0), rng);
        std::vector<int> labels;
        for (std::size_t i = 0; i < x.size(); ++i) {
            labels.push_back(1 + static_cast<int>(rng.index(4)));
        }
        const auto model = pnn_fit(x, labels, SigmaPolicy::fixed(1e-6));
        for (int q = 0; q < 100; ++q) {
            const std::vector<double> p{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
            std::size_t nearest = 0;
            for (std::size_t i = 1; i < x.size(); ++i) {
                if (oracle::distance(p, x[i]) < oracle::distance(p, x[nearest])) {
                    nearest = i;
                }
            }
            const int predicted = model.predict(p);
            CHECK(predicted == labels[nearest]);
            CHECK(std::find(labels.begin(), labels.end(), predicted) != labels.end());
        }
    }
}

TEST_CASE("objective surrogate interpolates in original coordinates") {
    Rng rng(31);
    const auto bounds = BoundsBox({0.0, -5.0, -5.0}, {1.0, 5.0, 5.0});
    const auto x = latin_hypercube_sample(20, bounds, rng);
    std::vector<ObjectiveVector> f;
    for (const auto& p : x) {
        f.push_back({p[0], p[1] * p[1] + p[2]});
    }
    const ObjectiveSurrogate surrogate(x, f, bounds, WidthPolicy::median(), 0.0);
    CHECK(surrogate.num_objectives() == 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto p = surrogate.predict(x[i]);
        CHECK(p[0] == doctest::Approx(f[i][0]).epsilon(1e-6));
        CHECK(p[1] == doctest::Approx(f[i][1]).epsilon(1e-6));
    }
}
