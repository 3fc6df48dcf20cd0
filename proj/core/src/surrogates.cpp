#include "clmea/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "clmea/errors.hpp"

namespace clmea {
namespace {

double gaussian(double squared_distance, double width) {
    return std::exp(-squared_distance / (width * width));
}

double positive_or_one(double v) {
    return (std::isfinite(v) && v > 0.0) ? v : 1.0;
}

} // namespace

RbfModel::RbfModel(std::vector<DecisionVector> centers, std::vector<double> weights, double width,
                   double regularization)
    : centers_(std::move(centers)), weights_(std::move(weights)), width_(width), regularization_(regularization) {
    require(!centers_.empty(), "RbfModel: at least one center required");
    require(centers_.size() == weights_.size(), "RbfModel: centers and weights differ in count");
    require(width_ > 0.0, "RbfModel: width must be positive");
    require(regularization_ >= 0.0, "RbfModel: regularization must be non-negative");
}

double RbfModel::predict(std::span<const double> x) const {
    require(x.size() == dim(), "rbf_predict: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        sum += weights_[i] * gaussian(squared_distance(x, centers_[i]), width_);
    }
    return sum;
}

double median_pairwise_distance(const std::vector<DecisionVector>& points) {
    if (points.size() < 2) {
        return 1.0;
    }
    std::vector<double> d;
    d.reserve(points.size() * (points.size() - 1) / 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            d.push_back(euclidean_distance(points[i], points[j]));
        }
    }
    const std::size_t mid = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
    double median = d[mid];
    if (d.size() % 2 == 0) {
        const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }
    return positive_or_one(median);
}

double mean_nearest_neighbor_distance(const std::vector<DecisionVector>& points) {
    if (points.size() < 2) {
        return 1.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j != i) {
                best = std::min(best, squared_distance(points[i], points[j]));
            }
        }
        total += std::sqrt(best);
    }
    return positive_or_one(total / static_cast<double>(points.size()));
}

RbfModel rbf_fit(const std::vector<DecisionVector>& x, std::span<const double> y, const WidthPolicy& width_policy,
                 double regularization) {
    require(!x.empty(), "rbf_fit: empty training set");
    require(x.size() == y.size(), "rbf_fit: inputs and targets differ in count");
    require(regularization >= 0.0, "rbf_fit: regularization must be non-negative");
    const std::size_t dim = x.front().size();
    for (const auto& xi : x) {
        require(xi.size() == dim, "rbf_fit: inconsistent dimensions");
    }
    for (const double yi : y) {
        if (!std::isfinite(yi)) {
            throw FitError("rbf_fit: non-finite target");
        }
    }

    const auto k = static_cast<Eigen::Index>(x.size());
    const double tol2 = kDuplicateTolerance * kDuplicateTolerance;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (squared_distance(x[i], x[j]) < tol2) {
                throw FitError("rbf_fit: duplicate centers");
            }
        }
    }

    double width = width_policy.value;
    if (width_policy.kind == WidthPolicy::Kind::kMedianPairwiseDistance) {
        width = median_pairwise_distance(x);
    }
    require(width > 0.0, "rbf_fit: width must be positive");

    Eigen::MatrixXd phi(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        phi(i, i) = 1.0 + regularization;
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double v = gaussian(squared_distance(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]), width);
            phi(i, j) = v;
            phi(j, i) = v;
        }
    }
    const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), k);

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(phi);
    if (ldlt.info() != Eigen::Success) {
        throw FitError("rbf_fit: kernel system factorization failed");
    }
    Eigen::VectorXd w = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !w.allFinite()) {
        throw FitError("rbf_fit: singular kernel system");
    }
    // One step of iterative refinement tightens the interpolation residual on
    // poorly conditioned kernel matrices.
    const Eigen::VectorXd residual = rhs - phi * w;
    w += ldlt.solve(residual);
    if (!w.allFinite()) {
        throw FitError("rbf_fit: singular kernel system");
    }
    if (regularization == 0.0) {
        const Eigen::ArrayXd scale = rhs.cwiseAbs().array().max(1.0);
        if (((rhs - phi * w).cwiseAbs().array() > 1e-7 * scale).any()) {
            throw FitError("rbf_fit: kernel system is numerically singular");
        }
    }

    return RbfModel(x, std::vector<double>(w.data(), w.data() + k), width, regularization);
}

PnnModel::PnnModel(std::vector<int> labels, std::vector<std::vector<DecisionVector>> patterns, double sigma)
    : labels_(std::move(labels)), patterns_(std::move(patterns)), sigma_(sigma) {
    require(!labels_.empty(), "PnnModel: at least one class required");
    require(labels_.size() == patterns_.size(), "PnnModel: labels and pattern groups differ in count");
    require(std::is_sorted(labels_.begin(), labels_.end()), "PnnModel: labels must be ascending");
    require(sigma_ > 0.0, "PnnModel: sigma must be positive");
    for (const auto& group : patterns_) {
        require(!group.empty(), "PnnModel: every class needs a pattern");
    }
}

std::vector<double> PnnModel::scores(std::span<const double> x) const {
    require(x.size() == patterns_.front().front().size(), "pnn_predict: dimension mismatch");
    const double denom = 2.0 * sigma_ * sigma_;
    std::vector<double> p(labels_.size(), 0.0);
    for (std::size_t c = 0; c < patterns_.size(); ++c) {
        double sum = 0.0;
        for (const auto& pattern : patterns_[c]) {
            sum += std::exp(-squared_distance(x, pattern) / denom);
        }
        p[c] = sum / static_cast<double>(patterns_[c].size());
    }
    return p;
}

int PnnModel::predict(std::span<const double> x) const {
    const std::vector<double> p = scores(x);
    if (std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; })) {
        // Every kernel underflowed: fall back to the class of the nearest pattern,
        // the sigma -> 0 limit of the classifier.
        double best = std::numeric_limits<double>::infinity();
        int label = labels_.front();
        for (std::size_t c = 0; c < patterns_.size(); ++c) {
            for (const auto& pattern : patterns_[c]) {
                const double d = squared_distance(x, pattern);
                if (d < best) {
                    best = d;
                    label = labels_[c];
                }
            }
        }
        return label;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c) {
        if (p[c] > p[best]) {
            best = c;
        }
    }
    return labels_[best];
}

PnnModel pnn_fit(const std::vector<DecisionVector>& x, std::span<const int> labels, const SigmaPolicy& sigma_policy) {
    require(!x.empty(), "pnn_fit: empty training set");
    require(x.size() == labels.size(), "pnn_fit: inputs and labels differ in count");
    std::vector<int> classes(labels.begin(), labels.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    std::vector<std::vector<DecisionVector>> patterns(classes.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto c = static_cast<std::size_t>(
            std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());
        patterns[c].push_back(x[i]);
    }
    const double sigma = sigma_policy.kind == SigmaPolicy::Kind::kFixed ? sigma_policy.value
                                                                        : mean_nearest_neighbor_distance(x);
    return PnnModel(std::move(classes), std::move(patterns), sigma);
}

ObjectiveSurrogate::ObjectiveSurrogate(const std::vector<DecisionVector>& x, const std::vector<ObjectiveVector>& f,
                                       const BoundsBox& bounds, const WidthPolicy& width_policy,
                                       double regularization)
    : bounds_(bounds) {
    require(!x.empty() && x.size() == f.size(), "ObjectiveSurrogate: inputs and objectives differ in count");
    std::vector<DecisionVector> unit;
    unit.reserve(x.size());
    for (const auto& xi : x) {
        unit.push_back(bounds_.to_unit(xi));
    }
    const std::size_t m = f.front().size();
    std::vector<double> y(x.size());
    models_.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            y[i] = f[i][k];
        }
        models_.push_back(rbf_fit(unit, y, width_policy, regularization));
    }
}

ObjectiveVector ObjectiveSurrogate::predict(std::span<const double> x) const {
    const DecisionVector u = bounds_.to_unit(x);
    ObjectiveVector out(models_.size());
    for (std::size_t k = 0; k < models_.size(); ++k) {
        out[k] = models_[k].predict(u);
    }
    return out;
}

} // namespace clmea
