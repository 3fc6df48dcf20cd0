#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clmea/types.hpp"

namespace clmea {

/// How the Gaussian basis width of an RBF model is chosen.
struct WidthPolicy {
    enum class Kind { kMedianPairwiseDistance, kFixed };
    Kind kind = Kind::kMedianPairwiseDistance;
    double value = 1.0;

    static WidthPolicy median() { return {}; }
    static WidthPolicy fixed(double width) { return {Kind::kFixed, width}; }
};

/// How the PNN smoothing parameter is chosen.
struct SigmaPolicy {
    enum class Kind { kMeanNearestNeighbor, kFixed };
    Kind kind = Kind::kMeanNearestNeighbor;
    double value = 1.0;

    static SigmaPolicy mean_nearest_neighbor() { return {}; }
    static SigmaPolicy fixed(double sigma) { return {Kind::kFixed, sigma}; }
};

/// Gaussian radial basis function interpolant
///   y(x) = sum_i w_i exp(-(|x - c_i| / width)^2)
/// with one center per training point.
class RbfModel {
public:
    RbfModel(std::vector<DecisionVector> centers, std::vector<double> weights, double width, double regularization);

    double predict(std::span<const double> x) const;

    const std::vector<DecisionVector>& centers() const noexcept { return centers_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double width() const noexcept { return width_; }
    double regularization() const noexcept { return regularization_; }
    std::size_t dim() const noexcept { return centers_.front().size(); }

private:
    std::vector<DecisionVector> centers_;
    std::vector<double> weights_;
    double width_;
    double regularization_;
};

/// Solves (Phi + regularization * I) w = y. Throws FitError on duplicate
/// centers or when the system cannot be solved.
RbfModel rbf_fit(const std::vector<DecisionVector>& x, std::span<const double> y,
                 const WidthPolicy& width_policy = WidthPolicy::median(), double regularization = 0.0);

inline double rbf_predict(const RbfModel& model, std::span<const double> x) { return model.predict(x); }

/// Median of all pairwise distances; 1 when undefined or zero.
double median_pairwise_distance(const std::vector<DecisionVector>& points);

/// Mean distance from each point to its nearest other point; 1 when undefined or zero.
double mean_nearest_neighbor_distance(const std::vector<DecisionVector>& points);

/// Probabilistic neural network (Parzen-window classifier). Class scores are
///   p_c(x) = (1/N_c) sum_j exp(-|x - C_cj|^2 / (2 sigma^2)),
/// omitting the normalization constant shared by all classes.
class PnnModel {
public:
    PnnModel(std::vector<int> labels, std::vector<std::vector<DecisionVector>> patterns, double sigma);

    /// Label with the largest class score; ties go to the smallest label.
    int predict(std::span<const double> x) const;

    /// Unnormalized class scores, one per entry of labels().
    std::vector<double> scores(std::span<const double> x) const;

    const std::vector<int>& labels() const noexcept { return labels_; }
    const std::vector<std::vector<DecisionVector>>& patterns() const noexcept { return patterns_; }
    double sigma() const noexcept { return sigma_; }

private:
    std::vector<int> labels_;  // ascending
    std::vector<std::vector<DecisionVector>> patterns_;
    double sigma_;
};

PnnModel pnn_fit(const std::vector<DecisionVector>& x, std::span<const int> labels,
                 const SigmaPolicy& sigma_policy = SigmaPolicy::mean_nearest_neighbor());

inline int pnn_predict(const PnnModel& model, std::span<const double> x) { return model.predict(x); }

/// One RBF per objective, trained and queried in bounds-normalized [0,1]^D.
class ObjectiveSurrogate {
public:
    ObjectiveSurrogate(const std::vector<DecisionVector>& x, const std::vector<ObjectiveVector>& f,
                       const BoundsBox& bounds, const WidthPolicy& width_policy, double regularization);

    ObjectiveVector predict(std::span<const double> x) const;
    std::size_t num_objectives() const noexcept { return models_.size(); }
    const std::vector<RbfModel>& models() const noexcept { return models_; }

private:
    BoundsBox bounds_;
    std::vector<RbfModel> models_;
};

} // namespace clmea
