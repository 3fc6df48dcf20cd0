#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace clmea {

using DecisionVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;

/// Axis-aligned box of admissible decision vectors.
class BoundsBox {
public:
    BoundsBox() = default;
    BoundsBox(std::vector<double> lower, std::vector<double> upper);

    /// [lo, hi]^dim
    static BoundsBox uniform(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    double width(std::size_t i) const { return upper_[i] - lower_[i]; }

    bool contains(std::span<const double> x) const;
    void clip(std::span<double> x) const;
    DecisionVector clipped(DecisionVector x) const;

    /// Affine map onto [0,1]^D and back.
    DecisionVector to_unit(std::span<const double> x) const;
    DecisionVector from_unit(std::span<const double> u) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

struct EvaluatedSample {
    DecisionVector x;
    ObjectiveVector f;
    std::int64_t fe_index = 0;
};

/// Distance below which two decision vectors are the same point.
inline constexpr double kDuplicateTolerance = 1e-12;

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Append-only record of every truly evaluated sample.
class Archive {
public:
    Archive() = default;

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const EvaluatedSample& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<EvaluatedSample>& samples() const noexcept { return samples_; }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

    /// Appends a sample. Its fe_index must exceed every stored index and x must
    /// not duplicate a stored decision vector.
    void add(EvaluatedSample sample);

    bool contains(std::span<const double> x, double tolerance = kDuplicateTolerance) const;

    std::vector<DecisionVector> decisions() const;
    std::vector<ObjectiveVector> objectives() const;
    std::size_t num_objectives() const { return samples_.empty() ? 0 : samples_.front().f.size(); }

private:
    std::vector<EvaluatedSample> samples_;
};

} // namespace clmea
