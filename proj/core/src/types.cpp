#include "clmea/types.hpp"

#include <algorithm>
#include <cmath>

#include "clmea/errors.hpp"

namespace clmea {

BoundsBox::BoundsBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    require(!lower_.empty(), "BoundsBox: dimension must be at least 1");
    require(lower_.size() == upper_.size(), "BoundsBox: lower/upper length mismatch");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        require(lower_[i] < upper_[i], "BoundsBox: lower must be strictly below upper");
    }
}

BoundsBox BoundsBox::uniform(std::size_t dim, double lo, double hi) {
    return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

bool BoundsBox::contains(std::span<const double> x) const {
    if (x.size() != dim()) {
        return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) {
            return false;
        }
    }
    return true;
}

void BoundsBox::clip(std::span<double> x) const {
    require(x.size() == dim(), "BoundsBox::clip: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], lower_[i], upper_[i]);
    }
}

DecisionVector BoundsBox::clipped(DecisionVector x) const {
    clip(x);
    return x;
}

DecisionVector BoundsBox::to_unit(std::span<const double> x) const {
    require(x.size() == dim(), "BoundsBox::to_unit: dimension mismatch");
    DecisionVector u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        u[i] = (x[i] - lower_[i]) / (upper_[i] - lower_[i]);
    }
    return u;
}

DecisionVector BoundsBox::from_unit(std::span<const double> u) const {
    require(u.size() == dim(), "BoundsBox::from_unit: dimension mismatch");
    DecisionVector x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        x[i] = lower_[i] + u[i] * (upper_[i] - lower_[i]);
    }
    return x;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

void Archive::add(EvaluatedSample sample) {
    if (!samples_.empty()) {
        require(sample.fe_index > samples_.back().fe_index, "Archive::add: fe_index must increase");
        require(sample.f.size() == samples_.front().f.size(), "Archive::add: objective count mismatch");
        require(sample.x.size() == samples_.front().x.size(), "Archive::add: dimension mismatch");
    }
    require(!contains(sample.x), "Archive::add: duplicate decision vector");
    for (const double v : sample.f) {
        require(std::isfinite(v), "Archive::add: objective values must be finite");
    }
    samples_.push_back(std::move(sample));
}

bool Archive::contains(std::span<const double> x, double tolerance) const {
    const double tol2 = tolerance * tolerance;
    return std::any_of(samples_.begin(), samples_.end(), [&](const EvaluatedSample& s) {
        return s.x.size() == x.size() && squared_distance(s.x, x) < tol2;
    });
}

std::vector<DecisionVector> Archive::decisions() const {
    std::vector<DecisionVector> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) {
        out.push_back(s.x);
    }
    return out;
}

std::vector<ObjectiveVector> Archive::objectives() const {
    std::vector<ObjectiveVector> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) {
        out.push_back(s.f);
    }
    return out;
}

} // namespace clmea
