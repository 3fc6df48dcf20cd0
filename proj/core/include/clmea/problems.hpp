#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "clmea/types.hpp"

namespace clmea {

enum class ProblemFamily { kDtlz, kZdt, kExternal };

/// Identity and geometry of a test problem.
struct ProblemSpec {
    ProblemFamily family = ProblemFamily::kDtlz;
    int id = 2;
    std::size_t num_objectives = 2;
    std::size_t dim = 30;
    BoundsBox bounds;

    static ProblemSpec dtlz(int id, std::size_t num_objectives, std::size_t dim);
    static ProblemSpec zdt(int id, std::size_t dim);

    /// "DTLZ2", "ZDT4", "external", ...
    std::string name() const;
};

/// Analytic objective values of a DTLZ or ZDT problem. x must lie in bounds.
ObjectiveVector evaluate(const ProblemSpec& spec, std::span<const double> x);

/// At least `count` mutually non-dominated points on the true Pareto front,
/// spread evenly by farthest-point subsampling of a dense parameterization.
/// Always contains the per-objective extreme points.
std::vector<ObjectiveVector> pareto_front_reference(const ProblemSpec& spec, std::size_t count);

/// Anything that can be truly evaluated by the optimizer.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::size_t num_objectives() const = 0;
    virtual const BoundsBox& bounds() const = 0;
    virtual std::string name() const = 0;

    /// One real function evaluation. `fe_index` is the 1-based ordinal of this
    /// evaluation within the run, used for error context and external protocols.
    virtual ObjectiveVector evaluate(std::span<const double> x, std::int64_t fe_index) = 0;

    std::size_t dim() const { return bounds().dim(); }
};

class BenchmarkProblem final : public Problem {
public:
    explicit BenchmarkProblem(ProblemSpec spec);

    std::size_t num_objectives() const override { return spec_.num_objectives; }
    const BoundsBox& bounds() const override { return spec_.bounds; }
    std::string name() const override { return spec_.name(); }
    ObjectiveVector evaluate(std::span<const double> x, std::int64_t fe_index) override;

    const ProblemSpec& spec() const noexcept { return spec_; }

private:
    ProblemSpec spec_;
};

/// Wraps a plain callable; used for custom objectives and test hooks.
class FunctionProblem final : public Problem {
public:
    using Function = std::function<ObjectiveVector(std::span<const double>)>;

    FunctionProblem(std::string name, std::size_t num_objectives, BoundsBox bounds, Function function);

    std::size_t num_objectives() const override { return num_objectives_; }
    const BoundsBox& bounds() const override { return bounds_; }
    std::string name() const override { return name_; }
    ObjectiveVector evaluate(std::span<const double> x, std::int64_t fe_index) override;

private:
    std::string name_;
    std::size_t num_objectives_;
    BoundsBox bounds_;
    Function function_;
};

} // namespace clmea
