#include "clmea/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "clmea/errors.hpp"
#include "clmea/kernel.hpp"

namespace clmea {
namespace {

constexpr double kPi = std::numbers::pi;

// Smallest attainable first objective of ZDT6, 1 - exp(-4x) sin^6(6 pi x) at x ~ 0.0815.
constexpr double kZdt6MinF1 = 0.28077531881537;

double rastrigin_g(std::span<const double> tail) {
    double s = 0.0;
    for (const double v : tail) {
        const double d = v - 0.5;
        s += d * d - std::cos(20.0 * kPi * d);
    }
    return 100.0 * (static_cast<double>(tail.size()) + s);
}

double sphere_g(std::span<const double> tail) {
    double s = 0.0;
    for (const double v : tail) {
        s += (v - 0.5) * (v - 0.5);
    }
    return s;
}

// f_i = (1+g) prod cos(theta_j) * sin(theta_{M-i}) with angles given in radians.
ObjectiveVector spherical(std::span<const double> theta, double g, std::size_t m) {
    ObjectiveVector f(m, 1.0 + g);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j + i + 1 < m; ++j) {
            f[i] *= std::cos(theta[j]);
        }
        if (i > 0) {
            f[i] *= std::sin(theta[m - i - 1]);
        }
    }
    return f;
}

ObjectiveVector evaluate_dtlz(const ProblemSpec& spec, std::span<const double> x) {
    const std::size_t m = spec.num_objectives;
    const auto head = x.first(m - 1);
    const auto tail = x.subspan(m - 1);
    std::vector<double> theta(m - 1);

    switch (spec.id) {
    case 1: {
        const double g = rastrigin_g(tail);
        ObjectiveVector f(m, 0.5 * (1.0 + g));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j + i + 1 < m; ++j) {
                f[i] *= head[j];
            }
            if (i > 0) {
                f[i] *= 1.0 - head[m - i - 1];
            }
        }
        return f;
    }
    case 2:
    case 3:
    case 4: {
        const double g = spec.id == 3 ? rastrigin_g(tail) : sphere_g(tail);
        for (std::size_t j = 0; j + 1 < m; ++j) {
            const double xj = spec.id == 4 ? std::pow(head[j], 100.0) : head[j];
            theta[j] = xj * kPi / 2.0;
        }
        return spherical(theta, g, m);
    }
    case 5:
    case 6: {
        double g = 0.0;
        if (spec.id == 5) {
            g = sphere_g(tail);
        } else {
            for (const double v : tail) {
                g += std::pow(v, 0.1);
            }
        }
        theta[0] = head[0] * kPi / 2.0;
        for (std::size_t j = 1; j + 1 < m; ++j) {
            theta[j] = kPi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * head[j]);
        }
        return spherical(theta, g, m);
    }
    case 7: {
        const double g = 1.0 + 9.0 * std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
        ObjectiveVector f(m);
        double h = static_cast<double>(m);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            f[i] = head[i];
            h -= f[i] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * f[i]));
        }
        f[m - 1] = (1.0 + g) * h;
        return f;
    }
    default:
        throw UnsupportedProblem("unknown DTLZ problem " + std::to_string(spec.id));
    }
}

ObjectiveVector evaluate_zdt(const ProblemSpec& spec, std::span<const double> x) {
    const auto tail = x.subspan(1);
    const double n_tail = static_cast<double>(tail.size());
    const double tail_sum = std::accumulate(tail.begin(), tail.end(), 0.0);
    double f1 = x[0];
    double g = 1.0;
    switch (spec.id) {
    case 1:
    case 2:
    case 3:
        g = 1.0 + 9.0 * tail_sum / n_tail;
        break;
    case 4:
        g = 1.0 + 10.0 * n_tail;
        for (const double v : tail) {
            g += v * v - 10.0 * std::cos(4.0 * kPi * v);
        }
        break;
    case 6:
        f1 = 1.0 - std::exp(-4.0 * x[0]) * std::pow(std::sin(6.0 * kPi * x[0]), 6);
        g = 1.0 + 9.0 * std::pow(tail_sum / n_tail, 0.25);
        break;
    default:
        throw UnsupportedProblem("unknown ZDT problem " + std::to_string(spec.id));
    }
    const double r = f1 / g;
    double h = 0.0;
    switch (spec.id) {
    case 1:
    case 4:
        h = 1.0 - std::sqrt(r);
        break;
    case 2:
    case 6:
        h = 1.0 - r * r;
        break;
    default:  // 3
        h = 1.0 - std::sqrt(r) - r * std::sin(10.0 * kPi * f1);
        break;
    }
    return {f1, g * h};
}

// Keeps the non-dominated members of a 2-objective candidate set.
std::vector<ObjectiveVector> filter_2d(std::vector<ObjectiveVector> points) {
    std::sort(points.begin(), points.end());
    std::vector<ObjectiveVector> kept;
    double best = std::numeric_limits<double>::infinity();
    for (auto& p : points) {
        if (p[1] < best) {
            best = p[1];
            kept.push_back(std::move(p));
        }
    }
    return kept;
}

std::vector<ObjectiveVector> filter_any(const std::vector<ObjectiveVector>& points) {
    std::vector<ObjectiveVector> kept;
    for (const std::size_t i : first_front(points)) {
        kept.push_back(points[i]);
    }
    return kept;
}

// Lattice of points with non-negative coordinates summing to one.
std::vector<ObjectiveVector> simplex_lattice_3(std::size_t divisions) {
    std::vector<ObjectiveVector> out;
    const double h = static_cast<double>(divisions);
    for (std::size_t i = 0; i <= divisions; ++i) {
        for (std::size_t j = 0; i + j <= divisions; ++j) {
            const std::size_t k = divisions - i - j;
            out.push_back({static_cast<double>(i) / h, static_cast<double>(j) / h, static_cast<double>(k) / h});
        }
    }
    return out;
}

// Greedy farthest-point subsampling, seeded with the per-objective minimizers.
std::vector<ObjectiveVector> spread_subsample(const std::vector<ObjectiveVector>& candidates, std::size_t count) {
    if (candidates.size() <= count) {
        return candidates;
    }
    const std::size_t m = candidates.front().size();
    std::vector<double> nearest(candidates.size(), std::numeric_limits<double>::infinity());
    std::vector<char> taken(candidates.size(), 0);
    std::vector<ObjectiveVector> out;
    out.reserve(count);

    auto take = [&](std::size_t idx) {
        taken[idx] = 1;
        out.push_back(candidates[idx]);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(candidates[i], candidates[idx]));
        }
    };

    for (std::size_t k = 0; k < m; ++k) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i) {
            const auto& a = candidates[i];
            const auto& b = candidates[best];
            if (a[k] < b[k] || (a[k] == b[k] && a < b)) {
                best = i;
            }
        }
        if (!taken[best]) {
            take(best);
        }
    }
    while (out.size() < count) {
        std::size_t best = 0;
        double best_d = -1.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!taken[i] && nearest[i] > best_d) {
                best_d = nearest[i];
                best = i;
            }
        }
        take(best);
    }
    return out;
}

std::vector<ObjectiveVector> curve_2d(std::size_t samples, const std::function<ObjectiveVector(double)>& at) {
    std::vector<ObjectiveVector> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        out.push_back(at(static_cast<double>(i) / static_cast<double>(samples - 1)));
    }
    return out;
}

std::vector<ObjectiveVector> dense_front(const ProblemSpec& spec, std::size_t count) {
    const std::size_t dense = std::max<std::size_t>(20000, 40 * count);
    const std::size_t m = spec.num_objectives;

    if (spec.family == ProblemFamily::kZdt) {
        switch (spec.id) {
        case 1:
        case 4:
            return curve_2d(dense, [](double t) { return ObjectiveVector{t * t, 1.0 - t}; });
        case 2:
            return curve_2d(dense, [](double t) { return ObjectiveVector{t, 1.0 - t * t}; });
        case 3:
            return filter_2d(curve_2d(dense, [](double t) {
                const double f1 = t * t;
                return ObjectiveVector{f1, 1.0 - t - f1 * std::sin(10.0 * kPi * f1)};
            }));
        case 6:
            return curve_2d(dense, [](double t) {
                const double f1 = kZdt6MinF1 + (1.0 - kZdt6MinF1) * t;
                return ObjectiveVector{f1, 1.0 - f1 * f1};
            });
        default:
            break;
        }
        throw UnsupportedProblem("no reference front for " + spec.name());
    }

    auto dtlz7_last = [m](std::span<const double> head) {
        double h = static_cast<double>(m);
        for (const double f : head) {
            h -= f / 2.0 * (1.0 + std::sin(3.0 * kPi * f));
        }
        return 2.0 * h;
    };

    if (m == 2) {
        switch (spec.id) {
        case 1:
            return curve_2d(dense, [](double t) { return ObjectiveVector{0.5 * t, 0.5 * (1.0 - t)}; });
        case 2:
        case 3:
        case 4:
        case 5:
        case 6:
            return curve_2d(dense, [](double t) {
                return ObjectiveVector{std::cos(t * kPi / 2.0), std::sin(t * kPi / 2.0)};
            });
        case 7:
            return filter_2d(curve_2d(dense, [&](double t) {
                const double head[1] = {t};
                return ObjectiveVector{t, dtlz7_last(head)};
            }));
        default:
            break;
        }
    } else if (m == 3) {
        switch (spec.id) {
        case 1: {
            auto lattice = simplex_lattice_3(200);
            for (auto& p : lattice) {
                for (double& v : p) {
                    v *= 0.5;
                }
            }
            return lattice;
        }
        case 2:
        case 3:
        case 4: {
            auto lattice = simplex_lattice_3(200);
            for (auto& p : lattice) {
                const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
                for (double& v : p) {
                    v /= norm;
                }
            }
            return lattice;
        }
        case 5:
        case 6:
            return curve_2d(dense, [](double t) {
                const double c = std::cos(t * kPi / 2.0) / std::numbers::sqrt2;
                return ObjectiveVector{c, c, std::sin(t * kPi / 2.0)};
            });
        case 7: {
            const std::size_t side = 100;
            std::vector<ObjectiveVector> grid;
            grid.reserve(side * side);
            for (std::size_t i = 0; i < side; ++i) {
                for (std::size_t j = 0; j < side; ++j) {
                    const double head[2] = {static_cast<double>(i) / (side - 1), static_cast<double>(j) / (side - 1)};
                    grid.push_back({head[0], head[1], dtlz7_last(head)});
                }
            }
            return filter_any(grid);
        }
        default:
            break;
        }
    }
    throw UnsupportedProblem("no reference front for " + spec.name() + " with " + std::to_string(m) + " objectives");
}

} // namespace

ProblemSpec ProblemSpec::dtlz(int id, std::size_t num_objectives, std::size_t dim) {
    require(id >= 1 && id <= 7, "ProblemSpec::dtlz: id must be in 1..7");
    require(num_objectives == 2 || num_objectives == 3, "ProblemSpec::dtlz: M must be 2 or 3");
    require(dim >= num_objectives, "ProblemSpec::dtlz: D must be at least M");
    return {ProblemFamily::kDtlz, id, num_objectives, dim, BoundsBox::uniform(dim, 0.0, 1.0)};
}

ProblemSpec ProblemSpec::zdt(int id, std::size_t dim) {
    require(id >= 1 && id <= 6 && id != 5, "ProblemSpec::zdt: id must be one of 1, 2, 3, 4, 6");
    require(dim >= 2, "ProblemSpec::zdt: D must be at least 2");
    BoundsBox bounds = BoundsBox::uniform(dim, 0.0, 1.0);
    if (id == 4) {
        std::vector<double> lo(dim, -5.0);
        std::vector<double> hi(dim, 5.0);
        lo[0] = 0.0;
        hi[0] = 1.0;
        bounds = BoundsBox(std::move(lo), std::move(hi));
    }
    return {ProblemFamily::kZdt, id, 2, dim, std::move(bounds)};
}

std::string ProblemSpec::name() const {
    switch (family) {
    case ProblemFamily::kDtlz:
        return "DTLZ" + std::to_string(id);
    case ProblemFamily::kZdt:
        return "ZDT" + std::to_string(id);
    case ProblemFamily::kExternal:
        break;
    }
    return "external";
}

ObjectiveVector evaluate(const ProblemSpec& spec, std::span<const double> x) {
    require(x.size() == spec.dim, "evaluate: dimension mismatch");
    require(spec.bounds.contains(x), "evaluate: decision vector outside bounds");
    switch (spec.family) {
    case ProblemFamily::kDtlz:
        return evaluate_dtlz(spec, x);
    case ProblemFamily::kZdt:
        return evaluate_zdt(spec, x);
    case ProblemFamily::kExternal:
        break;
    }
    throw UnsupportedProblem("evaluate: external problems need an evaluator process");
}

std::vector<ObjectiveVector> pareto_front_reference(const ProblemSpec& spec, std::size_t count) {
    if (spec.family == ProblemFamily::kExternal) {
        throw UnsupportedProblem("pareto_front_reference: the front of an external problem is unknown");
    }
    require(count >= 2, "pareto_front_reference: count must be at least 2");
    return spread_subsample(dense_front(spec, count), count);
}

BenchmarkProblem::BenchmarkProblem(ProblemSpec spec) : spec_(std::move(spec)) {
    require(spec_.family != ProblemFamily::kExternal, "BenchmarkProblem: external specs need ExternalProblem");
}

ObjectiveVector BenchmarkProblem::evaluate(std::span<const double> x, std::int64_t) {
    return clmea::evaluate(spec_, x);
}

FunctionProblem::FunctionProblem(std::string name, std::size_t num_objectives, BoundsBox bounds, Function function)
    : name_(std::move(name)), num_objectives_(num_objectives), bounds_(std::move(bounds)),
      function_(std::move(function)) {}

ObjectiveVector FunctionProblem::evaluate(std::span<const double> x, std::int64_t fe_index) {
    try {
        return function_(x);
    } catch (const EvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EvalFailure(e.what(), fe_index);
    }
}

} // namespace clmea
