#include "clmea/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <optional>
#include <numeric>

#include "clmea/errors.hpp"
#include "clmea/indicators.hpp"
#include "clmea/kernel.hpp"
#include "clmea/surrogates.hpp"

namespace clmea {
namespace {

class PhaseTimer {
public:
    PhaseTimer(std::map<std::string, double>& sink, std::string_view phase)
        : sink_(sink), phase_(phase), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        sink_[phase_] += elapsed.count();
    }
    PhaseTimer(const PhaseTimer&) = delete;
    PhaseTimer& operator=(const PhaseTimer&) = delete;

private:
    std::map<std::string, double>& sink_;
    std::string phase_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<StrategyKind> strategies_for(Variant variant) {
    switch (variant) {
    case Variant::kFull:
        return {StrategyKind::kPrescreen, StrategyKind::kHvSearch, StrategyKind::kLocalSearch};
    case Variant::kPrescreen:
        return {StrategyKind::kPrescreen};
    case Variant::kHvSearch:
        return {StrategyKind::kHvSearch};
    case Variant::kLocal:
        return {StrategyKind::kLocalSearch};
    }
    return {};
}

Phase phase_of(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::kPrescreen:
        return Phase::kPrescreen;
    case StrategyKind::kHvSearch:
        return Phase::kHvSearch;
    case StrategyKind::kLocalSearch:
        return Phase::kLocalSearch;
    }
    return Phase::kPrescreen;
}

// Stream labels for deriving per-phase generators from the run seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kBootstrapStream = 2;
constexpr std::uint64_t kLoopStream = 3;

} // namespace

std::string_view to_string(Variant variant) {
    switch (variant) {
    case Variant::kFull:
        return "full";
    case Variant::kPrescreen:
        return "s1";
    case Variant::kHvSearch:
        return "s2";
    case Variant::kLocal:
        return "s3";
    }
    return "full";
}

Variant parse_variant(std::string_view text) {
    if (text == "full") {
        return Variant::kFull;
    }
    if (text == "s1") {
        return Variant::kPrescreen;
    }
    if (text == "s2") {
        return Variant::kHvSearch;
    }
    if (text == "s3") {
        return Variant::kLocal;
    }
    throw ContractViolation("unknown variant '" + std::string(text) + "' (expected full, s1, s2 or s3)");
}

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::kInitial:
        return "init";
    case Phase::kExtreme:
        return "extreme";
    case Phase::kPrescreen:
        return "prescreen";
    case Phase::kHvSearch:
        return "hv_search";
    case Phase::kLocalSearch:
        return "local_search";
    }
    return "init";
}

Phase parse_phase(std::string_view text) {
    for (const Phase p : {Phase::kInitial, Phase::kExtreme, Phase::kPrescreen, Phase::kHvSearch, Phase::kLocalSearch}) {
        if (to_string(p) == text) {
            return p;
        }
    }
    throw ContractViolation("unknown phase tag '" + std::string(text) + "'");
}

RunConfig RunConfig::resolved(std::size_t dim) const {
    RunConfig out = *this;
    if (out.initial_samples == 0) {
        out.initial_samples = dim < 100 ? 100 : 200;
    }
    if (out.auto_local_train_size) {
        out.strategy.local_train_size = dim < 100 ? 100 : 200;
        out.auto_local_train_size = false;
    }
    return out;
}

Optimizer::Optimizer(Problem& problem, RunConfig config, TraceIndicators indicators, StrategyHooks hooks)
    : problem_(problem), config_(config.resolved(problem.dim())), indicators_(std::move(indicators)),
      hooks_(std::move(hooks)) {
    config_.strategy.validate();
    require(config_.initial_samples >= 1, "RunConfig: at least one initial sample");
    require(config_.bootstrap_population >= 4, "RunConfig: bootstrap population must be at least 4");
    if (!indicators_.hv_reference.empty()) {
        require(indicators_.hv_reference.size() == problem_.num_objectives(),
                "TraceIndicators: HV reference length differs from objective count");
    }
}

std::size_t Optimizer::remaining() const noexcept {
    return config_.max_evaluations > evaluations() ? config_.max_evaluations - evaluations() : 0;
}

RunResult Optimizer::result() const {
    RunResult out = result_;
    if (!out.archive.empty()) {
        out.front = first_front(out.archive.objectives());
    }
    return out;
}

void Optimizer::evaluate_and_record(const DecisionVector& x, Phase phase) {
    const auto fe_index = static_cast<std::int64_t>(evaluations() + 1);
    ObjectiveVector f;
    {
        PhaseTimer timer(result_.phase_seconds, "evaluation");
        f = problem_.evaluate(x, fe_index);
    }
    if (f.size() != problem_.num_objectives()) {
        throw EvalFailure("evaluator returned " + std::to_string(f.size()) + " objectives", fe_index);
    }
    result_.archive.add({x, f, fe_index});

    bool dominated = false;
    for (const auto& p : running_front_) {
        if (weakly_dominates(p, f)) {
            dominated = true;
            break;
        }
    }
    if (!dominated) {
        std::erase_if(running_front_, [&](const ObjectiveVector& p) { return dominates(f, p); });
        running_front_.push_back(f);
    }

    TraceEntry entry{fe_index, phase, x, f, std::nullopt, std::nullopt};
    if (!indicators_.reference_front.empty()) {
        entry.igd = igd(indicators_.reference_front, running_front_);
    }
    if (!indicators_.hv_reference.empty()) {
        entry.hv = hypervolume(running_front_, indicators_.hv_reference);
    }
    result_.trace.push_back(std::move(entry));
}

void Optimizer::initialize(Rng& rng) {
    PhaseTimer timer(result_.phase_seconds, "initialize");
    const std::size_t count = std::min(config_.initial_samples, remaining());
    if (count == 0) {
        return;
    }
    for (const auto& x : latin_hypercube_sample(count, problem_.bounds(), rng)) {
        if (result_.archive.contains(x)) {
            continue;
        }
        evaluate_and_record(x, Phase::kInitial);
    }
}

DecisionVector Optimizer::extreme_candidate(std::size_t objective, Rng& rng) {
    const Archive& archive = result_.archive;
    const BoundsBox& bounds = problem_.bounds();
    const std::size_t dim = bounds.dim();

    std::vector<std::size_t> by_objective(archive.size());
    std::iota(by_objective.begin(), by_objective.end(), std::size_t{0});
    std::stable_sort(by_objective.begin(), by_objective.end(),
                     [&](std::size_t a, std::size_t b) { return archive[a].f[objective] < archive[b].f[objective]; });

    auto perturb_until_new = [&](DecisionVector x) {
        const PolynomialMutationParams pm{config_.strategy.mutation.eta, 1.0 / static_cast<double>(dim)};
        for (int attempt = 0; attempt < 1000; ++attempt) {
            x = polynomial_mutation(x, pm, bounds, rng);
            if (!archive.contains(x)) {
                return x;
            }
        }
        for (;;) {
            auto fresh = latin_hypercube_sample(1, bounds, rng).front();
            if (!archive.contains(fresh)) {
                return fresh;
            }
        }
    };

    if (config_.bootstrap == BootstrapMode::kArchivePerturbation) {
        return perturb_until_new(archive[by_objective.front()].x);
    }

    std::function<double(std::span<const double>)> model;
    std::optional<RbfModel> rbf;
    if (hooks_.exact_objectives) {
        model = [&](std::span<const double> x) { return hooks_.exact_objectives(x)[objective]; };
    } else {
        std::vector<DecisionVector> unit;
        std::vector<double> y;
        for (const auto& s : archive) {
            unit.push_back(bounds.to_unit(s.x));
            y.push_back(s.f[objective]);
        }
        rbf.emplace(rbf_fit(unit, y, config_.strategy.width, config_.strategy.regularization));
        model = [&](std::span<const double> x) { return rbf->predict(bounds.to_unit(x)); };
    }

    const std::size_t np = config_.bootstrap_population;
    std::vector<DecisionVector> population;
    for (std::size_t i = 0; i < std::min(np, archive.size()); ++i) {
        population.push_back(archive[by_objective[i]].x);
    }
    if (population.size() < np) {
        for (auto& x : latin_hypercube_sample(np - population.size(), bounds, rng)) {
            population.push_back(std::move(x));
        }
    }
    std::vector<double> fitness;
    fitness.reserve(np);
    for (const auto& x : population) {
        fitness.push_back(model(x));
    }

    // DE/rand/1/bin with greedy one-to-one replacement.
    for (std::size_t gen = 0; gen < config_.bootstrap_generations; ++gen) {
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r[3];
            for (std::size_t k = 0; k < 3; ++k) {
                do {
                    r[k] = rng.index(np);
                } while (r[k] == i || (k > 0 && r[k] == r[0]) || (k > 1 && r[k] == r[1]));
            }
            auto mutant = bounds.clipped(
                rank_based_mutation(population[r[0]], population[r[1]], population[r[2]], config_.strategy.mutation_scale));
            auto trial = binomial_crossover(population[i], mutant, config_.bootstrap_crossover_rate, rng);
            const double value = model(trial);
            if (value <= fitness[i]) {
                population[i] = std::move(trial);
                fitness[i] = value;
            }
        }
    }

    std::vector<std::size_t> ranking(np);
    std::iota(ranking.begin(), ranking.end(), std::size_t{0});
    std::stable_sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    for (const std::size_t i : ranking) {
        if (!archive.contains(population[i])) {
            return population[i];
        }
    }
    return perturb_until_new(population[ranking.front()]);
}

void Optimizer::bootstrap_extremes(Rng& rng) {
    require(result_.archive.size() >= 2, "bootstrap_extremes: archive needs at least 2 samples");
    for (std::size_t k = 0; k < problem_.num_objectives() && remaining() > 0; ++k) {
        DecisionVector x;
        {
            PhaseTimer timer(result_.phase_seconds, "bootstrap");
            Rng objective_rng = rng.derive({k});
            x = extreme_candidate(k, objective_rng);
        }
        evaluate_and_record(x, Phase::kExtreme);
    }
}

void Optimizer::run_strategy(StrategyKind kind, Rng& rng) {
    InfillBatch batch;
    {
        PhaseTimer timer(result_.phase_seconds, to_string(kind));
        const Archive& archive = result_.archive;
        const BoundsBox& bounds = problem_.bounds();
        switch (kind) {
        case StrategyKind::kPrescreen:
            batch = classifier_rank_prescreen(archive, config_.strategy, bounds, rng);
            break;
        case StrategyKind::kHvSearch:
            batch = hv_nondominated_search(archive, config_.strategy, bounds, rng, hooks_);
            break;
        case StrategyKind::kLocalSearch:
            batch = sparse_local_search(archive, config_.strategy, bounds, rng, hooks_);
            break;
        }
    }
    // Candidates are committed in index order; the tail is dropped when the budget is short.
    for (std::size_t i = 0; i < batch.size() && remaining() > 0; ++i) {
        evaluate_and_record(batch.candidates[i], phase_of(kind));
    }
}

void Optimizer::iterate(Rng& rng) {
    const auto kinds = strategies_for(config_.variant);
    const std::uint64_t iteration = result_.iterations;
    for (std::size_t s = 0; s < kinds.size(); ++s) {
        if (remaining() == 0) {
            return;
        }
        Rng strategy_rng = rng.derive({iteration, s});
        run_strategy(kinds[s], strategy_rng);
    }
    ++result_.iterations;
}

RunResult Optimizer::run() {
    require(config_.initial_samples + problem_.num_objectives() <= config_.max_evaluations,
            "RunConfig: initial samples plus one extreme point per objective exceed the budget");
    const Rng root(config_.seed);
    try {
        Rng init_rng = root.derive({kInitStream});
        initialize(init_rng);
        Rng bootstrap_rng = root.derive({kBootstrapStream});
        bootstrap_extremes(bootstrap_rng);
        Rng loop_rng = root.derive({kLoopStream});
        while (remaining() > 0) {
            iterate(loop_rng);
        }
    } catch (const EvaluationError& e) {
        throw RunAborted(e.what(), result());
    }
    return result();
}

void Optimizer::adopt(const Archive& archive) {
    result_ = RunResult{};
    running_front_.clear();
    for (const auto& s : archive) {
        result_.archive.add(s);
        result_.trace.push_back({s.fe_index, Phase::kInitial, s.x, s.f, std::nullopt, std::nullopt});
    }
    for (const std::size_t i : first_front(result_.archive.objectives())) {
        running_front_.push_back(result_.archive[i].f);
    }
}

Archive bootstrap_extremes(const Archive& archive, Problem& problem, const RunConfig& config, Rng& rng,
                           const StrategyHooks& hooks) {
    RunConfig c = config;
    c.max_evaluations = std::max(c.max_evaluations, archive.size() + problem.num_objectives());
    Optimizer optimizer(problem, c, {}, hooks);
    optimizer.adopt(archive);
    optimizer.bootstrap_extremes(rng);
    return optimizer.archive();
}

Archive initialize(Problem& problem, const RunConfig& config, Rng& rng) {
    RunConfig c = config;
    c.max_evaluations = std::max(c.max_evaluations, c.resolved(problem.dim()).initial_samples);
    Optimizer optimizer(problem, c);
    optimizer.initialize(rng);
    return optimizer.archive();
}

RunResult run(Problem& problem, const RunConfig& config, const TraceIndicators& indicators,
              const StrategyHooks& hooks) {
    Optimizer optimizer(problem, config, indicators, hooks);
    return optimizer.run();
}

} // namespace clmea
