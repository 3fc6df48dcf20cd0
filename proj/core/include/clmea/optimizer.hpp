#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clmea/problems.hpp"
#include "clmea/random.hpp"
#include "clmea/strategies.hpp"
#include "clmea/types.hpp"

namespace clmea {

/// Which infill strategies the main loop runs.
enum class Variant {
    kFull,      ///< pre-screening, HV search, local search in turn
    kPrescreen, ///< s1
    kHvSearch,  ///< s2
    kLocal,     ///< s3
};

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

/// How the per-objective extreme points are found after initialization.
enum class BootstrapMode {
    kSurrogateSearch,     ///< DE on an RBF model of the objective
    kArchivePerturbation, ///< polynomial mutation of the archive's best point
};

struct RunConfig {
    std::size_t initial_samples = 0;  ///< 0 selects 100 for D < 100 and 200 otherwise
    std::size_t max_evaluations = 300;
    StrategyParams strategy{};
    bool auto_local_train_size = true;  ///< 100 for D < 100, 200 otherwise
    Variant variant = Variant::kFull;
    std::uint64_t seed = 0;

    BootstrapMode bootstrap = BootstrapMode::kSurrogateSearch;
    std::size_t bootstrap_population = 50;
    std::size_t bootstrap_generations = 50;
    double bootstrap_crossover_rate = 0.9;

    /// Copy with every automatic field resolved for a problem of dimension `dim`.
    RunConfig resolved(std::size_t dim) const;
};

enum class Phase { kInitial, kExtreme, kPrescreen, kHvSearch, kLocalSearch };

std::string_view to_string(Phase phase);
Phase parse_phase(std::string_view text);

struct TraceEntry {
    std::int64_t fe_index = 0;
    Phase phase = Phase::kInitial;
    DecisionVector x;
    ObjectiveVector f;
    std::optional<double> igd;
    std::optional<double> hv;
};

/// Indicators recorded after every evaluation when supplied.
struct TraceIndicators {
    std::vector<ObjectiveVector> reference_front;  ///< empty disables IGD
    ObjectiveVector hv_reference;                  ///< empty disables HV
};

struct RunResult {
    Archive archive;
    std::vector<std::size_t> front;  ///< archive indices of the final non-dominated set
    std::vector<TraceEntry> trace;
    std::size_t iterations = 0;      ///< completed passes of the strategy loop
    std::map<std::string, double> phase_seconds;
};

/// Thrown when an evaluation fails mid-run; carries everything recorded so far.
class RunAborted : public std::runtime_error {
public:
    RunAborted(const std::string& what, RunResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const RunResult& partial() const noexcept { return partial_; }

private:
    RunResult partial_;
};

/// One optimization run. Owns the archive, the trace and the FE counter.
class Optimizer {
public:
    Optimizer(Problem& problem, RunConfig config, TraceIndicators indicators = {}, StrategyHooks hooks = {});

    /// LHS design of initial_samples points, all truly evaluated.
    void initialize(Rng& rng);

    /// One surrogate-located extreme point per objective, each truly evaluated.
    void bootstrap_extremes(Rng& rng);

    /// One pass of the strategy loop; stops early when the budget runs out.
    void iterate(Rng& rng);

    RunResult run();

    /// Replaces the archive with previously evaluated samples (recorded as
    /// initial-design entries in the trace).
    void adopt(const Archive& archive);

    const Archive& archive() const noexcept { return result_.archive; }
    std::size_t evaluations() const noexcept { return result_.archive.size(); }
    std::size_t remaining() const noexcept;
    const RunConfig& config() const noexcept { return config_; }
    RunResult result() const;

private:
    void evaluate_and_record(const DecisionVector& x, Phase phase);
    void run_strategy(StrategyKind kind, Rng& rng);
    DecisionVector extreme_candidate(std::size_t objective, Rng& rng);

    Problem& problem_;
    RunConfig config_;
    TraceIndicators indicators_;
    StrategyHooks hooks_;
    RunResult result_;
    std::vector<ObjectiveVector> running_front_;
};

Archive initialize(Problem& problem, const RunConfig& config, Rng& rng);
Archive bootstrap_extremes(const Archive& archive, Problem& problem, const RunConfig& config, Rng& rng,
                           const StrategyHooks& hooks = {});
RunResult run(Problem& problem, const RunConfig& config, const TraceIndicators& indicators = {},
              const StrategyHooks& hooks = {});

} // namespace clmea
