#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clmea/external.hpp"
#include "clmea/optimizer.hpp"
#include "clmea/problems.hpp"
#include "clmea/stats.hpp"

namespace clmea {

/// One (problem, configuration) pair of an experiment.
struct JobSpec {
    std::string id;
    ProblemSpec problem;
    std::optional<ExternalEvaluatorSpec> external;  ///< set for external problems
    RunConfig run;
    ObjectiveVector hv_reference;  ///< empty: derived from the reference front when one exists
};

struct ExperimentConfig {
    std::vector<JobSpec> jobs;
    std::size_t n_runs = 20;
    std::uint64_t base_seed = 1;
    std::filesystem::path output_dir = "results";
    std::size_t reference_front_size = 0;  ///< 0 selects 1000 for M = 2 and 990 for M = 3
    double alpha = 0.05;
    std::vector<std::pair<std::string, std::string>> comparisons;
    std::size_t workers = 1;
};

/// Parses the JSON experiment description. Throws ConfigError naming the line
/// (syntax errors) or the offending field path (schema errors).
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Per-job indicator statistics recomputed from trace files.
struct JobSummary {
    std::string job;
    std::string problem;
    std::size_t num_objectives = 0;
    std::size_t dim = 0;
    std::string variant;
    std::size_t runs = 0;
    std::size_t failed = 0;
    std::optional<Descriptive> igd;
    std::optional<Descriptive> hv;
    bool best = false;
    std::vector<std::optional<double>> final_igd;  ///< indexed by run
    std::vector<std::optional<double>> final_hv;
};

struct ComparisonRow {
    std::string first;
    std::string second;
    std::string indicator;  ///< "igd" or "hv"
    WilcoxonResult test;
};

struct StatsSummary {
    std::vector<JobSummary> jobs;
    std::vector<ComparisonRow> comparisons;
};

struct ExperimentOutcome {
    StatsSummary summary;
    std::size_t failed_runs = 0;
    int exit_code = 0;  ///< 0 success, 2 when any run failed
};

/// Executes every (job, run) pair with seed base_seed + run and writes
///   <out>/<job>/run_<k>.ndjson        trace records
///   <out>/<job>/convergence_<k>.csv   fe_index, igd, best_igd, hv
///   <out>/<job>/timings.csv           wall-clock seconds per phase
///   <out>/summary.csv                 recomputed from the traces
///   <out>/comparisons.csv             only when comparisons are configured
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Trace serialization: one JSON object per line; a "run" header, one "fe"
/// record per evaluation and an "end" record.
struct TraceHeader {
    std::string job;
    std::string problem;
    std::size_t num_objectives = 0;
    std::size_t dim = 0;
    std::string variant;
    std::uint64_t seed = 0;
    std::size_t run_index = 0;
    std::size_t max_evaluations = 0;
};

struct TraceFile {
    TraceHeader header;
    std::vector<TraceEntry> entries;
    bool completed = false;
    std::string error;
    std::size_t iterations = 0;
};

void write_trace(std::ostream& out, const TraceHeader& header, const std::vector<TraceEntry>& entries,
                 bool completed, const std::string& error, std::size_t iterations);
TraceFile read_trace(const std::filesystem::path& path);

/// Archive reconstructed from the trace records.
Archive archive_from_trace(const TraceFile& trace);

/// Recomputes job summaries from every trace below `output_dir`.
StatsSummary summarize_directory(const std::filesystem::path& output_dir);

std::vector<double> describe_values(const std::vector<std::optional<double>>& values);

/// Best job per (problem, M, D) gets the flag: lowest mean IGD, else highest mean HV.
StatsSummary aggregate_stats(std::vector<JobSummary> jobs);

void write_summary_csv(std::ostream& out, const StatsSummary& summary);
void write_comparisons_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Pairs runs by index and tests the final IGD (HV when IGD is absent).
ComparisonRow compare_jobs(const JobSummary& first, const JobSummary& second, double alpha);

/// Final non-dominated set of a trace as CSV: x_1..x_D, f_1..f_M.
void write_front_csv(std::ostream& out, const TraceFile& trace);

} // namespace clmea
