#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <tuple>

#include <CLI11.hpp>

#include "clmea/errors.hpp"
#include "clmea/harness.hpp"

namespace {

using clmea::JobSummary;

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed, const std::optional<std::size_t>& runs,
            const std::optional<std::size_t>& jobs, const std::optional<std::string>& out) {
    clmea::ExperimentConfig config;
    try {
        config = clmea::load_experiment_config(path);
    } catch (const clmea::ConfigError& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 1;
    }
    if (seed) {
        config.base_seed = *seed;
    }
    if (runs) {
        if (*runs == 0) {
            std::cerr << "--runs must be at least 1\n";
            return 1;
        }
        config.n_runs = *runs;
    }
    if (jobs) {
        config.workers = std::max<std::size_t>(1, *jobs);
    }
    if (out) {
        config.output_dir = *out;
    }
    const auto outcome = clmea::run_experiment(config, &std::cerr);
    clmea::write_summary_csv(std::cout, outcome.summary);
    if (outcome.failed_runs > 0) {
        std::cerr << outcome.failed_runs << " run(s) failed\n";
    }
    return outcome.exit_code;
}

int cmd_stats(const std::string& dir) {
    const auto summary = clmea::summarize_directory(dir);
    clmea::write_summary_csv(std::cout, summary);
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b, double alpha) {
    const auto first = clmea::summarize_directory(a);
    const auto second = clmea::summarize_directory(b);
    using Key = std::tuple<std::string, std::size_t, std::size_t>;
    std::map<Key, const JobSummary*> others;
    for (const auto& job : second.jobs) {
        others.emplace(Key{job.problem, job.num_objectives, job.dim}, &job);
    }
    std::vector<clmea::ComparisonRow> rows;
    for (const auto& job : first.jobs) {
        const auto it = others.find(Key{job.problem, job.num_objectives, job.dim});
        if (it != others.end()) {
            rows.push_back(clmea::compare_jobs(job, *it->second, alpha));
        }
    }
    clmea::write_comparisons_csv(std::cout, rows);
    std::map<clmea::Verdict, std::size_t> counts;
    for (const auto& row : rows) {
        ++counts[row.test.verdict];
    }
    std::cerr << "+ " << counts[clmea::Verdict::kBetter] << "  - " << counts[clmea::Verdict::kWorse] << "  "
              << clmea::to_symbol(clmea::Verdict::kComparable) << ' ' << counts[clmea::Verdict::kComparable] << '\n';
    return 0;
}

int cmd_front(const std::string& trace_path, const std::string& out) {
    const auto trace = clmea::read_trace(trace_path);
    if (out == "-") {
        clmea::write_front_csv(std::cout, trace);
        return 0;
    }
    std::ofstream file(out);
    if (!file) {
        std::cerr << "cannot write " << out << '\n';
        return 1;
    }
    clmea::write_front_csv(file, trace);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"surrogate-assisted multi-objective optimizer"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute an experiment config");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> jobs;
    std::optional<std::string> out_dir;
    run->add_option("config", config_path, "JSON experiment file")->required();
    run->add_option("--seed", seed, "base seed");
    run->add_option("--runs", runs, "runs per job");
    run->add_option("--jobs", jobs, "concurrent runs");
    run->add_option("--out", out_dir, "output directory");

    auto* stats = app.add_subcommand("stats", "recompute the summary from traces");
    std::string stats_dir;
    stats->add_option("dir", stats_dir, "experiment output directory")->required();

    auto* compare = app.add_subcommand("compare", "Wilcoxon tests between two output directories");
    std::string dir_a;
    std::string dir_b;
    double alpha = 0.05;
    compare->add_option("dirA", dir_a)->required();
    compare->add_option("dirB", dir_b)->required();
    compare->add_option("--alpha", alpha, "significance level")->check(CLI::Range(0.0, 1.0));

    auto* front = app.add_subcommand("front", "export the final non-dominated set of a trace");
    std::string trace_path;
    std::string front_out = "-";
    front->add_option("trace", trace_path)->required();
    front->add_option("--out", front_out, "CSV file, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            return cmd_run(config_path, seed, runs, jobs, out_dir);
        }
        if (*stats) {
            return cmd_stats(stats_dir);
        }
        if (*compare) {
            return cmd_compare(dir_a, dir_b, alpha);
        }
        return cmd_front(trace_path, front_out);
    } catch (const clmea::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
