#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clmea/errors.hpp"
#include "clmea/harness.hpp"

using namespace clmea;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("clmea_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string config_text(const fs::path& out, const std::string& jobs, int runs = 2, const std::string& extra = "") {
    return R"({"n_runs": )" + std::to_string(runs) + R"(, "output_dir": ")" + out.string() + R"(", "jobs": )" + jobs +
           extra + "}";
}

const std::string kSmallJob = R"([{"id": "zdt1", "problem": {"family": "ZDT", "id": 1, "D": 6},
    "run": {"initial_samples": 20, "max_evaluations": 35, "population_size": 12, "hv_generations": 5,
            "local_generations": 3, "bootstrap_generations": 5}}])";

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_experiment_config(R"({"n_runs": 3, "base_seed": 9, "jobs": [
        {"id": "a", "problem": {"family": "DTLZ", "id": 2, "M": 3, "D": 12},
         "run": {"variant": "s3", "rbf_width": 0.5, "pnn_sigma": "mean_nearest_neighbor", "local_train_size": 50},
         "hv_reference": [2, 2, 2]}]})");
    REQUIRE(cfg.jobs.size() == 1);
    CHECK(cfg.n_runs == 3);
    CHECK(cfg.base_seed == 9);
    CHECK(cfg.jobs[0].problem.num_objectives == 3);
    CHECK(cfg.jobs[0].run.variant == Variant::kLocal);
    CHECK(cfg.jobs[0].run.strategy.width.kind == WidthPolicy::Kind::kFixed);
    CHECK(cfg.jobs[0].run.strategy.local_train_size == 50);
    CHECK_FALSE(cfg.jobs[0].run.auto_local_train_size);
    CHECK(cfg.jobs[0].hv_reference == std::vector{2.0, 2.0, 2.0});
}

TEST_CASE("config diagnostics name the line or the field") {
    auto message = [](const std::string& text) {
        try {
            parse_experiment_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("{\n\"n_runs\": 2,\n oops}").find("line 3") != std::string::npos);
    CHECK(message(R"({"n_runs": 0})").find("config.n_runs") != std::string::npos);
    CHECK(message(R"({"jobs": [{"id": "a", "problem": {"family": "ZDT", "id": 1, "D": 5}, "run": {"bogus": 1}}]})")
              .find("config.jobs[0].run.bogus") != std::string::npos);
    CHECK(message(R"({"jobs": [{"id": "a", "problem": {"family": "ZDT", "id": 9, "D": 5}}]})")
              .find("config.jobs[0].problem") != std::string::npos);
    const std::string dup = R"({"jobs": [{"id": "a", "problem": {"family": "ZDT", "id": 1, "D": 5}},
                                         {"id": "a", "problem": {"family": "ZDT", "id": 2, "D": 5}}]})";
    CHECK(message(dup).find("duplicate") != std::string::npos);
    CHECK(message(R"({"jobs": [{"id": "a", "problem": {"family": "DTLZ", "id": 2, "M": 2, "D": 5},
        "run": {"max_evaluations": 50}}]})").find("max_evaluations") != std::string::npos);
    CHECK(message(R"([1, 2])").find("object") != std::string::npos);
}

TEST_CASE("empty job list") {
    const auto out = scratch("empty");
    const auto outcome = run_experiment(parse_experiment_config(config_text(out, "[]")));
    CHECK(outcome.exit_code == 0);
    CHECK(outcome.summary.jobs.empty());
    CHECK(read_csv(out / "summary.csv").size() == 1);
}

TEST_CASE("experiment outputs are reproducible and self-contained") {
    const auto out = scratch("repro");
    const auto cfg = parse_experiment_config(config_text(out, kSmallJob));
    const auto first = run_experiment(cfg);
    CHECK(first.exit_code == 0);
    CHECK(fs::exists(out / "zdt1" / "run_0.ndjson"));
    CHECK(fs::exists(out / "zdt1" / "run_1.ndjson"));
    CHECK_FALSE(fs::exists(out / "zdt1" / "run_2.ndjson"));
    CHECK(fs::exists(out / "summary.csv"));
    const auto trace0 = slurp(out / "zdt1" / "run_0.ndjson");
    const auto summary = slurp(out / "summary.csv");

    auto parallel = cfg;
    parallel.workers = 2;
    run_experiment(parallel);
    CHECK(slurp(out / "zdt1" / "run_0.ndjson") == trace0);
    CHECK(slurp(out / "summary.csv") == summary);

    std::ostringstream recomputed;
    write_summary_csv(recomputed, summarize_directory(out));
    CHECK(recomputed.str() == summary);

    const auto trace = read_trace(out / "zdt1" / "run_0.ndjson");
    CHECK(trace.completed);
    CHECK(trace.header.seed == 1);
    CHECK(trace.entries.size() == 35);
    CHECK(archive_from_trace(trace).size() == 35);
    CHECK(read_trace(out / "zdt1" / "run_1.ndjson").header.seed == 2);

    std::ostringstream front;
    write_front_csv(front, trace);
    CHECK(front.str().rfind("x1,x2,x3,x4,x5,x6,f1,f2\n", 0) == 0);
}

TEST_CASE("convergence series are monotone") {
    const auto out = scratch("convergence");
    run_experiment(parse_experiment_config(config_text(out, kSmallJob, 1)));
    const auto rows = read_csv(out / "zdt1" / "convergence_0.csv");
    REQUIRE(rows.size() == 36);
    CHECK(rows[0] == std::vector<std::string>{"fe_index", "igd", "best_igd", "hv"});
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][2]) <= std::stod(rows[i - 1][2]));
        CHECK(std::stod(rows[i][3]) >= std::stod(rows[i - 1][3]));
    }
}

TEST_CASE("thirty-dimensional DTLZ2 convergence has one row per evaluation") {
    const auto out = scratch("dtlz2");
    const std::string job = R"([{"id": "dtlz2", "problem": {"family": "DTLZ", "id": 2, "M": 2, "D": 30},
        "run": {"max_evaluations": 300}}])";
    const auto outcome = run_experiment(parse_experiment_config(config_text(out, job, 1)));
    CHECK(outcome.exit_code == 0);
    CHECK(read_csv(out / "dtlz2" / "convergence_0.csv").size() == 301);
}

TEST_CASE("aggregate statistics") {
    JobSummary one;
    one.job = "one";
    one.problem = "ZDT1";
    one.final_igd = {0.5};
    JobSummary three;
    three.job = "three";
    three.problem = "ZDT1";
    three.final_igd = {1.0, 2.0, 3.0};
    const auto stats = aggregate_stats({one, three});
    CHECK(stats.jobs[0].igd->mean == 0.5);
    CHECK(stats.jobs[0].igd->median == 0.5);
    CHECK(stats.jobs[0].igd->std == 0.0);
    CHECK(stats.jobs[1].igd->mean == 2.0);
    CHECK(stats.jobs[1].igd->std == 1.0);
    CHECK(stats.jobs[0].best);
    CHECK_FALSE(stats.jobs[1].best);
}

TEST_CASE("comparisons pair runs by index") {
    JobSummary a;
    a.job = "a";
    JobSummary b;
    b.job = "b";
    for (int i = 0; i < 6; ++i) {
        a.final_igd.push_back(0.1 * i);
        b.final_igd.push_back(0.1 * i + 1.0);
    }
    const auto row = compare_jobs(a, b, 0.05);
    CHECK(row.indicator == "igd");
    CHECK(row.test.verdict == Verdict::kBetter);
    CHECK(row.test.p_value == 0.03125);
}

TEST_CASE("a failed run does not abort its siblings") {
    const auto out = scratch("failure");
    const std::string jobs = std::string(R"([{"id": "bad", "problem": {"family": "external", "command": [")") +
                             MOCK_EVALUATOR_PATH + R"(", "--dim", "3", "--mode", "crash", "--after", "25"],
        "M": 2, "D": 3}, "run": {"initial_samples": 20, "max_evaluations": 40}},
        {"id": "good", "problem": {"family": "external", "command": [")" +
                             MOCK_EVALUATOR_PATH + R"(", "--dim", "3"], "M": 2, "D": 3},
         "run": {"initial_samples": 20, "max_evaluations": 40}, "hv_reference": [1.1, 1.1]}])";
    const auto outcome = run_experiment(parse_experiment_config(config_text(out, jobs, 1)));
    CHECK(outcome.exit_code == 2);
    CHECK(outcome.failed_runs == 1);
    const auto bad = read_trace(out / "bad" / "run_0.ndjson");
    CHECK_FALSE(bad.completed);
    CHECK(bad.entries.size() == 25);
    CHECK(bad.error.find("26") != std::string::npos);
    const auto good = read_trace(out / "good" / "run_0.ndjson");
    CHECK(good.completed);
    CHECK(good.entries.size() == 40);
    CHECK(good.entries.back().hv.has_value());
    CHECK_FALSE(good.entries.back().igd.has_value());
}

TEST_CASE("command-line exit codes") {
    const auto out = scratch("cli");
    fs::create_directories(out);
    {
        std::ofstream(out / "broken.json") << "{\"jobs\": [";
        std::ofstream(out / "empty.json") << config_text(out / "results", "[]");
    }
    const std::string cli = CLI_PATH;
    CHECK(std::system((cli + " run " + (out / "broken.json").string() + " 2>/dev/null").c_str()) != 0);
    CHECK(std::system((cli + " run " + (out / "empty.json").string() + " >/dev/null 2>&1").c_str()) == 0);
    CHECK(std::system((cli + " stats " + (out / "results").string() + " >/dev/null").c_str()) == 0);
}
