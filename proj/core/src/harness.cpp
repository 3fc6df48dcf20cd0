#include "clmea/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "clmea/errors.hpp"
#include "clmea/indicators.hpp"
#include "clmea/kernel.hpp"

namespace clmea {
namespace {

using nlohmann::json;

/// Field-path aware accessors for the configuration schema.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

    const json& node() const { return node_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& field, const std::string& message) const {
        throw ConfigError(path_ + (field.empty() ? "" : "." + field) + ": " + message);
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    Reader child(const std::string& key) const {
        if (!node_.contains(key)) {
            fail(key, "required field missing");
        }
        return {node_.at(key), path_ + "." + key};
    }

    template <typename T>
    T get(const std::string& key) const {
        if (!node_.contains(key)) {
            fail(key, "required field missing");
        }
        return convert<T>(node_.at(key), key);
    }

    template <typename T>
    T get_or(const std::string& key, T fallback) const {
        return node_.contains(key) ? convert<T>(node_.at(key), key) : fallback;
    }

    void reject_unknown(std::initializer_list<const char*> known) const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; })) {
                fail(it.key(), "unknown field");
            }
        }
    }

private:
    template <typename T>
    T convert(const json& v, const std::string& key) const {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) {
                fail(key, "expected a string");
            }
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) {
                fail(key, "expected true or false");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                fail(key, "expected a non-negative integer");
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) {
                fail(key, "expected a number");
            }
        }
        return v.get<T>();
    }

    const json& node_;
    std::string path_;
};

std::vector<double> number_list(const Reader& r, const std::string& key, std::size_t expected) {
    const json& v = r.node().at(key);
    if (v.is_number()) {
        return std::vector<double>(expected, v.get<double>());
    }
    if (!v.is_array() || v.size() != expected) {
        r.fail(key, "expected a number or an array of " + std::to_string(expected) + " numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) {
            r.fail(key, "array entries must be numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

void parse_problem(const Reader& r, JobSpec& job) {
    const auto family = r.get<std::string>("family");
    try {
        if (family == "DTLZ" || family == "dtlz") {
            r.reject_unknown({"family", "id", "M", "D"});
            job.problem = ProblemSpec::dtlz(r.get<int>("id"), r.get<std::size_t>("M"), r.get<std::size_t>("D"));
        } else if (family == "ZDT" || family == "zdt") {
            r.reject_unknown({"family", "id", "M", "D"});
            if (r.get_or<std::size_t>("M", 2) != 2) {
                r.fail("M", "ZDT problems have two objectives");
            }
            job.problem = ProblemSpec::zdt(r.get<int>("id"), r.get<std::size_t>("D"));
        } else if (family == "external") {
            r.reject_unknown({"family", "command", "M", "D", "lower", "upper", "timeout_ms", "senses"});
            ExternalEvaluatorSpec ext;
            const json& cmd = r.child("command").node();
            if (cmd.is_string()) {
                ext.command = {cmd.get<std::string>()};
            } else if (cmd.is_array() && !cmd.empty() &&
                       std::all_of(cmd.begin(), cmd.end(), [](const json& e) { return e.is_string(); })) {
                ext.command = cmd.get<std::vector<std::string>>();
            } else {
                r.fail("command", "expected a string or a non-empty array of strings");
            }
            ext.num_objectives = r.get<std::size_t>("M");
            const auto dim = r.get<std::size_t>("D");
            if (dim == 0) {
                r.fail("D", "must be at least 1");
            }
            if (ext.num_objectives < 2) {
                r.fail("M", "must be at least 2");
            }
            const auto lo = r.has("lower") ? number_list(r, "lower", dim) : std::vector<double>(dim, 0.0);
            const auto hi = r.has("upper") ? number_list(r, "upper", dim) : std::vector<double>(dim, 1.0);
            ext.bounds = BoundsBox(lo, hi);
            ext.timeout = std::chrono::milliseconds(r.get_or<std::int64_t>("timeout_ms", 60000));
            if (r.has("senses")) {
                const json& senses = r.node().at("senses");
                if (!senses.is_array() || senses.size() != ext.num_objectives) {
                    r.fail("senses", "expected one of \"min\"/\"max\" per objective");
                }
                for (const auto& s : senses) {
                    if (s == "min") {
                        ext.senses.push_back(ObjectiveSense::kMinimize);
                    } else if (s == "max") {
                        ext.senses.push_back(ObjectiveSense::kMaximize);
                    } else {
                        r.fail("senses", "expected \"min\" or \"max\"");
                    }
                }
            }
            job.problem = ProblemSpec{ProblemFamily::kExternal, 0, ext.num_objectives, dim, ext.bounds};
            job.external = std::move(ext);
        } else {
            r.fail("family", "expected DTLZ, ZDT or external");
        }
    } catch (const ContractViolation& e) {
        r.fail("", e.what());
    }
}

void parse_run(const Reader& r, RunConfig& run) {
    r.reject_unknown({"max_evaluations", "initial_samples", "variant", "population_size", "infill_count",
                      "hv_generations", "local_generations", "mutation_scale", "first_rank_threshold",
                      "prescreen_max_loops", "local_train_size", "de_crossover_rate", "sbx_eta", "sbx_probability",
                      "mutation_eta", "mutation_probability", "rbf_width", "pnn_sigma", "regularization",
                      "reference_scale", "bootstrap", "bootstrap_population", "bootstrap_generations",
                      "bootstrap_crossover_rate"});
    auto& s = run.strategy;
    run.max_evaluations = r.get_or<std::size_t>("max_evaluations", run.max_evaluations);
    run.initial_samples = r.get_or<std::size_t>("initial_samples", run.initial_samples);
    if (r.has("variant")) {
        try {
            run.variant = parse_variant(r.get<std::string>("variant"));
        } catch (const ContractViolation& e) {
            r.fail("variant", e.what());
        }
    }
    s.population_size = r.get_or<std::size_t>("population_size", s.population_size);
    s.infill_count = r.get_or<std::size_t>("infill_count", s.infill_count);
    s.hv_generations = r.get_or<std::size_t>("hv_generations", s.hv_generations);
    s.local_generations = r.get_or<std::size_t>("local_generations", s.local_generations);
    s.mutation_scale = r.get_or<double>("mutation_scale", s.mutation_scale);
    s.first_rank_threshold = r.get_or<double>("first_rank_threshold", s.first_rank_threshold);
    s.prescreen_max_loops = r.get_or<std::size_t>("prescreen_max_loops", s.prescreen_max_loops);
    if (r.has("local_train_size")) {
        s.local_train_size = r.get<std::size_t>("local_train_size");
        run.auto_local_train_size = false;
    }
    s.de_crossover_rate = r.get_or<double>("de_crossover_rate", s.de_crossover_rate);
    s.sbx.eta = r.get_or<double>("sbx_eta", s.sbx.eta);
    s.sbx.probability = r.get_or<double>("sbx_probability", s.sbx.probability);
    s.mutation.eta = r.get_or<double>("mutation_eta", s.mutation.eta);
    s.mutation.probability = r.get_or<double>("mutation_probability", s.mutation.probability);
    if (r.has("rbf_width")) {
        const json& w = r.node().at("rbf_width");
        if (w == "median") {
            s.width = WidthPolicy::median();
        } else if (w.is_number() && w.get<double>() > 0.0) {
            s.width = WidthPolicy::fixed(w.get<double>());
        } else {
            r.fail("rbf_width", "expected \"median\" or a positive number");
        }
    }
    if (r.has("pnn_sigma")) {
        const json& v = r.node().at("pnn_sigma");
        if (v == "mean_nearest_neighbor") {
            s.sigma = SigmaPolicy::mean_nearest_neighbor();
        } else if (v.is_number() && v.get<double>() > 0.0) {
            s.sigma = SigmaPolicy::fixed(v.get<double>());
        } else {
            r.fail("pnn_sigma", "expected \"mean_nearest_neighbor\" or a positive number");
        }
    }
    s.regularization = r.get_or<double>("regularization", s.regularization);
    s.reference_scale = r.get_or<double>("reference_scale", s.reference_scale);
    if (r.has("bootstrap")) {
        const auto mode = r.get<std::string>("bootstrap");
        if (mode == "surrogate") {
            run.bootstrap = BootstrapMode::kSurrogateSearch;
        } else if (mode == "archive") {
            run.bootstrap = BootstrapMode::kArchivePerturbation;
        } else {
            r.fail("bootstrap", "expected \"surrogate\" or \"archive\"");
        }
    }
    run.bootstrap_population = r.get_or<std::size_t>("bootstrap_population", run.bootstrap_population);
    run.bootstrap_generations = r.get_or<std::size_t>("bootstrap_generations", run.bootstrap_generations);
    run.bootstrap_crossover_rate = r.get_or<double>("bootstrap_crossover_rate", run.bootstrap_crossover_rate);
    try {
        s.validate();
    } catch (const ContractViolation& e) {
        r.fail("", e.what());
    }
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_exact(*v) : std::string();
}

std::string problem_label(const JobSpec& job) {
    return job.external ? std::string("external") : job.problem.name();
}

std::size_t default_front_size(std::size_t m) { return m == 2 ? 1000 : 990; }

std::filesystem::path trace_path(const std::filesystem::path& dir, std::size_t run) {
    return dir / ("run_" + std::to_string(run) + ".ndjson");
}

void write_convergence(const std::filesystem::path& path, const std::vector<TraceEntry>& entries) {
    std::ofstream out(path);
    out << "fe_index,igd,best_igd,hv\n";
    std::optional<double> best;
    for (const auto& e : entries) {
        if (e.igd) {
            best = best ? std::min(*best, *e.igd) : *e.igd;
        }
        out << e.fe_index << ',' << format_optional(e.igd) << ',' << format_optional(best) << ','
            << format_optional(e.hv) << '\n';
    }
}

json entry_to_json(const TraceEntry& e) {
    json j = {{"type", "fe"}, {"fe", e.fe_index}, {"phase", std::string(to_string(e.phase))}, {"x", e.x}, {"f", e.f}};
    j["igd"] = e.igd ? json(*e.igd) : json(nullptr);
    j["hv"] = e.hv ? json(*e.hv) : json(nullptr);
    return j;
}

struct Task {
    std::size_t job;
    std::size_t run;
};

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    const Reader root(doc, "config");
    root.reject_unknown({"jobs", "n_runs", "base_seed", "output_dir", "reference_front_size", "alpha", "comparisons",
                         "workers"});
    ExperimentConfig config;
    config.n_runs = root.get_or<std::size_t>("n_runs", config.n_runs);
    if (config.n_runs == 0) {
        root.fail("n_runs", "must be at least 1");
    }
    config.base_seed = root.get_or<std::uint64_t>("base_seed", config.base_seed);
    config.output_dir = root.get_or<std::string>("output_dir", config.output_dir.string());
    config.reference_front_size = root.get_or<std::size_t>("reference_front_size", 0);
    config.alpha = root.get_or<double>("alpha", config.alpha);
    config.workers = std::max<std::size_t>(1, root.get_or<std::size_t>("workers", 1));

    if (root.has("jobs")) {
        const json& jobs = doc.at("jobs");
        if (!jobs.is_array()) {
            root.fail("jobs", "expected an array");
        }
        std::set<std::string> ids;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const Reader r(jobs[i], "config.jobs[" + std::to_string(i) + "]");
            if (!jobs[i].is_object()) {
                r.fail("", "expected an object");
            }
            r.reject_unknown({"id", "problem", "run", "hv_reference"});
            JobSpec job;
            job.id = r.get<std::string>("id");
            if (job.id.empty() || job.id.find_first_of("/\\") != std::string::npos || job.id == "." || job.id == "..") {
                r.fail("id", "must be a non-empty name without path separators");
            }
            if (!ids.insert(job.id).second) {
                r.fail("id", "duplicate job id '" + job.id + "'");
            }
            parse_problem(r.child("problem"), job);
            if (r.has("run")) {
                parse_run(r.child("run"), job.run);
            }
            if (r.has("hv_reference")) {
                job.hv_reference = number_list(r, "hv_reference", job.problem.num_objectives);
            }
            const auto resolved = job.run.resolved(job.problem.dim);
            if (resolved.initial_samples + job.problem.num_objectives > resolved.max_evaluations) {
                r.fail("run", "initial_samples + M exceeds max_evaluations");
            }
            config.jobs.push_back(std::move(job));
        }
    }
    if (root.has("comparisons")) {
        const json& cmp = doc.at("comparisons");
        if (!cmp.is_array()) {
            root.fail("comparisons", "expected an array of [job, job] pairs");
        }
        std::set<std::string> ids;
        for (const auto& j : config.jobs) {
            ids.insert(j.id);
        }
        for (std::size_t i = 0; i < cmp.size(); ++i) {
            const auto& pair = cmp[i];
            const std::string where = "comparisons[" + std::to_string(i) + "]";
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
                root.fail(where, "expected [job, job]");
            }
            const auto a = pair[0].get<std::string>();
            const auto b = pair[1].get<std::string>();
            if (!ids.contains(a) || !ids.contains(b)) {
                root.fail(where, "unknown job id");
            }
            config.comparisons.emplace_back(a, b);
        }
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

void write_trace(std::ostream& out, const TraceHeader& header, const std::vector<TraceEntry>& entries,
                 bool completed, const std::string& error, std::size_t iterations) {
    const json head = {{"type", "run"},
                       {"job", header.job},
                       {"problem", header.problem},
                       {"M", header.num_objectives},
                       {"D", header.dim},
                       {"variant", header.variant},
                       {"seed", header.seed},
                       {"run", header.run_index},
                       {"max_evaluations", header.max_evaluations}};
    out << head.dump() << '\n';
    for (const auto& e : entries) {
        out << entry_to_json(e).dump() << '\n';
    }
    json end = {{"type", "end"}, {"status", completed ? "ok" : "failed"}, {"iterations", iterations}};
    if (!completed) {
        end["error"] = error;
    }
    out << end.dump() << '\n';
}

TraceFile read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read trace " + path.string());
    }
    TraceFile trace;
    bool saw_header = false;
    std::string line;
    std::size_t line_no = 0;
    try {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) {
                continue;
            }
            const json j = json::parse(line);
            const auto type = j.at("type").get<std::string>();
            if (type == "run") {
                trace.header.job = j.at("job").get<std::string>();
                trace.header.problem = j.at("problem").get<std::string>();
                trace.header.num_objectives = j.at("M").get<std::size_t>();
                trace.header.dim = j.at("D").get<std::size_t>();
                trace.header.variant = j.at("variant").get<std::string>();
                trace.header.seed = j.at("seed").get<std::uint64_t>();
                trace.header.run_index = j.at("run").get<std::size_t>();
                trace.header.max_evaluations = j.at("max_evaluations").get<std::size_t>();
                saw_header = true;
            } else if (type == "fe") {
                TraceEntry e;
                e.fe_index = j.at("fe").get<std::int64_t>();
                e.phase = parse_phase(j.at("phase").get<std::string>());
                e.x = j.at("x").get<std::vector<double>>();
                e.f = j.at("f").get<std::vector<double>>();
                if (!j.at("igd").is_null()) {
                    e.igd = j.at("igd").get<double>();
                }
                if (!j.at("hv").is_null()) {
                    e.hv = j.at("hv").get<double>();
                }
                trace.entries.push_back(std::move(e));
            } else if (type == "end") {
                trace.completed = j.at("status") == "ok";
                trace.iterations = j.at("iterations").get<std::size_t>();
                if (j.contains("error")) {
                    trace.error = j.at("error").get<std::string>();
                }
            }
        }
    } catch (const std::exception& e) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": malformed trace record: " + e.what());
    }
    if (!saw_header) {
        throw ConfigError(path.string() + ": missing run header");
    }
    return trace;
}

Archive archive_from_trace(const TraceFile& trace) {
    Archive archive;
    for (const auto& e : trace.entries) {
        archive.add({e.x, e.f, e.fe_index});
    }
    return archive;
}

std::vector<double> describe_values(const std::vector<std::optional<double>>& values) {
    std::vector<double> out;
    for (const auto& v : values) {
        if (v) {
            out.push_back(*v);
        }
    }
    return out;
}

StatsSummary aggregate_stats(std::vector<JobSummary> jobs) {
    for (auto& job : jobs) {
        const auto igd_values = describe_values(job.final_igd);
        const auto hv_values = describe_values(job.final_hv);
        job.igd = igd_values.empty() ? std::nullopt : std::optional<Descriptive>(describe(igd_values));
        job.hv = hv_values.empty() ? std::nullopt : std::optional<Descriptive>(describe(hv_values));
        job.best = false;
    }
    std::map<std::tuple<std::string, std::size_t, std::size_t>, std::size_t> best;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& job = jobs[i];
        if (!job.igd && !job.hv) {
            continue;
        }
        const auto key = std::make_tuple(job.problem, job.num_objectives, job.dim);
        const auto it = best.find(key);
        if (it == best.end()) {
            best[key] = i;
            continue;
        }
        const auto& incumbent = jobs[it->second];
        bool better = false;
        if (job.igd && incumbent.igd) {
            better = job.igd->mean < incumbent.igd->mean;
        } else if (job.hv && incumbent.hv) {
            better = job.hv->mean > incumbent.hv->mean;
        }
        if (better) {
            it->second = i;
        }
    }
    for (const auto& [key, index] : best) {
        jobs[index].best = true;
    }
    return {std::move(jobs), {}};
}

StatsSummary summarize_directory(const std::filesystem::path& output_dir) {
    std::vector<std::filesystem::path> job_dirs;
    if (std::filesystem::exists(output_dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(output_dir)) {
            if (entry.is_directory()) {
                job_dirs.push_back(entry.path());
            }
        }
    }
    std::sort(job_dirs.begin(), job_dirs.end());

    std::vector<JobSummary> jobs;
    for (const auto& dir : job_dirs) {
        std::map<std::size_t, TraceFile> traces;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const auto name = entry.path().filename().string();
            if (entry.is_regular_file() && name.starts_with("run_") && entry.path().extension() == ".ndjson") {
                auto trace = read_trace(entry.path());
                const std::size_t run_index = trace.header.run_index;
                traces.emplace(run_index, std::move(trace));
            }
        }
        if (traces.empty()) {
            continue;
        }
        JobSummary job;
        const auto& first = traces.begin()->second.header;
        job.job = first.job;
        job.problem = first.problem;
        job.num_objectives = first.num_objectives;
        job.dim = first.dim;
        job.variant = first.variant;
        const std::size_t slots = traces.rbegin()->first + 1;
        job.final_igd.assign(slots, std::nullopt);
        job.final_hv.assign(slots, std::nullopt);
        for (const auto& [index, trace] : traces) {
            ++job.runs;
            if (!trace.completed) {
                ++job.failed;
                continue;
            }
            if (!trace.entries.empty()) {
                job.final_igd[index] = trace.entries.back().igd;
                job.final_hv[index] = trace.entries.back().hv;
            }
        }
        jobs.push_back(std::move(job));
    }
    return aggregate_stats(std::move(jobs));
}

void write_summary_csv(std::ostream& out, const StatsSummary& summary) {
    out << "job,problem,M,D,variant,runs,failed,igd_mean,igd_median,igd_std,hv_mean,hv_median,hv_std,best\n";
    for (const auto& j : summary.jobs) {
        auto field = [](const std::optional<Descriptive>& d, double Descriptive::*member) {
            return d ? format_exact((*d).*member) : std::string();
        };
        out << j.job << ',' << j.problem << ',' << j.num_objectives << ',' << j.dim << ',' << j.variant << ','
            << j.runs << ',' << j.failed << ',' << field(j.igd, &Descriptive::mean) << ','
            << field(j.igd, &Descriptive::median) << ',' << field(j.igd, &Descriptive::std) << ','
            << field(j.hv, &Descriptive::mean) << ',' << field(j.hv, &Descriptive::median) << ','
            << field(j.hv, &Descriptive::std) << ',' << (j.best ? 1 : 0) << '\n';
    }
}

void write_comparisons_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "first,second,indicator,n,w_plus,p_value,exact,verdict\n";
    for (const auto& r : rows) {
        out << r.first << ',' << r.second << ',' << r.indicator << ',' << r.test.n << ','
            << format_exact(r.test.w_plus) << ',' << format_exact(r.test.p_value) << ',' << (r.test.exact ? 1 : 0)
            << ',' << to_symbol(r.test.verdict) << '\n';
    }
}

ComparisonRow compare_jobs(const JobSummary& first, const JobSummary& second, double alpha) {
    ComparisonRow row{first.job, second.job, "igd", {}};
    const bool use_igd = !describe_values(first.final_igd).empty() && !describe_values(second.final_igd).empty();
    row.indicator = use_igd ? "igd" : "hv";
    std::vector<double> a;
    std::vector<double> b;
    const std::size_t n = std::min(first.final_igd.size(), second.final_igd.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = use_igd ? first.final_igd[i] : first.final_hv[i];
        const auto& y = use_igd ? second.final_igd[i] : second.final_hv[i];
        if (x && y) {
            // HV is maximized; negate so that lower is better for both indicators.
            a.push_back(use_igd ? *x : -*x);
            b.push_back(use_igd ? *y : -*y);
        }
    }
    row.test = wilcoxon_signed_rank(a, b, alpha);
    return row;
}

void write_front_csv(std::ostream& out, const TraceFile& trace) {
    const Archive archive = archive_from_trace(trace);
    if (archive.empty()) {
        return;
    }
    const std::size_t d = archive[0].x.size();
    const std::size_t m = archive[0].f.size();
    for (std::size_t i = 0; i < d; ++i) {
        out << 'x' << (i + 1) << ',';
    }
    for (std::size_t k = 0; k < m; ++k) {
        out << 'f' << (k + 1) << (k + 1 < m ? "," : "\n");
    }
    for (const std::size_t i : first_front(archive.objectives())) {
        for (const double v : archive[i].x) {
            out << format_exact(v) << ',';
        }
        for (std::size_t k = 0; k < m; ++k) {
            out << format_exact(archive[i].f[k]) << (k + 1 < m ? "," : "\n");
        }
    }
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream* log) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);

    // Reference fronts and HV reference points are shared by all runs of a job.
    std::vector<TraceIndicators> indicators(config.jobs.size());
    for (std::size_t j = 0; j < config.jobs.size(); ++j) {
        const auto& job = config.jobs[j];
        if (!job.external) {
            const std::size_t count = config.reference_front_size > 0 ? config.reference_front_size
                                                                      : default_front_size(job.problem.num_objectives);
            indicators[j].reference_front = pareto_front_reference(job.problem, count);
        }
        if (!job.hv_reference.empty()) {
            indicators[j].hv_reference = job.hv_reference;
        } else if (!indicators[j].reference_front.empty()) {
            indicators[j].hv_reference = adaptive_reference_point(indicators[j].reference_front, 1.1);
        }
        if (indicators[j].hv_reference.size() > 3) {
            indicators[j].hv_reference.clear();
        }
        fs::create_directories(config.output_dir / job.id);
    }

    std::vector<Task> tasks;
    for (std::size_t j = 0; j < config.jobs.size(); ++j) {
        for (std::size_t r = 0; r < config.n_runs; ++r) {
            tasks.push_back({j, r});
        }
    }
    std::vector<std::map<std::string, double>> timings(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failed{0};
    std::mutex log_mutex;

    auto worker = [&]() {
        for (std::size_t t = next++; t < tasks.size(); t = next++) {
            const auto& job = config.jobs[tasks[t].job];
            const std::size_t run_index = tasks[t].run;
            RunConfig run_config = job.run;
            run_config.seed = config.base_seed + run_index;
            const fs::path dir = config.output_dir / job.id;

            TraceHeader header{job.id,          problem_label(job), job.problem.num_objectives,
                               job.problem.dim, std::string(to_string(job.run.variant)),
                               run_config.seed, run_index,          job.run.max_evaluations};
            RunResult result;
            bool completed = true;
            std::string error;
            try {
                std::unique_ptr<Problem> problem;
                if (job.external) {
                    problem = std::make_unique<ExternalProblem>(*job.external);
                } else {
                    problem = std::make_unique<BenchmarkProblem>(job.problem);
                }
                result = run(*problem, run_config, indicators[tasks[t].job]);
            } catch (const RunAborted& e) {
                completed = false;
                error = e.what();
                result = e.partial();
            } catch (const std::exception& e) {
                completed = false;
                error = e.what();
            }
            if (!completed) {
                ++failed;
            }
            {
                std::ofstream out(trace_path(dir, run_index));
                write_trace(out, header, result.trace, completed, error, result.iterations);
            }
            write_convergence(dir / ("convergence_" + std::to_string(run_index) + ".csv"), result.trace);
            timings[t] = result.phase_seconds;
            if (log != nullptr) {
                const std::lock_guard lock(log_mutex);
                *log << job.id << " run " << run_index << (completed ? " ok" : " FAILED: " + error);
                if (completed && !result.trace.empty() && result.trace.back().igd) {
                    *log << " igd=" << *result.trace.back().igd;
                }
                *log << '\n';
            }
        }
    };
    const std::size_t workers = std::min(std::max<std::size_t>(1, config.workers), std::max<std::size_t>(1, tasks.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    for (std::size_t j = 0; j < config.jobs.size(); ++j) {
        std::ofstream out(config.output_dir / config.jobs[j].id / "timings.csv");
        out << "run,phase,seconds\n";
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            if (tasks[t].job != j) {
                continue;
            }
            for (const auto& [phase, seconds] : timings[t]) {
                out << tasks[t].run << ',' << phase << ',' << seconds << '\n';
            }
        }
    }

    ExperimentOutcome outcome;
    outcome.summary = summarize_directory(config.output_dir);
    {
        std::ofstream out(config.output_dir / "summary.csv");
        write_summary_csv(out, outcome.summary);
    }
    if (!config.comparisons.empty()) {
        for (const auto& [a, b] : config.comparisons) {
            const auto find = [&](const std::string& id) -> const JobSummary* {
                for (const auto& s : outcome.summary.jobs) {
                    if (s.job == id) {
                        return &s;
                    }
                }
                return nullptr;
            };
            const JobSummary* first = find(a);
            const JobSummary* second = find(b);
            if (first != nullptr && second != nullptr) {
                outcome.summary.comparisons.push_back(compare_jobs(*first, *second, config.alpha));
            }
        }
        std::ofstream out(config.output_dir / "comparisons.csv");
        write_comparisons_csv(out, outcome.summary.comparisons);
    }
    outcome.failed_runs = failed;
    outcome.exit_code = failed > 0 ? 2 : 0;
    return outcome;
}

} // namespace clmea
