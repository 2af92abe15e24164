#include "perfset/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "perfset/config.hpp"
#include "perfset/curate.hpp"
#include "perfset/error.hpp"
#include "perfset/exec.hpp"
#include "perfset/ingest.hpp"
#include "perfset/metrics.hpp"
#include "perfset/pipeline.hpp"
#include "perfset/provider.hpp"
#include "perfset/record.hpp"
#include "perfset/report.hpp"
#include "perfset/testkit.hpp"
#include "perfset/util.hpp"

namespace perfset::cli {

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    Config config;

    void load() {
        if (!config_path.empty()) config = Config::load(config_path);
    }
};

std::map<std::string, std::string> parse_schema_map(const std::vector<std::string>& entries) {
    std::map<std::string, std::string> schema;
    for (const auto& entry : entries) {
        for (const auto& part : util::split(entry, ',')) {
            if (util::trim(part).empty()) continue;
            auto eq = part.find('=');
            if (eq == std::string::npos) {
                throw input_error("bad_argument",
                                  "--map entries must be canonical=source, got: " + part);
            }
            schema[util::trim(part.substr(0, eq))] = util::trim(part.substr(eq + 1));
        }
    }
    return schema;
}

exec::ResourceLimits limits_from(const Config& config) {
    exec::ResourceLimits limits;
    limits.wall_timeout_s = config.get_double("exec", "wall_timeout_s", 30.0);
    limits.memory_cap_mb = config.get_double("exec", "memory_cap_mb", 4096.0);
    limits.mem_sample_interval_ms = config.get_double("exec", "mem_sample_interval_ms", 10.0);
    limits.deny_network = config.get_bool("exec", "deny_network", true);
    return limits;
}

std::vector<int> parse_core_list(const std::string& text) {
    std::vector<int> cores;
    for (const auto& part : util::split(text, ',')) {
        if (util::trim(part).empty()) continue;
        cores.push_back(std::stoi(util::trim(part)));
    }
    return cores;
}

std::string load_template_or_default(const std::string& path, const std::string& fallback) {
    if (path.empty()) return fallback;
    return util::read_file(path);
}

void write_text_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        util::write_file(out_path, text);
    }
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string in_path, out_path, source_dataset, eval_set_path;
    std::vector<std::string> map_entries;
    bool no_filter = false;
    bool no_dedup = false;
};

int cmd_ingest(const CommonArgs& common, const IngestArgs& args) {
    auto schema = parse_schema_map(args.map_entries);
    ingest::LoadReport load_report;
    auto tasks = ingest::load_tasks(args.in_path, args.source_dataset, schema, &load_report);
    std::cout << "loaded: " << load_report.to_string() << "\n";

    if (!args.no_filter) {
        ingest::FilterRuleSet rules;
        const Config& c = common.config;
        rules.max_solution_bytes =
            static_cast<std::size_t>(c.get_int("filter", "max_solution_bytes", 65536));
        rules.min_solution_lines = c.get_int("filter", "min_solution_lines", 3);
        rules.require_parseable = c.get_bool("filter", "require_parseable", true);
        if (c.has("filter", "banned_substrings")) {
            rules.banned_substrings.clear();
            for (const auto& s : util::split(c.get("filter", "banned_substrings", ""), ',')) {
                if (!s.empty()) rules.banned_substrings.push_back(s);
            }
        }
        rules.require_tests_or_augmentable =
            c.get_bool("filter", "require_tests_or_augmentable", true);

        auto outcome = ingest::filter_tasks(tasks, rules);
        std::map<std::string, std::size_t> reasons;
        for (const auto& r : outcome.rejected) ++reasons[r.reason];
        std::cout << "filtered: kept=" << outcome.kept.size();
        for (const auto& [reason, count] : reasons) std::cout << " " << reason << "=" << count;
        std::cout << "\n";
        tasks = std::move(outcome.kept);
    }

    if (!args.no_dedup) {
        std::vector<Task> eval_set;
        const std::size_t before = tasks.size();
        if (!args.eval_set_path.empty()) {
            eval_set = read_tasks(args.eval_set_path);
            tasks = ingest::dedup_tasks(tasks, &eval_set);
        } else {
            tasks = ingest::dedup_tasks(tasks);
        }
        std::cout << "deduplicated: kept=" << tasks.size() << " removed=" << before - tasks.size()
                  << "\n";
    }

    write_tasks(args.out_path, tasks);
    std::cout << "wrote " << tasks.size() << " tasks to " << args.out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// augment-tests
// ---------------------------------------------------------------------------

struct AugmentArgs {
    std::string in_path, out_path, provider_name, template_path;
    int n_tests = 0;        // 0 = config default
    int min_tests = 0;      // 0 = config default
    double timeout_s = 0.0; // 0 = config default
    int jobs = 1;
    bool determinism_check = false;
    std::string workroot;
};

int cmd_augment_tests(const CommonArgs& common, const AugmentArgs& args) {
    const Config& c = common.config;
    const int n_tests = args.n_tests > 0 ? args.n_tests : c.get_int("testkit", "n_tests", 10);
    const int min_tests = args.min_tests > 0 ? args.min_tests : c.get_int("testkit", "min_tests", 1);

    testkit::ValidationOptions options;
    options.per_test_timeout_s =
        args.timeout_s > 0 ? args.timeout_s : c.get_double("testkit", "per_test_timeout_s", 10.0);
    options.memory_cap_mb = c.get_double("exec", "memory_cap_mb", 4096.0);
    options.determinism_check =
        args.determinism_check || c.get_bool("testkit", "determinism_check", false);

    auto tasks = read_tasks(args.in_path);

    std::unique_ptr<provider::Provider> synth_provider;
    if (!args.provider_name.empty()) {
        synth_provider = provider::make_provider(c.provider_handle(args.provider_name));
    }
    const std::string template_text = load_template_or_default(
        args.template_path, provider::default_test_synthesis_template());

    exec::LocalExecutionService service(args.workroot);
    std::vector<std::pair<Task, std::vector<TestCase>>> validated(tasks.size());
    std::vector<std::string> task_errors(tasks.size());
    std::size_t synth_failed = 0;
    std::size_t tests_dropped = 0;

    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, args.jobs)) \
    reduction(+ : synth_failed, tests_dropped)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Task& task = tasks[static_cast<std::size_t>(i)];
        std::vector<TestCase> tests = task.tests;
        if (tests.empty() && synth_provider) {
            try {
                tests = testkit::synthesize_tests(task, *synth_provider, n_tests, template_text);
            } catch (const Error&) {
                ++synth_failed;
            }
        }
        try {
            auto result = testkit::validate_tests(task, tests, service, options);
            tests_dropped += result.dropped.size();
            validated[static_cast<std::size_t>(i)] = {task, std::move(result.kept)};
        } catch (const testkit::SolutionInvalid& e) {
            task_errors[static_cast<std::size_t>(i)] = e.what();
            validated[static_cast<std::size_t>(i)] = {task, {}};
        }
    }

    std::size_t solution_invalid = 0;
    for (const auto& msg : task_errors) {
        if (!msg.empty()) ++solution_invalid;
    }

    testkit::DropReport drop_report;
    auto kept_tasks = testkit::drop_untestable(validated, min_tests, &drop_report);
    write_tasks(args.out_path, kept_tasks);

    std::cout << "tasks_in=" << drop_report.tasks_in << " tasks_kept=" << drop_report.tasks_kept
              << " tasks_dropped=" << drop_report.tasks_dropped
              << " solution_invalid=" << solution_invalid << " synthesis_failed=" << synth_failed
              << " tests_dropped=" << tests_dropped << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string in_path, out_path, template_path;
    std::vector<std::string> provider_names;
    int n_candidates = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int cmd_generate(const CommonArgs& common, const GenerateArgs& args) {
    const Config& c = common.config;
    const int n_per_provider =
        args.n_candidates > 0 ? args.n_candidates : c.get_int("generate", "n_candidates", 4);
    if (args.seed_set) provider::set_retry_jitter_seed(args.seed);

    std::vector<provider::ProviderHandle> handles;
    for (const auto& name : args.provider_names) handles.push_back(c.provider_handle(name));
    if (handles.empty()) {
        throw config_error("provider", "generate needs at least one --provider");
    }

    const std::string template_text =
        load_template_or_default(args.template_path, provider::default_completion_template());

    auto tasks = read_tasks(args.in_path);
    JsonlWriter writer(args.out_path, "candidates");
    std::size_t generation_failed = 0;
    std::size_t total = 0;
    for (const auto& task : tasks) {
        provider::GenerationReport report;
        auto candidates =
            provider::generate_candidates(task, handles, n_per_provider, template_text, &report);
        if (report.all_failed) {
            ++generation_failed;
            std::cout << "generation_failed: " << task.id << "\n";
            continue;
        }
        for (const auto& candidate : candidates) {
            writer.write(provider::to_json(candidate));
            ++total;
        }
    }
    std::cout << "tasks=" << tasks.size() << " candidates=" << total
              << " generation_failed=" << generation_failed << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------

struct ProfileArgs {
    std::string tasks_path, candidates_path, out_path, targets = "candidates";
    int repeats = 0;
    int jobs = 1;
    double timeout_s = 0.0;
    double mem_cap_mb = 0.0;
    double mem_interval_ms = 0.0;
    std::string pin_cores;
    std::string workroot;
};

std::vector<provider::CandidateSolution> read_candidates(const std::string& path) {
    std::vector<provider::CandidateSolution> candidates;
    for (const auto& j : read_jsonl(path, "candidates")) {
        candidates.push_back(provider::candidate_from_json(j));
    }
    return candidates;
}

int cmd_profile(const CommonArgs& common, const ProfileArgs& args) {
    const Config& c = common.config;
    pipeline::ProfileOptions options;
    options.limits = limits_from(c);
    if (args.timeout_s > 0) options.limits.wall_timeout_s = args.timeout_s;
    if (args.mem_cap_mb > 0) options.limits.memory_cap_mb = args.mem_cap_mb;
    if (args.mem_interval_ms > 0) options.limits.mem_sample_interval_ms = args.mem_interval_ms;
    if (!args.pin_cores.empty()) options.limits.cpu_affinity = parse_core_list(args.pin_cores);
    options.repeats = args.repeats > 0 ? args.repeats : c.get_int("profile", "repeats", 1);
    options.jobs = std::max(1, args.jobs);
    options.workroot = args.workroot;

    if (args.targets == "candidates") {
        options.targets = pipeline::ProfileTargets::candidates;
    } else if (args.targets == "initial") {
        options.targets = pipeline::ProfileTargets::initial;
    } else if (args.targets == "both") {
        options.targets = pipeline::ProfileTargets::both;
    } else {
        throw input_error("bad_argument", "--targets must be candidates, initial, or both");
    }

    auto tasks = read_tasks(args.tasks_path);
    std::vector<provider::CandidateSolution> candidates;
    if (!args.candidates_path.empty()) candidates = read_candidates(args.candidates_path);
    if (options.targets != pipeline::ProfileTargets::initial && candidates.empty()) {
        throw input_error("bad_argument", "profiling candidates requires --candidates");
    }

    auto records = pipeline::profile_stage(tasks, candidates, options);
    pipeline::write_profiles(args.out_path, records);

    std::map<std::string, std::size_t> by_status;
    for (const auto& r : records) ++by_status[exec::to_string(r.profile.status)];
    std::cout << "profiles=" << records.size();
    for (const auto& [status, count] : by_status) std::cout << " " << status << "=" << count;
    std::cout << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// select / emit
// ---------------------------------------------------------------------------

struct SelectArgs {
    std::string tasks_path, candidates_path, profiles_path, out_path;
    double delta = -1.0;
    double rho = -1.0;
};

int cmd_select(const CommonArgs& common, const SelectArgs& args) {
    const Config& c = common.config;
    pipeline::SelectOptions options;
    options.delta = args.delta >= 0 ? args.delta : c.get_double("curate", "delta", 0.05);
    options.rho = args.rho >= 0 ? args.rho : c.get_double("curate", "rho", 0.10);

    auto tasks = read_tasks(args.tasks_path);
    auto candidates = read_candidates(args.candidates_path);
    auto profiles = pipeline::read_profiles(args.profiles_path);

    pipeline::SelectReport report;
    auto records = pipeline::select_stage(tasks, candidates, profiles, options, &report);

    JsonlWriter writer(args.out_path, "curated");
    for (const auto& r : records) writer.write(curate::to_json(r));
    std::cout << report.to_string() << "\n";
    return 0;
}

struct EmitArgs {
    std::string in_path, out_path;
};

int cmd_emit(const CommonArgs&, const EmitArgs& args) {
    auto records = curate::parse_dataset(args.in_path);
    auto summary = curate::emit_dataset(records, args.out_path);
    std::cout << curate::render_summary(summary);
    std::cout << "wrote " << summary.n_records << " records to " << args.out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string baseline_path, candidate_path, out_path;
    std::string baseline_label = "baseline", candidate_label = "candidate";
    std::string aggregation = "overlap";
    std::string format = "text";
};

int cmd_evaluate(const CommonArgs&, const EvaluateArgs& args) {
    auto aggregation = args.aggregation == "own" || args.aggregation == "own_correct"
                           ? report::AggregationSet::own_correct
                           : report::AggregationSet::overlap;
    if (args.aggregation != "overlap" && args.aggregation != "own" &&
        args.aggregation != "own_correct") {
        throw input_error("bad_argument", "--aggregation must be overlap or own");
    }
    auto format = report::parse_table_format(args.format);
    if (!format) throw input_error("bad_argument", "--format must be text, csv, or table");

    auto baseline = pipeline::task_results(pipeline::read_profiles(args.baseline_path));
    auto candidate = pipeline::task_results(pipeline::read_profiles(args.candidate_path));
    if (baseline.degenerate_canonical + candidate.degenerate_canonical > 0) {
        std::cout << "excluded_degenerate_canonical="
                  << baseline.degenerate_canonical + candidate.degenerate_canonical << "\n";
    }

    // Tasks without a usable canonical cannot join a normalized aggregate;
    // keep them out of the aggregation set on both sides.
    auto strip = [](std::vector<report::TaskResult>& results) {
        for (auto& r : results) {
            if (r.status == exec::RunStatus::passed && !r.normalized) {
                r.status = exec::RunStatus::runtime_error;
                r.metrics.reset();
            }
        }
    };
    strip(baseline.results);
    strip(candidate.results);

    auto table = report::paired_table(args.baseline_label, baseline.results, args.candidate_label,
                                      candidate.results, aggregation);
    write_text_output(args.out_path, report::render(table, *format));
    return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportArgs {
    std::string kind = "distribution";
    std::string dataset_path;
    std::string tasks_path, candidates_path;
    int runs = 5;
    int repeats = 1;
    std::string format = "text";
    std::string out_path;
    std::string workroot;
};

int cmd_report(const CommonArgs& common, const ReportArgs& args) {
    auto format = report::parse_table_format(args.format);
    if (!format) throw input_error("bad_argument", "--format must be text, csv, or table");

    if (args.kind == "distribution") {
        if (args.dataset_path.empty()) {
            throw input_error("bad_argument", "report --kind distribution needs --dataset");
        }
        auto records = curate::parse_dataset(args.dataset_path);
        std::vector<std::pair<metrics::EfficiencyMetrics, metrics::EfficiencyMetrics>> pairs;
        pairs.reserve(records.size());
        for (const auto& r : records) pairs.emplace_back(r.initial_metrics, r.chosen_metrics);
        auto summary = report::distribution_summary(pairs);
        std::ostringstream head;
        head << "pairs=" << summary.n_pairs << "\n";
        write_text_output(args.out_path, head.str() + report::render(summary, *format));
        return 0;
    }

    if (args.kind == "robustness") {
        if (args.tasks_path.empty() || args.candidates_path.empty()) {
            throw input_error("bad_argument",
                              "report --kind robustness needs --tasks and --candidates");
        }
        auto tasks = read_tasks(args.tasks_path);
        auto candidates = read_candidates(args.candidates_path);

        pipeline::ProfileOptions options;
        options.limits = limits_from(common.config);
        options.repeats = args.repeats;
        options.jobs = 1;  // sequential by design: noise control
        options.targets = pipeline::ProfileTargets::both;
        options.workroot = args.workroot;

        auto runner = [&]() {
            auto profiles = pipeline::profile_stage(tasks, candidates, options);
            auto input = pipeline::task_results(profiles);
            std::vector<std::pair<metrics::EfficiencyMetrics, metrics::NormalizedMetrics>> per_task;
            for (const auto& r : input.results) {
                if (r.metrics && r.normalized) per_task.emplace_back(*r.metrics, *r.normalized);
            }
            return metrics::aggregate(per_task);
        };
        auto summary = report::robustness(runner, args.runs);
        write_text_output(args.out_path, report::render(summary, *format));
        return 0;
    }

    throw input_error("bad_argument", "--kind must be distribution or robustness");
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateArgs {
    int runs = 5;
    std::string workroot;
};

int cmd_calibrate(const CommonArgs& common, const CalibrateArgs& args) {
    const auto& registry = exec::ToolchainRegistry::instance();
    std::cout << "environment_label: " << registry.environment_label() << "\n\n";
    std::cout << "toolchains:\n" << registry.probe_report() << "\n";

    exec::LocalExecutionService service(args.workroot);
    exec::ResourceLimits limits = limits_from(common.config);

    for (Language lang : {Language::python, Language::cpp, Language::java, Language::rust,
                          Language::go}) {
        if (!registry.for_language(lang).available) continue;
        double baseline = service.baseline_mb(lang, limits);
        std::cout << "baseline_mb[" << to_string(lang) << "] = "
                  << util::format_fixed(baseline, 2) << "\n";
    }

    if (!registry.for_language(Language::python).available) {
        std::cout << "python unavailable; skipping host noise calibration\n";
        return 0;
    }

    // Host noise: repeated CPU-bound runs, report relative std of wall time.
    const std::string busy =
        "total = 0\n"
        "for i in range(2_000_000):\n"
        "    total += i * i\n";
    std::vector<double> times;
    for (int i = 0; i < args.runs; ++i) {
        auto profile = service.run_solution(Language::python, busy, {}, limits);
        if (profile.status != exec::RunStatus::passed) {
            throw environment_error("calibration_failed",
                                    "CPU calibration run failed: " +
                                        exec::to_string(profile.status));
        }
        times.push_back(profile.wall_time_s);
    }
    double mean = std::accumulate(times.begin(), times.end(), 0.0) /
                  static_cast<double>(times.size());
    double ss = 0.0;
    for (double t : times) ss += (t - mean) * (t - mean);
    double std_dev = times.size() > 1
                         ? std::sqrt(ss / static_cast<double>(times.size() - 1))
                         : 0.0;
    std::cout << "cpu_noise: runs=" << args.runs << " mean_s=" << util::format_fixed(mean, 4)
              << " std_s=" << util::format_fixed(std_dev, 4)
              << " rel_std=" << util::format_fixed(mean > 0 ? std_dev / mean : 0.0, 4) << "\n";

    // Sleep drift: timer accuracy for a 0.2 s sleep.
    auto sleep_profile =
        service.run_solution(Language::python, "import time\ntime.sleep(0.2)\n", {}, limits);
    std::cout << "sleep_0.2s_wall: "
              << util::format_fixed(sleep_profile.wall_time_s, 4) << "\n";
    return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Argument wiring
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv) {
    CLI::App app{"efficiency-optimized code dataset pipeline"};
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--config", common.config_path, "key-value config file");

    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "load, filter, and dedup source records");
    ingest_cmd->add_option("--in", ingest_args.in_path, "source records, one JSON object per line")
        ->required();
    ingest_cmd->add_option("--out", ingest_args.out_path, "canonical tasks file")->required();
    ingest_cmd->add_option("--source-dataset", ingest_args.source_dataset, "source dataset label")
        ->required();
    ingest_cmd->add_option("--map", ingest_args.map_entries,
                           "canonical=source field mapping (repeat or comma-separate)");
    ingest_cmd->add_option("--eval-set", ingest_args.eval_set_path,
                           "tasks file; exact matches are removed");
    ingest_cmd->add_flag("--no-filter", ingest_args.no_filter, "skip quality filtering");
    ingest_cmd->add_flag("--no-dedup", ingest_args.no_dedup, "skip deduplication");

    AugmentArgs augment_args;
    auto* augment_cmd =
        app.add_subcommand("augment-tests", "synthesize and validate test cases");
    augment_cmd->add_option("--in", augment_args.in_path, "tasks file")->required();
    augment_cmd->add_option("--out", augment_args.out_path, "tasks file with validated tests")
        ->required();
    augment_cmd->add_option("--provider", augment_args.provider_name,
                            "config section for the synthesis provider");
    augment_cmd->add_option("--template", augment_args.template_path,
                            "test synthesis prompt template file");
    augment_cmd->add_option("--n", augment_args.n_tests, "tests requested per task");
    augment_cmd->add_option("--min-tests", augment_args.min_tests,
                            "minimum valid tests to keep a task");
    augment_cmd->add_option("--timeout-s", augment_args.timeout_s, "per-test validation timeout");
    augment_cmd->add_option("--jobs", augment_args.jobs, "parallel validation workers");
    augment_cmd->add_flag("--determinism-check", augment_args.determinism_check,
                          "re-run kept tests once and drop unstable ones");
    augment_cmd->add_option("--workroot", augment_args.workroot, "base dir for run workdirs");

    GenerateArgs generate_args;
    auto* generate_cmd = app.add_subcommand("generate", "generate candidate solutions");
    generate_cmd->add_option("--in", generate_args.in_path, "tasks file")->required();
    generate_cmd->add_option("--out", generate_args.out_path, "candidates file")->required();
    generate_cmd
        ->add_option("--provider", generate_args.provider_names,
                     "config section name (repeatable)")
        ->required();
    generate_cmd->add_option("--template", generate_args.template_path,
                             "completion prompt template file");
    generate_cmd->add_option("--n-candidates", generate_args.n_candidates,
                             "candidates requested per provider");
    generate_cmd->add_option("--seed", generate_args.seed, "retry jitter seed")
        ->trigger_on_parse()
        ->each([&generate_args](const std::string&) { generate_args.seed_set = true; });

    ProfileArgs profile_args;
    auto* profile_cmd = app.add_subcommand("profile", "execute and measure solutions");
    profile_cmd->add_option("--tasks", profile_args.tasks_path, "tasks file")->required();
    profile_cmd->add_option("--candidates", profile_args.candidates_path, "candidates file");
    profile_cmd->add_option("--out", profile_args.out_path, "profiles file")->required();
    profile_cmd->add_option("--targets", profile_args.targets,
                            "candidates | initial | both (default candidates)");
    profile_cmd->add_option("--repeats", profile_args.repeats, "runs per solution");
    profile_cmd->add_option("--jobs", profile_args.jobs, "parallel profiling workers");
    profile_cmd->add_option("--timeout-s", profile_args.timeout_s, "wall timeout per run");
    profile_cmd->add_option("--mem-cap-mb", profile_args.mem_cap_mb, "memory kill threshold");
    profile_cmd->add_option("--mem-interval-ms", profile_args.mem_interval_ms,
                            "memory sampling interval");
    profile_cmd->add_option("--pin-cores", profile_args.pin_cores,
                            "comma-separated cores for cpu affinity");
    profile_cmd->add_option("--workroot", profile_args.workroot, "base dir for run workdirs");

    SelectArgs select_args;
    auto* select_cmd =
        app.add_subcommand("select", "pick the most efficient correct candidate per task");
    select_cmd->add_option("--tasks", select_args.tasks_path, "tasks file")->required();
    select_cmd->add_option("--candidates", select_args.candidates_path, "candidates file")
        ->required();
    select_cmd->add_option("--profiles", select_args.profiles_path, "profiles file")->required();
    select_cmd->add_option("--out", select_args.out_path, "curated records file")->required();
    select_cmd->add_option("--min-improvement", select_args.delta,
                           "required relative improvement (delta)");
    select_cmd->add_option("--rho", select_args.rho, "tolerated regression on the other metric");

    EmitArgs emit_args;
    auto* emit_cmd = app.add_subcommand("emit", "write the final dataset with a summary");
    emit_cmd->add_option("--in", emit_args.in_path, "curated records file")->required();
    emit_cmd->add_option("--out", emit_args.out_path, "final dataset file")->required();

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "paired efficiency table with reductions");
    evaluate_cmd->add_option("--baseline", evaluate_args.baseline_path, "baseline profiles file")
        ->required();
    evaluate_cmd->add_option("--candidate", evaluate_args.candidate_path, "candidate profiles file")
        ->required();
    evaluate_cmd->add_option("--baseline-label", evaluate_args.baseline_label, "baseline row label");
    evaluate_cmd->add_option("--candidate-label", evaluate_args.candidate_label,
                             "candidate row label");
    evaluate_cmd->add_option("--aggregation", evaluate_args.aggregation, "overlap | own");
    evaluate_cmd->add_option("--format", evaluate_args.format, "text | csv | table");
    evaluate_cmd->add_option("--out", evaluate_args.out_path, "output file (default stdout)");

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "distribution and robustness reports");
    report_cmd->add_option("--kind", report_args.kind, "distribution | robustness");
    report_cmd->add_option("--dataset", report_args.dataset_path, "curated dataset file");
    report_cmd->add_option("--tasks", report_args.tasks_path, "tasks file (robustness)");
    report_cmd->add_option("--candidates", report_args.candidates_path,
                           "candidates file (robustness)");
    report_cmd->add_option("--runs", report_args.runs, "full evaluation repetitions");
    report_cmd->add_option("--repeats", report_args.repeats, "profiling repeats within each run");
    report_cmd->add_option("--format", report_args.format, "text | csv | table");
    report_cmd->add_option("--out", report_args.out_path, "output file (default stdout)");
    report_cmd->add_option("--workroot", report_args.workroot, "base dir for run workdirs");

    CalibrateArgs calibrate_args;
    auto* calibrate_cmd =
        app.add_subcommand("calibrate", "probe toolchains and host measurement noise");
    calibrate_cmd->add_option("--runs", calibrate_args.runs, "calibration repetitions");
    calibrate_cmd->add_option("--workroot", calibrate_args.workroot, "base dir for run workdirs");

    try {
        app.parse(argc, argv);
        common.load();
        if (ingest_cmd->parsed()) return cmd_ingest(common, ingest_args);
        if (augment_cmd->parsed()) return cmd_augment_tests(common, augment_args);
        if (generate_cmd->parsed()) return cmd_generate(common, generate_args);
        if (profile_cmd->parsed()) return cmd_profile(common, profile_args);
        if (select_cmd->parsed()) return cmd_select(common, select_args);
        if (emit_cmd->parsed()) return cmd_emit(common, emit_args);
        if (evaluate_cmd->parsed()) return cmd_evaluate(common, evaluate_args);
        if (report_cmd->parsed()) return cmd_report(common, report_args);
        if (calibrate_cmd->parsed()) return cmd_calibrate(common, calibrate_args);
        std::cerr << "error[input.no_command]: no subcommand given\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "error[input.cli]: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace perfset::cli
