// Benchmark comparing the serial reference kernels against their OpenMP
// counterparts on synthetic corpora: rule evaluation, dedup key
// normalization, and batch metric computation.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "perfset/exec_types.hpp"
#include "perfset/ingest.hpp"
#include "perfset/metrics.hpp"
#include "perfset/record.hpp"

using perfset::Language;
using perfset::Task;
using Clock = std::chrono::steady_clock;

namespace {

struct Timing {
    double mean_ms;
    double std_ms;
};

template <typename F>
Timing time_runs(F&& fn, int reps) {
    std::vector<double> times;
    fn();  // warmup
    for (int i = 0; i < reps; ++i) {
        auto start = Clock::now();
        fn();
        times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    }
    double mean = 0;
    for (double t : times) mean += t;
    mean /= static_cast<double>(times.size());
    double ss = 0;
    for (double t : times) ss += (t - mean) * (t - mean);
    double sd = times.size() > 1 ? std::sqrt(ss / static_cast<double>(times.size() - 1)) : 0.0;
    return {mean, sd};
}

std::vector<Task> synthetic_tasks(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> word(0, 25);
    std::vector<Task> tasks(n);
    for (std::size_t i = 0; i < n; ++i) {
        Task& t = tasks[i];
        t.id = "task" + std::to_string(i);
        t.language = Language::python;
        t.source_dataset = "bench";
        t.instruction = "compute variant " + std::to_string(i % 1000);
        std::string body = "def f(x):\n";
        for (int line = 0; line < 12; ++line) {
            body += "    y" + std::to_string(line) + " = x * " + std::to_string(word(rng)) + "\n";
        }
        body += "    return x\n";
        t.initial_solution = body;
    }
    return tasks;
}

std::vector<perfset::exec::ExecutionProfile> synthetic_profiles(std::size_t n) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rss(5.0, 200.0);
    std::vector<perfset::exec::ExecutionProfile> profiles(n);
    for (auto& p : profiles) {
        p.status = perfset::exec::RunStatus::passed;
        p.wall_time_s = 2.0;
        double peak = 0;
        for (int k = 0; k < 200; ++k) {
            double r = rss(rng);
            peak = std::max(peak, r);
            p.samples.push_back({0.01 * (k + 1), r});
        }
        p.peak_mb = peak;
    }
    return profiles;
}

void report(const char* name, Timing serial, Timing parallel) {
    std::printf("%-24s serial %8.2f ms (+-%.2f)   omp %8.2f ms (+-%.2f)   speedup %.2fx\n", name,
                serial.mean_ms, serial.std_ms, parallel.mean_ms, parallel.std_ms,
                parallel.mean_ms > 0 ? serial.mean_ms / parallel.mean_ms : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_tasks = 200000;
    std::size_t n_profiles = 20000;
    int reps = 5;
    if (argc > 1) n_tasks = std::stoul(argv[1]);
    if (argc > 2) n_profiles = std::stoul(argv[2]);

    std::printf("threads=%d tasks=%zu profiles=%zu reps=%d\n", omp_get_max_threads(), n_tasks,
                n_profiles, reps);

    auto tasks = synthetic_tasks(n_tasks);
    perfset::ingest::FilterRuleSet rules;

    report("evaluate_rules",
           time_runs([&] { perfset::ingest::evaluate_rules_serial(tasks, rules); }, reps),
           time_runs([&] { perfset::ingest::evaluate_rules(tasks, rules); }, reps));

    report("dedup_keys",
           time_runs([&] { perfset::ingest::dedup_keys_serial(tasks); }, reps),
           time_runs([&] { perfset::ingest::dedup_keys(tasks); }, reps));

    auto profiles = synthetic_profiles(n_profiles);
    report("profile_metrics_batch",
           time_runs([&] { perfset::metrics::profile_metrics_batch_serial(profiles); }, reps),
           time_runs([&] { perfset::metrics::profile_metrics_batch(profiles); }, reps));

    return 0;
}
