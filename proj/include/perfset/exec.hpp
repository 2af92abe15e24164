#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "perfset/exec_types.hpp"
#include "perfset/record.hpp"

namespace perfset::exec {

// ---------------------------------------------------------------------------
// Toolchain probing. Compiled languages need their toolchain on PATH; the
// probe result feeds both the environment label and the diagnostics shown
// when a language is requested without its toolchain.
// ---------------------------------------------------------------------------

struct ToolchainInfo {
    bool available = false;
    std::string command;  // interpreter or compiler entry command
    std::string version;  // first line of `--version` style output
    std::string detail;   // probe diagnostics when unavailable
};

class ToolchainRegistry {
public:
    // Probes every supported language once per process.
    static const ToolchainRegistry& instance();

    ToolchainRegistry();

    const ToolchainInfo& for_language(Language lang) const;
    // Throws environment.toolchain_missing with the probe report attached.
    const ToolchainInfo& require(Language lang) const;
    std::string probe_report() const;
    const std::string& environment_label() const { return environment_label_; }

private:
    std::map<Language, ToolchainInfo> info_;
    std::string environment_label_;
};

// ---------------------------------------------------------------------------
// Plans: a prepared, self-contained program that runs the solution against
// all given tests and exits 0 iff every test passes. Compilation (when the
// language has one) happens at prepare time so it never counts toward the
// measured wall time.
// ---------------------------------------------------------------------------

struct RunnablePlan {
    Language language = Language::python;
    bool compile_failed = false;
    std::string compile_diagnostics;
    double compile_time_s = 0.0;
    std::string workdir;
    std::vector<std::string> argv;
    std::vector<std::pair<std::string, std::string>> env;  // extra environment

    bool ok() const { return !compile_failed; }
};

RunnablePlan prepare(Language language, const std::string& source_code,
                     const std::vector<TestCase>& tests, const std::string& workdir);

// Launches the plan in a supervised subprocess: resident memory of the child
// process tree is sampled every mem_sample_interval, the process group is
// killed at wall_timeout or when rss exceeds memory_cap, and wall time is
// taken from a monotonic clock between launch and exit.
ExecutionProfile run_once(const RunnablePlan& plan, const ResourceLimits& limits);

// Sequential repeats on the same plan, no caching between runs.
std::vector<ExecutionProfile> measure(const RunnablePlan& plan, const ResourceLimits& limits,
                                      int repeats);

// ---------------------------------------------------------------------------
// Service facade used by the pipeline and by testkit: fresh unique workdir
// per call, prepare + run. Virtual so tests can fake execution outcomes.
// ---------------------------------------------------------------------------

class ExecutionService {
public:
    virtual ~ExecutionService() = default;

    virtual ExecutionProfile run_solution(Language language, const std::string& source_code,
                                          const std::vector<TestCase>& tests,
                                          const ResourceLimits& limits) = 0;

    virtual std::vector<ExecutionProfile> measure_solution(Language language,
                                                           const std::string& source_code,
                                                           const std::vector<TestCase>& tests,
                                                           const ResourceLimits& limits,
                                                           int repeats) = 0;
};

class LocalExecutionService : public ExecutionService {
public:
    // workroot: base directory for per-run unique workdirs; empty = system
    // temp directory. keep_workdirs leaves them behind for debugging.
    explicit LocalExecutionService(std::string workroot = "", bool keep_workdirs = false);

    ExecutionProfile run_solution(Language language, const std::string& source_code,
                                  const std::vector<TestCase>& tests,
                                  const ResourceLimits& limits) override;

    std::vector<ExecutionProfile> measure_solution(Language language,
                                                   const std::string& source_code,
                                                   const std::vector<TestCase>& tests,
                                                   const ResourceLimits& limits,
                                                   int repeats) override;

    // Peak RSS of an empty program, memoized per language. Interpreter and VM
    // startup memory is reported next to profiles, never subtracted from them.
    double baseline_mb(Language language, const ResourceLimits& limits);

    std::string make_workdir();

private:
    std::string workroot_;
    bool keep_workdirs_ = false;
    std::map<Language, double> baseline_cache_;
};

}  // namespace perfset::exec
