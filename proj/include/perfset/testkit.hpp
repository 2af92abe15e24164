#pragma once

#include <map>
#include <string>
#include <vector>

#include "perfset/error.hpp"
#include "perfset/exec.hpp"
#include "perfset/provider.hpp"
#include "perfset/record.hpp"

namespace perfset::testkit {

struct ValidationOptions {
    double per_test_timeout_s = 10.0;
    double memory_cap_mb = 4096.0;
    double mem_sample_interval_ms = 50.0;
    // Re-runs each kept test once and drops tests whose outcome differs.
    bool determinism_check = false;
};

struct DroppedTest {
    std::string test_id;
    std::string reason;  // assertion_failure | runtime_error | timeout | compile_error
};

struct ValidationResult {
    std::vector<TestCase> kept;
    std::vector<DroppedTest> dropped;
};

// Raised when the initial solution itself fails to build or load; the task
// cannot anchor test validity and is dropped upstream.
class SolutionInvalid : public Error {
public:
    SolutionInvalid(const std::string& task_id, exec::RunStatus status,
                    const std::string& diagnostics)
        : Error(ErrorClass::input, "testkit.solution_invalid",
                "initial solution of task " + task_id + " fails on its own: " +
                    exec::to_string(status)),
          status_(status),
          diagnostics_(diagnostics) {}

    exec::RunStatus status() const { return status_; }
    const std::string& diagnostics() const { return diagnostics_; }

private:
    exec::RunStatus status_;
    std::string diagnostics_;
};

// Asks the provider for tests (one completion request), extracts every fenced
// block as a test body, keeps only blocks referencing the task's entry point
// (when one is detectable), removes byte-identical duplicates, caps at n.
std::vector<TestCase> synthesize_tests(const Task& task, provider::Provider& provider, int n,
                                       const std::string& template_text);

// Executes each test individually against the initial solution. A test is
// kept iff its run passes within limits. The solution is first run on its own;
// if that fails, SolutionInvalid is thrown. memory_exceeded drops map to
// runtime_error (a resource fault of the test program).
ValidationResult validate_tests(const Task& task, const std::vector<TestCase>& tests,
                                exec::ExecutionService& exec_service,
                                const ValidationOptions& options);

struct DropReport {
    std::size_t tasks_in = 0;
    std::size_t tasks_kept = 0;
    std::size_t tasks_dropped = 0;
};

// Keeps tasks that still carry at least min_tests valid tests, replacing each
// task's test list with the kept set.
std::vector<Task> drop_untestable(const std::vector<std::pair<Task, std::vector<TestCase>>>& tasks_with_tests,
                                  int min_tests, DropReport* report = nullptr);

}  // namespace perfset::testkit
