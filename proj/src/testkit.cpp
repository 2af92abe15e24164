#include "perfset/testkit.hpp"

#include <unordered_set>

#include "perfset/ingest.hpp"

namespace perfset::testkit {

std::vector<TestCase> synthesize_tests(const Task& task, provider::Provider& provider, int n,
                                       const std::string& template_text) {
    if (n < 1) throw input_error("bad_argument", "test synthesis needs n >= 1");
    const std::string prompt = provider::render_test_synthesis_prompt(task, template_text);
    auto responses = provider.complete(task.id, prompt, 1);
    if (responses.empty()) return {};

    auto entry_point = ingest::detect_entry_point(task.language, task.initial_solution);

    std::vector<TestCase> tests;
    std::unordered_set<std::string> seen;
    for (const auto& block : provider::extract_code_blocks(responses.front())) {
        if (static_cast<int>(tests.size()) >= n) break;
        std::string body = block.body;
        if (body.empty()) continue;
        if (entry_point && body.find(*entry_point) == std::string::npos) continue;
        if (!seen.insert(body).second) continue;
        TestCase tc;
        tc.id = "synth" + std::to_string(tests.size());
        tc.body = std::move(body);
        tc.origin = TestOrigin::synthesized;
        tests.push_back(std::move(tc));
    }
    return tests;
}

namespace {

std::string drop_reason(exec::RunStatus status) {
    switch (status) {
        case exec::RunStatus::failed_assertion: return "assertion_failure";
        case exec::RunStatus::timeout: return "timeout";
        case exec::RunStatus::compile_error: return "compile_error";
        case exec::RunStatus::runtime_error:
        case exec::RunStatus::memory_exceeded:
        case exec::RunStatus::passed:
            return "runtime_error";
    }
    return "runtime_error";
}

}  // namespace

ValidationResult validate_tests(const Task& task, const std::vector<TestCase>& tests,
                                exec::ExecutionService& exec_service,
                                const ValidationOptions& options) {
    exec::ResourceLimits limits;
    limits.wall_timeout_s = options.per_test_timeout_s;
    limits.memory_cap_mb = options.memory_cap_mb;
    limits.mem_sample_interval_ms = options.mem_sample_interval_ms;

    // The solution must stand on its own before it can anchor test validity.
    auto solo = exec_service.run_solution(task.language, task.initial_solution, {}, limits);
    if (solo.status != exec::RunStatus::passed) {
        throw SolutionInvalid(task.id, solo.status, solo.stderr_tail);
    }

    ValidationResult result;
    for (const auto& test : tests) {
        auto profile =
            exec_service.run_solution(task.language, task.initial_solution, {test}, limits);
        if (profile.status != exec::RunStatus::passed) {
            result.dropped.push_back(DroppedTest{test.id, drop_reason(profile.status)});
            continue;
        }
        if (options.determinism_check) {
            auto again =
                exec_service.run_solution(task.language, task.initial_solution, {test}, limits);
            if (again.status != exec::RunStatus::passed) {
                result.dropped.push_back(DroppedTest{test.id, "runtime_error"});
                continue;
            }
        }
        result.kept.push_back(test);
    }
    return result;
}

std::vector<Task> drop_untestable(
    const std::vector<std::pair<Task, std::vector<TestCase>>>& tasks_with_tests, int min_tests,
    DropReport* report) {
    if (min_tests < 1) throw input_error("bad_argument", "min_tests must be >= 1");
    DropReport local;
    DropReport& rep = report ? *report : local;
    rep.tasks_in = tasks_with_tests.size();

    std::vector<Task> out;
    for (const auto& [task, kept] : tasks_with_tests) {
        if (static_cast<int>(kept.size()) < min_tests) {
            ++rep.tasks_dropped;
            continue;
        }
        Task updated = task;
        updated.tests = kept;
        out.push_back(std::move(updated));
    }
    rep.tasks_kept = out.size();
    return out;
}

}  // namespace perfset::testkit
