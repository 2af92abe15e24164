#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace perfset::exec {

struct ResourceLimits {
    double wall_timeout_s = 30.0;
    double memory_cap_mb = 4096.0;       // hard kill threshold
    double mem_sample_interval_ms = 10.0;
    std::vector<int> cpu_affinity;       // empty = no pinning
    bool deny_network = true;            // best-effort, see runner docs
};

struct MemorySample {
    double t_s = 0.0;    // seconds since process start
    double rss_mb = 0.0; // resident memory of the child process tree
};

enum class RunStatus {
    passed,
    failed_assertion,
    runtime_error,
    compile_error,
    timeout,
    memory_exceeded,
};

std::string to_string(RunStatus status);
std::optional<RunStatus> parse_run_status(const std::string& text);

struct ExecutionProfile {
    RunStatus status = RunStatus::runtime_error;
    double wall_time_s = 0.0;          // launch to exit, monotonic clock
    std::vector<MemorySample> samples; // strictly increasing in t
    double peak_mb = 0.0;              // max(samples, OS peak counter)
    std::string stdout_tail;
    std::string stderr_tail;
    std::string environment_label;
    int exit_code = -1;
};

nlohmann::json to_json(const ExecutionProfile& profile);
ExecutionProfile execution_profile_from_json(const nlohmann::json& j);

}  // namespace perfset::exec
