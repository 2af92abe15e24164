#include "perfset/exec_types.hpp"

#include "perfset/error.hpp"

namespace perfset::exec {

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::passed: return "passed";
        case RunStatus::failed_assertion: return "failed_assertion";
        case RunStatus::runtime_error: return "runtime_error";
        case RunStatus::compile_error: return "compile_error";
        case RunStatus::timeout: return "timeout";
        case RunStatus::memory_exceeded: return "memory_exceeded";
    }
    return "runtime_error";
}

std::optional<RunStatus> parse_run_status(const std::string& text) {
    if (text == "passed") return RunStatus::passed;
    if (text == "failed_assertion") return RunStatus::failed_assertion;
    if (text == "runtime_error") return RunStatus::runtime_error;
    if (text == "compile_error") return RunStatus::compile_error;
    if (text == "timeout") return RunStatus::timeout;
    if (text == "memory_exceeded") return RunStatus::memory_exceeded;
    return std::nullopt;
}

nlohmann::json to_json(const ExecutionProfile& profile) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : profile.samples) {
        samples.push_back(nlohmann::json::array({s.t_s, s.rss_mb}));
    }
    return {
        {"status", to_string(profile.status)},
        {"wall_time_s", profile.wall_time_s},
        {"samples", samples},
        {"peak_mb", profile.peak_mb},
        {"stdout_tail", profile.stdout_tail},
        {"stderr_tail", profile.stderr_tail},
        {"environment_label", profile.environment_label},
        {"exit_code", profile.exit_code},
    };
}

ExecutionProfile execution_profile_from_json(const nlohmann::json& j) {
    ExecutionProfile p;
    auto status = parse_run_status(j.at("status").get<std::string>());
    if (!status) throw input_error("bad_record", "unknown run status: " + j.at("status").dump());
    p.status = *status;
    p.wall_time_s = j.at("wall_time_s").get<double>();
    for (const auto& s : j.at("samples")) {
        p.samples.push_back(MemorySample{s.at(0).get<double>(), s.at(1).get<double>()});
    }
    p.peak_mb = j.at("peak_mb").get<double>();
    p.stdout_tail = j.value("stdout_tail", std::string{});
    p.stderr_tail = j.value("stderr_tail", std::string{});
    p.environment_label = j.value("environment_label", std::string{});
    p.exit_code = j.value("exit_code", -1);
    return p;
}

}  // namespace perfset::exec
