#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "perfset/record.hpp"

namespace testenv {

namespace fs = std::filesystem;

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        auto base = fs::temp_directory_path() / "perfset-test-XXXXXX";
        std::string tmpl = base.string();
        dir_ = mkdtemp(tmpl.data());
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return dir_; }
    std::string file(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

inline perfset::Task make_task(const std::string& id,
                               perfset::Language lang = perfset::Language::python,
                               const std::string& instruction = "Write a function add(a, b).",
                               const std::string& solution = "def add(a, b):\n    return a + b\n") {
    perfset::Task task;
    task.id = id;
    task.language = lang;
    task.instruction = instruction;
    task.initial_solution = solution;
    task.source_dataset = "fixture";
    return task;
}

// Runs the built CLI binary, capturing combined output.
struct CliResult {
    int exit_code;
    std::string output;
};

inline CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(PERFSET_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    CliResult result{-1, {}};
    if (!pipe) return result;
    char buf[1024];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) result.output.append(buf, n);
    int rc = pclose(pipe);
    result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return result;
}

}  // namespace testenv
