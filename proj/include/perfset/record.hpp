#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace perfset {

enum class Language { python, cpp, java, rust, go };

std::string to_string(Language lang);
// Accepts common aliases (py, c++, golang, ...). Returns nullopt for anything else.
std::optional<Language> parse_language(const std::string& text);

enum class TestOrigin { source_provided, synthesized };

std::string to_string(TestOrigin origin);
std::optional<TestOrigin> parse_test_origin(const std::string& text);

struct TestCase {
    std::string id;
    std::string body;  // assertion-style snippet in the task's language
    TestOrigin origin = TestOrigin::source_provided;

    bool operator==(const TestCase&) const = default;
};

struct Task {
    std::string id;
    Language language = Language::python;
    std::string instruction;
    std::string initial_solution;  // also the canonical solution for normalization
    std::vector<TestCase> tests;
    std::string source_dataset;
    std::map<std::string, std::string> metadata;

    bool operator==(const Task&) const = default;
};

// One raw line from a source dataset before schema mapping.
struct SourceRecord {
    std::string source_dataset;
    std::map<std::string, std::string> raw_fields;
    std::optional<std::string> language_hint;
};

nlohmann::json to_json(const TestCase& tc);
nlohmann::json to_json(const Task& task);
TestCase test_case_from_json(const nlohmann::json& j);
Task task_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Versioned JSONL artifact files.
//
// Every artifact file starts with a header line
//   {"format":"perfset/<kind>","version":"<major>.<minor>"}
// followed by one JSON object per line. Readers reject unknown kinds and
// unknown major versions.
// ---------------------------------------------------------------------------

inline constexpr int kFormatMajor = 1;
inline constexpr int kFormatMinor = 0;

std::string format_header(const std::string& kind);

class JsonlWriter {
public:
    JsonlWriter(const std::string& path, const std::string& kind);
    ~JsonlWriter();
    JsonlWriter(const JsonlWriter&) = delete;
    JsonlWriter& operator=(const JsonlWriter&) = delete;

    void write(const nlohmann::json& record);
    void close();
    std::size_t records_written() const { return count_; }

private:
    struct Impl;
    Impl* impl_;
    std::size_t count_ = 0;
};

// Reads the whole file, validating the header. `kind` must match.
std::vector<nlohmann::json> read_jsonl(const std::string& path, const std::string& kind);

std::vector<Task> read_tasks(const std::string& path);
void write_tasks(const std::string& path, const std::vector<Task>& tasks);

}  // namespace perfset
