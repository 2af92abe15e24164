#include "perfset/record.hpp"

#include <fstream>
#include <sstream>

#include "perfset/error.hpp"
#include "perfset/util.hpp"

namespace perfset {

std::string to_string(Language lang) {
    switch (lang) {
        case Language::python: return "python";
        case Language::cpp: return "cpp";
        case Language::java: return "java";
        case Language::rust: return "rust";
        case Language::go: return "go";
    }
    return "unknown";
}

std::optional<Language> parse_language(const std::string& text) {
    std::string t = util::to_lower(util::trim(text));
    if (t == "python" || t == "py" || t == "python3") return Language::python;
    if (t == "cpp" || t == "c++" || t == "cxx" || t == "cc") return Language::cpp;
    if (t == "java") return Language::java;
    if (t == "rust" || t == "rs") return Language::rust;
    if (t == "go" || t == "golang") return Language::go;
    return std::nullopt;
}

std::string to_string(TestOrigin origin) {
    return origin == TestOrigin::source_provided ? "source_provided" : "synthesized";
}

std::optional<TestOrigin> parse_test_origin(const std::string& text) {
    if (text == "source_provided") return TestOrigin::source_provided;
    if (text == "synthesized") return TestOrigin::synthesized;
    return std::nullopt;
}

nlohmann::json to_json(const TestCase& tc) {
    return {{"id", tc.id}, {"body", tc.body}, {"origin", to_string(tc.origin)}};
}

nlohmann::json to_json(const Task& task) {
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& tc : task.tests) tests.push_back(to_json(tc));
    return {
        {"id", task.id},
        {"language", to_string(task.language)},
        {"source_dataset", task.source_dataset},
        {"instruction", task.instruction},
        {"initial_solution", task.initial_solution},
        {"tests", tests},
        {"metadata", task.metadata},
    };
}

TestCase test_case_from_json(const nlohmann::json& j) {
    TestCase tc;
    tc.id = j.at("id").get<std::string>();
    tc.body = j.at("body").get<std::string>();
    auto origin = parse_test_origin(j.at("origin").get<std::string>());
    if (!origin) throw input_error("bad_record", "unknown test origin: " + j.at("origin").dump());
    tc.origin = *origin;
    return tc;
}

Task task_from_json(const nlohmann::json& j) {
    Task task;
    task.id = j.at("id").get<std::string>();
    auto lang = parse_language(j.at("language").get<std::string>());
    if (!lang) throw input_error("bad_record", "unknown language in task " + task.id);
    task.language = *lang;
    task.source_dataset = j.at("source_dataset").get<std::string>();
    task.instruction = j.at("instruction").get<std::string>();
    task.initial_solution = j.at("initial_solution").get<std::string>();
    for (const auto& t : j.at("tests")) task.tests.push_back(test_case_from_json(t));
    if (j.contains("metadata")) {
        task.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    }
    return task;
}

std::string format_header(const std::string& kind) {
    nlohmann::json header = {
        {"format", "perfset/" + kind},
        {"version", std::to_string(kFormatMajor) + "." + std::to_string(kFormatMinor)},
    };
    return header.dump();
}

struct JsonlWriter::Impl {
    std::ofstream out;
    std::string path;
};

JsonlWriter::JsonlWriter(const std::string& path, const std::string& kind) : impl_(new Impl) {
    impl_->path = path;
    impl_->out.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->out) {
        delete impl_;
        impl_ = nullptr;
        throw input_error("unwritable_file", "cannot open for writing: " + path);
    }
    impl_->out << format_header(kind) << '\n';
}

JsonlWriter::~JsonlWriter() {
    close();
}

void JsonlWriter::write(const nlohmann::json& record) {
    impl_->out << record.dump() << '\n';
    if (!impl_->out) throw input_error("unwritable_file", "write failed: " + impl_->path);
    ++count_;
}

void JsonlWriter::close() {
    if (impl_) {
        impl_->out.close();
        delete impl_;
        impl_ = nullptr;
    }
}

namespace {

void check_header(const std::string& line, const std::string& kind, const std::string& path) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
        throw input_error("bad_header", path + ": first line is not a valid header");
    }
    if (!header.is_object() || !header.contains("format") || !header.contains("version")) {
        throw input_error("bad_header", path + ": missing format/version header");
    }
    std::string format = header.at("format").get<std::string>();
    if (format != "perfset/" + kind) {
        throw input_error("bad_header",
                          path + ": expected format perfset/" + kind + ", found " + format);
    }
    std::string version = header.at("version").get<std::string>();
    auto parts = util::split(version, '.');
    int major = -1;
    try {
        major = std::stoi(parts.at(0));
    } catch (const std::exception&) {
    }
    if (major != kFormatMajor) {
        throw input_error("unsupported_version",
                          path + ": unsupported major version " + version);
    }
}

}  // namespace

std::vector<nlohmann::json> read_jsonl(const std::string& path, const std::string& kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("unreadable_file", "cannot read file: " + path);
    std::string line;
    if (!std::getline(in, line)) {
        throw input_error("bad_header", path + ": empty file, missing header");
    }
    check_header(line, kind, path);
    std::vector<nlohmann::json> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        try {
            records.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw input_error("bad_record",
                              path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::vector<Task> read_tasks(const std::string& path) {
    std::vector<Task> tasks;
    for (const auto& j : read_jsonl(path, "tasks")) tasks.push_back(task_from_json(j));
    return tasks;
}

void write_tasks(const std::string& path, const std::vector<Task>& tasks) {
    JsonlWriter writer(path, "tasks");
    for (const auto& task : tasks) writer.write(to_json(task));
}

}  // namespace perfset
