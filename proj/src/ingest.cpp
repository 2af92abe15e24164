#include "perfset/ingest.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "perfset/error.hpp"
#include "perfset/util.hpp"

namespace perfset::ingest {

std::size_t LoadReport::total_skipped() const {
    std::size_t n = 0;
    for (const auto& [reason, count] : skipped) n += count;
    return n;
}

std::string LoadReport::to_string() const {
    std::ostringstream out;
    out << "parsed=" << parsed;
    for (const auto& [reason, count] : skipped) out << " " << reason << "=" << count;
    return out.str();
}

// ---------------------------------------------------------------------------
// load_tasks
// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> mapped_value(const nlohmann::json& record, const std::string& source_spec) {
    if (util::starts_with(source_spec, "=")) return source_spec.substr(1);
    if (!record.contains(source_spec)) return std::nullopt;
    const auto& v = record.at(source_spec);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return std::nullopt;
    return v.dump();  // numbers/booleans coerced, kept traceable to the source
}

std::vector<TestCase> parse_tests_field(const std::string& raw) {
    std::vector<TestCase> tests;
    // Either a JSON array of snippet strings or a single snippet.
    nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
    if (parsed.is_array()) {
        for (const auto& item : parsed) {
            if (item.is_string() && !item.get<std::string>().empty()) {
                tests.push_back(TestCase{"t" + std::to_string(tests.size()),
                                         item.get<std::string>(), TestOrigin::source_provided});
            }
        }
        return tests;
    }
    if (!util::trim(raw).empty()) {
        tests.push_back(TestCase{"t0", raw, TestOrigin::source_provided});
    }
    return tests;
}

}  // namespace

std::vector<Task> load_tasks(const std::string& source_path, const std::string& source_dataset,
                             const std::map<std::string, std::string>& schema_map,
                             LoadReport* report) {
    if (source_dataset.empty()) {
        throw input_error("bad_argument", "source_dataset must be non-empty");
    }
    std::ifstream in(source_path, std::ios::binary);
    if (!in) throw input_error("unreadable_file", "cannot read file: " + source_path);

    LoadReport local;
    LoadReport& rep = report ? *report : local;
    std::vector<Task> tasks;
    std::unordered_set<std::string> seen_ids;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            ++rep.skipped["unparseable"];
            continue;
        }

        auto field = [&](const char* canonical) -> std::optional<std::string> {
            auto it = schema_map.find(canonical);
            if (it == schema_map.end()) return std::nullopt;
            return mapped_value(record, it->second);
        };

        auto instruction = field("instruction");
        if (!instruction || instruction->empty()) {
            ++rep.skipped["missing_instruction"];
            continue;
        }
        auto solution = field("initial_solution");
        if (!solution || solution->empty()) {
            ++rep.skipped["missing_solution"];
            continue;
        }
        auto language_text = field("language");
        if (!language_text) {
            ++rep.skipped["missing_language"];
            continue;
        }
        auto language = parse_language(*language_text);
        if (!language) {
            ++rep.skipped["unknown_language"];
            continue;
        }

        Task task;
        task.source_dataset = source_dataset;
        task.language = *language;
        task.instruction = *instruction;
        task.initial_solution = *solution;
        auto id = field("id");
        task.id = (id && !id->empty()) ? *id : source_dataset + "/" + std::to_string(line_no);
        if (!seen_ids.insert(task.id).second) {
            ++rep.skipped["duplicate_id"];
            continue;
        }
        if (auto tests_raw = field("tests")) {
            task.tests = parse_tests_field(*tests_raw);
        }
        for (const auto& [canonical, source_spec] : schema_map) {
            if (canonical == "id" || canonical == "language" || canonical == "instruction" ||
                canonical == "initial_solution" || canonical == "tests") {
                continue;
            }
            if (auto value = mapped_value(record, source_spec)) {
                task.metadata[canonical] = *value;
            }
        }
        tasks.push_back(std::move(task));
    }

    rep.parsed = tasks.size();
    if (tasks.empty()) {
        throw input_error("empty_collection",
                          "no parseable records in " + source_path + " (" + rep.to_string() + ")");
    }
    return tasks;
}

// ---------------------------------------------------------------------------
// Lexing sanity check
// ---------------------------------------------------------------------------

namespace {

bool lex_python(const std::string& src) {
    int paren = 0, bracket = 0, brace = 0;
    bool saw_token = false;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (c == '#') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '"' || c == '\'') {
            saw_token = true;
            const char quote = c;
            bool triple = i + 2 < n && src[i + 1] == quote && src[i + 2] == quote;
            i += triple ? 3 : 1;
            bool closed = false;
            while (i < n) {
                if (src[i] == '\\') {
                    i += 2;
                    continue;
                }
                if (triple) {
                    if (src[i] == quote && i + 2 < n && src[i + 1] == quote &&
                        src[i + 2] == quote) {
                        i += 3;
                        closed = true;
                        break;
                    }
                } else {
                    if (src[i] == quote) {
                        ++i;
                        closed = true;
                        break;
                    }
                    if (src[i] == '\n') break;  // unterminated single-line string
                }
                ++i;
            }
            if (!closed) return false;
            continue;
        }
        switch (c) {
            case '(': ++paren; break;
            case ')': --paren; break;
            case '[': ++bracket; break;
            case ']': --bracket; break;
            case '{': ++brace; break;
            case '}': --brace; break;
            default: break;
        }
        if (paren < 0 || bracket < 0 || brace < 0) return false;
        if (!std::isspace(static_cast<unsigned char>(c))) saw_token = true;
        ++i;
    }
    return paren == 0 && bracket == 0 && brace == 0 && saw_token;
}

bool lex_c_family(Language lang, const std::string& src) {
    int paren = 0, bracket = 0, brace = 0;
    bool saw_token = false;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            i += 2;
            bool closed = false;
            while (i + 1 < n) {
                if (src[i] == '*' && src[i + 1] == '/') {
                    i += 2;
                    closed = true;
                    break;
                }
                ++i;
            }
            if (!closed) return false;
            continue;
        }
        if (lang == Language::go && c == '`') {  // raw string
            ++i;
            while (i < n && src[i] != '`') ++i;
            if (i >= n) return false;
            ++i;
            saw_token = true;
            continue;
        }
        if (lang == Language::rust && c == '\'') {
            // Char literal only when it closes within a few chars; otherwise a
            // lifetime marker like 'a.
            std::size_t close = src.find('\'', i + 1);
            if (close != std::string::npos && close - i <= 3) {
                i = close + 1;
                saw_token = true;
            } else {
                ++i;
            }
            continue;
        }
        if (c == '"' || (c == '\'' && lang != Language::rust)) {
            const char quote = c;
            ++i;
            bool closed = false;
            while (i < n) {
                if (src[i] == '\\') {
                    i += 2;
                    continue;
                }
                if (src[i] == quote) {
                    ++i;
                    closed = true;
                    break;
                }
                if (src[i] == '\n') break;
                ++i;
            }
            if (!closed) return false;
            saw_token = true;
            continue;
        }
        switch (c) {
            case '(': ++paren; break;
            case ')': --paren; break;
            case '[': ++bracket; break;
            case ']': --bracket; break;
            case '{': ++brace; break;
            case '}': --brace; break;
            default: break;
        }
        if (paren < 0 || bracket < 0 || brace < 0) return false;
        if (!std::isspace(static_cast<unsigned char>(c))) saw_token = true;
        ++i;
    }
    return paren == 0 && bracket == 0 && brace == 0 && saw_token;
}

}  // namespace

bool lexes_as_code(Language language, const std::string& source) {
    if (language == Language::python) return lex_python(source);
    return lex_c_family(language, source);
}

std::optional<std::string> detect_entry_point(Language language, const std::string& source) {
    static const std::regex python_re(R"(^\s*def\s+([A-Za-z_]\w*))", std::regex::multiline);
    static const std::regex rust_re(R"(fn\s+([A-Za-z_]\w*))");
    static const std::regex go_re(R"(func\s+(?:\([^)]*\)\s*)?([A-Za-z_]\w*))");
    static const std::regex c_like_re(
        R"(\b[A-Za-z_][\w:<>,\s*&]*\s+([A-Za-z_]\w*)\s*\([^;{]*\)\s*\{)");

    std::smatch m;
    switch (language) {
        case Language::python:
            if (std::regex_search(source, m, python_re)) return m[1];
            return std::nullopt;
        case Language::rust:
            if (std::regex_search(source, m, rust_re)) return m[1];
            return std::nullopt;
        case Language::go:
            if (std::regex_search(source, m, go_re)) return m[1];
            return std::nullopt;
        case Language::cpp:
        case Language::java:
            if (std::regex_search(source, m, c_like_re)) return m[1];
            return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// filter_tasks
// ---------------------------------------------------------------------------

namespace {

bool has_lone_ellipsis_line(const std::string& source) {
    std::istringstream in(source);
    std::string line;
    while (std::getline(in, line)) {
        if (util::trim(line) == "...") return true;
    }
    return false;
}

bool banned_match(const std::string& source, const std::string& entry) {
    if (entry == "...") return has_lone_ellipsis_line(source);
    return source.find(entry) != std::string::npos;
}

void validate_rules(const FilterRuleSet& rules) {
    if (rules.max_solution_bytes == 0) {
        throw input_error("bad_rules", "max_solution_bytes must be > 0");
    }
    if (rules.min_solution_lines < 1) {
        throw input_error("bad_rules", "min_solution_lines must be >= 1");
    }
}

}  // namespace

std::optional<std::string> first_failed_rule(const Task& task, const FilterRuleSet& rules) {
    if (task.initial_solution.size() > rules.max_solution_bytes) {
        return "max_solution_bytes";
    }
    if (util::count_lines(task.initial_solution) < rules.min_solution_lines) {
        return "min_solution_lines";
    }
    if (rules.require_parseable && !lexes_as_code(task.language, task.initial_solution)) {
        return "require_parseable";
    }
    for (const auto& entry : rules.banned_substrings) {
        if (banned_match(task.initial_solution, entry)) return "banned_substrings";
    }
    if (rules.require_tests_or_augmentable && task.tests.empty() &&
        !detect_entry_point(task.language, task.initial_solution)) {
        return "require_tests_or_augmentable";
    }
    return std::nullopt;
}

std::vector<std::optional<std::string>> evaluate_rules(const std::vector<Task>& tasks,
                                                       const FilterRuleSet& rules) {
    validate_rules(rules);
    std::vector<std::optional<std::string>> verdicts(tasks.size());
    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        verdicts[static_cast<std::size_t>(i)] =
            first_failed_rule(tasks[static_cast<std::size_t>(i)], rules);
    }
    return verdicts;
}

std::vector<std::optional<std::string>> evaluate_rules_serial(const std::vector<Task>& tasks,
                                                              const FilterRuleSet& rules) {
    validate_rules(rules);
    std::vector<std::optional<std::string>> verdicts;
    verdicts.reserve(tasks.size());
    for (const auto& task : tasks) verdicts.push_back(first_failed_rule(task, rules));
    return verdicts;
}

FilterOutcome filter_tasks(const std::vector<Task>& tasks, const FilterRuleSet& rules) {
    auto verdicts = evaluate_rules(tasks, rules);
    FilterOutcome outcome;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (verdicts[i]) {
            outcome.rejected.push_back(Rejection{tasks[i].id, *verdicts[i]});
        } else {
            outcome.kept.push_back(tasks[i]);
        }
    }
    return outcome;
}

// ---------------------------------------------------------------------------
// dedup_tasks
// ---------------------------------------------------------------------------

std::string dedup_key(const Task& task) {
    return util::collapse_whitespace(task.instruction) + '\x1f' +
           util::collapse_whitespace(task.initial_solution);
}

std::vector<std::string> dedup_keys(const std::vector<Task>& tasks) {
    std::vector<std::string> keys(tasks.size());
    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        keys[static_cast<std::size_t>(i)] = dedup_key(tasks[static_cast<std::size_t>(i)]);
    }
    return keys;
}

std::vector<std::string> dedup_keys_serial(const std::vector<Task>& tasks) {
    std::vector<std::string> keys;
    keys.reserve(tasks.size());
    for (const auto& task : tasks) keys.push_back(dedup_key(task));
    return keys;
}

std::vector<Task> dedup_tasks(const std::vector<Task>& tasks, const std::vector<Task>* eval_set) {
    std::unordered_set<std::string> eval_keys;
    if (eval_set) {
        for (const auto& key : dedup_keys(*eval_set)) eval_keys.insert(key);
    }
    auto keys = dedup_keys(tasks);
    std::unordered_set<std::string> seen;
    std::vector<Task> out;
    out.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (eval_keys.count(keys[i])) continue;
        if (!seen.insert(keys[i]).second) continue;
        out.push_back(tasks[i]);
    }
    return out;
}

}  // namespace perfset::ingest
