#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perfset/record.hpp"

namespace perfset::ingest {

struct FilterRuleSet {
    std::size_t max_solution_bytes = 65536;
    int min_solution_lines = 3;
    bool require_parseable = true;
    // Substring matches, except the literal "..." entry which only matches a
    // line that is nothing but an ellipsis (truncated-code marker).
    std::vector<std::string> banned_substrings = {"TODO", "..."};
    bool require_tests_or_augmentable = true;
};

struct LoadReport {
    std::size_t parsed = 0;
    std::map<std::string, std::size_t> skipped;  // reason -> count

    std::size_t total_skipped() const;
    std::string to_string() const;
};

// Reads one flat JSON object per line and maps fields into canonical Tasks.
// schema_map maps canonical field -> source field name; a value starting with
// '=' is a literal (e.g. language -> "=python"). Canonical fields: id,
// language, instruction, initial_solution, tests; any other canonical name is
// copied into Task.metadata. Records missing instruction or initial_solution
// are skipped and counted. Default id: "<source_dataset>/<line>".
std::vector<Task> load_tasks(const std::string& source_path, const std::string& source_dataset,
                             const std::map<std::string, std::string>& schema_map,
                             LoadReport* report = nullptr);

struct Rejection {
    std::string task_id;
    std::string reason;  // name of the first failed rule
};

struct FilterOutcome {
    std::vector<Task> kept;
    std::vector<Rejection> rejected;
};

FilterOutcome filter_tasks(const std::vector<Task>& tasks, const FilterRuleSet& rules);

// Rule evaluation for one task: nullopt = passes all rules, otherwise the
// first failed rule's name. This is the serial reference; evaluate_rules is
// the OpenMP production kernel and must agree element-for-element.
std::optional<std::string> first_failed_rule(const Task& task, const FilterRuleSet& rules);
std::vector<std::optional<std::string>> evaluate_rules(const std::vector<Task>& tasks,
                                                       const FilterRuleSet& rules);
std::vector<std::optional<std::string>> evaluate_rules_serial(const std::vector<Task>& tasks,
                                                              const FilterRuleSet& rules);

// Removes tasks whose whitespace-collapsed instruction+solution already
// occurred (first one wins), plus tasks exactly matching an eval-set entry.
std::vector<Task> dedup_tasks(const std::vector<Task>& tasks,
                              const std::vector<Task>* eval_set = nullptr);

// Normalized dedup keys; OpenMP kernel + serial reference.
std::vector<std::string> dedup_keys(const std::vector<Task>& tasks);
std::vector<std::string> dedup_keys_serial(const std::vector<Task>& tasks);
std::string dedup_key(const Task& task);

// Token-level sanity check: strings and comments terminate, brackets balance,
// and there is at least one code token.
bool lexes_as_code(Language language, const std::string& source);

// First function-like definition in the source, if any; used both as the
// synthesis target and to decide whether a task without tests is augmentable.
std::optional<std::string> detect_entry_point(Language language, const std::string& source);

}  // namespace perfset::ingest
