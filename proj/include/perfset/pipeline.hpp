#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perfset/curate.hpp"
#include "perfset/exec.hpp"
#include "perfset/metrics.hpp"
#include "perfset/provider.hpp"
#include "perfset/record.hpp"
#include "perfset/report.hpp"

namespace perfset::pipeline {

// Which solution of a task a profile record belongs to.
struct SolutionRef {
    bool is_initial = true;
    std::string provider_label;  // candidates only
    int sample_index = 0;        // candidates only

    bool operator==(const SolutionRef&) const = default;
    bool operator<(const SolutionRef& other) const;
};

struct ProfileRecord {
    std::string task_id;
    SolutionRef solution;
    int repeat = 0;
    exec::ExecutionProfile profile;
    double baseline_mb = 0.0;  // startup RSS of the language runtime, not subtracted
};

nlohmann::json to_json(const ProfileRecord& record);
ProfileRecord profile_record_from_json(const nlohmann::json& j);

void write_profiles(const std::string& path, const std::vector<ProfileRecord>& records);
std::vector<ProfileRecord> read_profiles(const std::string& path);

enum class ProfileTargets { candidates, initial, both };

struct ProfileOptions {
    exec::ResourceLimits limits;
    int repeats = 1;
    int jobs = 1;
    ProfileTargets targets = ProfileTargets::candidates;
    std::string workroot;  // empty = system temp
};

// Profiles each requested (task, solution) unit: the full test suite runs in
// one process per run, `repeats` times, compilation excluded from timing.
// Units run in parallel across `jobs` workers with at most one profiled child
// per worker; record order is deterministic (input order, repeats ascending).
std::vector<ProfileRecord> profile_stage(const std::vector<Task>& tasks,
                                         const std::vector<provider::CandidateSolution>& candidates,
                                         const ProfileOptions& options);

// ---------------------------------------------------------------------------
// Grouping profiles back into per-solution outcomes.
// ---------------------------------------------------------------------------

struct SolutionOutcome {
    exec::RunStatus status = exec::RunStatus::runtime_error;
    std::optional<metrics::EfficiencyMetrics> metrics;  // mean across repeats, passed only
};

// All repeats passed -> passed with metrics averaged across repeats (averaging
// happens before any normalization); otherwise the first non-passed status.
SolutionOutcome fold_repeats(const std::vector<const ProfileRecord*>& runs);

using OutcomeMap = std::map<std::string, std::map<SolutionRef, SolutionOutcome>>;

OutcomeMap group_outcomes(const std::vector<ProfileRecord>& records);

// ---------------------------------------------------------------------------
// Selection stage: most efficient correct candidate per task, improvement
// filter, curated records.
// ---------------------------------------------------------------------------

struct SelectOptions {
    double delta = 0.05;  // required relative improvement
    double rho = 0.10;    // tolerated relative regression on the other metric
};

struct SelectReport {
    std::size_t tasks_in = 0;
    std::size_t selected = 0;
    std::map<std::string, std::size_t> dropped;  // reason -> count
    std::string to_string() const;
};

std::vector<curate::CuratedRecord> select_stage(
    const std::vector<Task>& tasks, const std::vector<provider::CandidateSolution>& candidates,
    const std::vector<ProfileRecord>& profiles, const SelectOptions& options,
    SelectReport* report = nullptr);

// ---------------------------------------------------------------------------
// Evaluation: turn one system's profile file (initial + one candidate solution
// per task) into per-task results for report::paired_table.
// ---------------------------------------------------------------------------

struct EvaluationInput {
    std::vector<report::TaskResult> results;
    std::size_t degenerate_canonical = 0;  // passed tasks without usable canonical
};

EvaluationInput task_results(const std::vector<ProfileRecord>& records);

}  // namespace perfset::pipeline
