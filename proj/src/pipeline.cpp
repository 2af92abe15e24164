#include "perfset/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "perfset/error.hpp"

namespace perfset::pipeline {

bool SolutionRef::operator<(const SolutionRef& other) const {
    if (is_initial != other.is_initial) return is_initial;  // initial first
    if (provider_label != other.provider_label) return provider_label < other.provider_label;
    return sample_index < other.sample_index;
}

nlohmann::json to_json(const ProfileRecord& record) {
    nlohmann::json solution;
    if (record.solution.is_initial) {
        solution = {{"kind", "initial"}};
    } else {
        solution = {{"kind", "candidate"},
                    {"provider_label", record.solution.provider_label},
                    {"sample_index", record.solution.sample_index}};
    }
    nlohmann::json j = exec::to_json(record.profile);
    j["task_id"] = record.task_id;
    j["solution"] = solution;
    j["repeat"] = record.repeat;
    j["baseline_mb"] = record.baseline_mb;
    return j;
}

ProfileRecord profile_record_from_json(const nlohmann::json& j) {
    ProfileRecord r;
    r.task_id = j.at("task_id").get<std::string>();
    const auto& solution = j.at("solution");
    std::string kind = solution.at("kind").get<std::string>();
    if (kind == "initial") {
        r.solution.is_initial = true;
    } else if (kind == "candidate") {
        r.solution.is_initial = false;
        r.solution.provider_label = solution.at("provider_label").get<std::string>();
        r.solution.sample_index = solution.at("sample_index").get<int>();
    } else {
        throw input_error("bad_record", "unknown solution kind: " + kind);
    }
    r.repeat = j.at("repeat").get<int>();
    r.baseline_mb = j.value("baseline_mb", 0.0);
    r.profile = exec::execution_profile_from_json(j);
    return r;
}

void write_profiles(const std::string& path, const std::vector<ProfileRecord>& records) {
    JsonlWriter writer(path, "profiles");
    for (const auto& r : records) writer.write(to_json(r));
}

std::vector<ProfileRecord> read_profiles(const std::string& path) {
    std::vector<ProfileRecord> records;
    for (const auto& j : read_jsonl(path, "profiles")) {
        records.push_back(profile_record_from_json(j));
    }
    return records;
}

// ---------------------------------------------------------------------------
// profile_stage
// ---------------------------------------------------------------------------

namespace {

struct ProfileUnit {
    const Task* task;
    SolutionRef ref;
    const std::string* source;
};

}  // namespace

std::vector<ProfileRecord> profile_stage(const std::vector<Task>& tasks,
                                         const std::vector<provider::CandidateSolution>& candidates,
                                         const ProfileOptions& options) {
    if (options.repeats < 1) throw input_error("bad_argument", "repeats must be >= 1");
    if (options.jobs < 1) throw input_error("bad_argument", "jobs must be >= 1");

    std::map<std::string, std::vector<const provider::CandidateSolution*>> by_task;
    for (const auto& c : candidates) by_task[c.task_id].push_back(&c);

    const bool want_initial = options.targets != ProfileTargets::candidates;
    const bool want_candidates = options.targets != ProfileTargets::initial;

    std::vector<ProfileUnit> units;
    for (const auto& task : tasks) {
        if (want_initial) {
            units.push_back(ProfileUnit{&task, SolutionRef{true, "", 0}, &task.initial_solution});
        }
        if (want_candidates) {
            auto it = by_task.find(task.id);
            if (it == by_task.end()) continue;
            for (const auto* c : it->second) {
                units.push_back(ProfileUnit{
                    &task, SolutionRef{false, c->provider_label, c->sample_index},
                    &c->source_code});
            }
        }
    }

    // One profiled child per worker; the thread count is the admission gate.
    const int workers = std::min(options.jobs,
                                 std::max(1, static_cast<int>(std::thread::hardware_concurrency())));
    exec::LocalExecutionService service(options.workroot);
    std::map<Language, double> baselines;
    {
        // Baselines are memoized up front so parallel workers only read.
        exec::ResourceLimits baseline_limits = options.limits;
        for (const auto& task : tasks) {
            if (!baselines.count(task.language)) {
                baselines[task.language] = service.baseline_mb(task.language, baseline_limits);
            }
        }
    }

    std::vector<std::vector<ProfileRecord>> per_unit(units.size());
    std::exception_ptr first_error;
    const auto n = static_cast<std::ptrdiff_t>(units.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& unit = units[static_cast<std::size_t>(i)];
        try {
            auto runs = service.measure_solution(unit.task->language, *unit.source,
                                                 unit.task->tests, options.limits,
                                                 options.repeats);
            auto& out = per_unit[static_cast<std::size_t>(i)];
            for (std::size_t r = 0; r < runs.size(); ++r) {
                ProfileRecord record;
                record.task_id = unit.task->id;
                record.solution = unit.ref;
                record.repeat = static_cast<int>(r);
                record.profile = std::move(runs[r]);
                record.baseline_mb = baselines.at(unit.task->language);
                out.push_back(std::move(record));
            }
        } catch (...) {
#pragma omp critical
            {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<ProfileRecord> records;
    for (auto& unit_records : per_unit) {
        for (auto& r : unit_records) records.push_back(std::move(r));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Grouping
// ---------------------------------------------------------------------------

SolutionOutcome fold_repeats(const std::vector<const ProfileRecord*>& runs) {
    SolutionOutcome outcome;
    if (runs.empty()) return outcome;
    std::vector<metrics::EfficiencyMetrics> per_run;
    for (const auto* r : runs) {
        if (r->profile.status != exec::RunStatus::passed) {
            outcome.status = r->profile.status;
            outcome.metrics.reset();
            return outcome;
        }
        per_run.push_back(metrics::profile_metrics(r->profile));
    }
    outcome.status = exec::RunStatus::passed;
    outcome.metrics = metrics::mean_of(per_run);
    return outcome;
}

OutcomeMap group_outcomes(const std::vector<ProfileRecord>& records) {
    std::map<std::string, std::map<SolutionRef, std::vector<const ProfileRecord*>>> grouped;
    for (const auto& r : records) grouped[r.task_id][r.solution].push_back(&r);
    OutcomeMap outcomes;
    for (const auto& [task_id, solutions] : grouped) {
        for (const auto& [ref, runs] : solutions) {
            outcomes[task_id][ref] = fold_repeats(runs);
        }
    }
    return outcomes;
}

// ---------------------------------------------------------------------------
// select_stage
// ---------------------------------------------------------------------------

std::string SelectReport::to_string() const {
    std::ostringstream out;
    out << "tasks=" << tasks_in << " selected=" << selected;
    for (const auto& [reason, count] : dropped) out << " " << reason << "=" << count;
    return out.str();
}

std::vector<curate::CuratedRecord> select_stage(
    const std::vector<Task>& tasks, const std::vector<provider::CandidateSolution>& candidates,
    const std::vector<ProfileRecord>& profiles, const SelectOptions& options,
    SelectReport* report) {
    SelectReport local;
    SelectReport& rep = report ? *report : local;
    rep.tasks_in = tasks.size();

    std::map<std::string, std::vector<const provider::CandidateSolution*>> candidates_by_task;
    for (const auto& c : candidates) candidates_by_task[c.task_id].push_back(&c);

    auto outcomes = group_outcomes(profiles);

    std::string environment_label;
    for (const auto& r : profiles) {
        if (!r.profile.environment_label.empty()) {
            environment_label = r.profile.environment_label;
            break;
        }
    }

    std::vector<curate::CuratedRecord> records;
    for (const auto& task : tasks) {
        auto oit = outcomes.find(task.id);
        if (oit == outcomes.end()) {
            ++rep.dropped["no_profiles"];
            continue;
        }
        const auto& solution_outcomes = oit->second;

        auto iit = solution_outcomes.find(SolutionRef{true, "", 0});
        if (iit == solution_outcomes.end()) {
            ++rep.dropped["no_initial_profile"];
            continue;
        }
        if (iit->second.status != exec::RunStatus::passed) {
            ++rep.dropped["initial_failed"];
            continue;
        }
        const auto& initial_metrics = *iit->second.metrics;

        auto cit = candidates_by_task.find(task.id);
        if (cit == candidates_by_task.end()) {
            ++rep.dropped["no_candidates"];
            continue;
        }
        // Candidate order follows the candidates file so the selection
        // tie-break index is stable.
        std::vector<curate::MeasuredCandidate> measured;
        for (const auto* c : cit->second) {
            auto sit = solution_outcomes.find(SolutionRef{false, c->provider_label, c->sample_index});
            if (sit == solution_outcomes.end()) continue;
            curate::MeasuredCandidate mc;
            mc.candidate = *c;
            mc.status = sit->second.status;
            mc.metrics = sit->second.metrics;
            measured.push_back(std::move(mc));
        }
        if (measured.empty()) {
            ++rep.dropped["no_candidate_profiles"];
            continue;
        }

        auto best = curate::select_best(measured);
        if (!best) {
            ++rep.dropped["no_passing_candidate"];
            continue;
        }
        const auto& chosen = measured[*best];
        auto decision = curate::require_improvement(*chosen.metrics, initial_metrics,
                                                    options.delta, options.rho);
        if (!decision.keep) {
            ++rep.dropped[decision.reason];
            continue;
        }

        curate::CuratedRecord record;
        record.task_id = task.id;
        record.language = task.language;
        record.instruction = task.instruction;
        record.response = chosen.candidate.source_code;
        record.chosen_metrics = *chosen.metrics;
        record.initial_metrics = initial_metrics;
        record.normalized = metrics::normalize(*chosen.metrics, initial_metrics);
        record.provider_label = chosen.candidate.provider_label;
        record.source_dataset = task.source_dataset;
        record.environment_label = environment_label;
        records.push_back(std::move(record));
        ++rep.selected;
    }
    return records;
}

// ---------------------------------------------------------------------------
// Evaluation input
// ---------------------------------------------------------------------------

EvaluationInput task_results(const std::vector<ProfileRecord>& records) {
    auto outcomes = group_outcomes(records);
    EvaluationInput input;
    for (const auto& [task_id, solutions] : outcomes) {
        std::optional<SolutionOutcome> initial;
        std::optional<SolutionOutcome> candidate;
        int candidate_count = 0;
        for (const auto& [ref, outcome] : solutions) {
            if (ref.is_initial) {
                initial = outcome;
            } else {
                candidate = outcome;
                ++candidate_count;
            }
        }
        if (candidate_count > 1) {
            throw input_error("multiple_candidates",
                              "evaluation expects one candidate solution per task, task " +
                                  task_id + " has " + std::to_string(candidate_count));
        }
        if (!candidate) {
            throw input_error("missing_candidate",
                              "no candidate profile for task " + task_id);
        }
        report::TaskResult result;
        result.task_id = task_id;
        result.status = candidate->status;
        if (candidate->status == exec::RunStatus::passed) {
            result.metrics = candidate->metrics;
            if (initial && initial->status == exec::RunStatus::passed) {
                result.normalized = metrics::normalize(*candidate->metrics, *initial->metrics);
            } else {
                ++input.degenerate_canonical;
            }
        }
        input.results.push_back(std::move(result));
    }
    return input;
}

}  // namespace perfset::pipeline
