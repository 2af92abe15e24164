#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perfset/exec_types.hpp"
#include "perfset/metrics.hpp"
#include "perfset/provider.hpp"
#include "perfset/record.hpp"

namespace perfset::curate {

struct MeasuredCandidate {
    provider::CandidateSolution candidate;
    exec::RunStatus status = exec::RunStatus::runtime_error;
    std::optional<metrics::EfficiencyMetrics> metrics;  // present iff status == passed
};

// Index of the most efficient passing candidate under the lexicographic key
// (et, tmu, mu, stable input index); nullopt when nothing passed.
std::optional<std::size_t> select_best(const std::vector<MeasuredCandidate>& measured);

struct ImprovementDecision {
    bool keep = false;
    std::string reason;  // empty when kept; no_improvement | degenerate_canonical
};

// Keep iff the chosen solution improves et by at least delta without regressing
// tmu beyond rho, or vice versa.
ImprovementDecision require_improvement(const metrics::EfficiencyMetrics& chosen,
                                        const metrics::EfficiencyMetrics& initial, double delta,
                                        double rho);

struct CuratedRecord {
    std::string task_id;
    Language language = Language::python;
    std::string instruction;
    std::string response;  // chosen source code
    metrics::EfficiencyMetrics chosen_metrics;
    metrics::EfficiencyMetrics initial_metrics;
    metrics::NormalizedMetrics normalized;  // chosen vs initial
    std::string provider_label;
    std::string source_dataset;
    std::string environment_label;

    bool operator==(const CuratedRecord&) const = default;
};

nlohmann::json to_json(const CuratedRecord& record);
CuratedRecord curated_from_json(const nlohmann::json& j);

struct EmitSummary {
    std::size_t n_records = 0;
    std::map<std::string, std::size_t> per_language;
    std::map<std::string, std::size_t> per_source;
    // (language, source) -> count, for the distribution table.
    std::map<std::pair<std::string, std::string>, std::size_t> matrix;
};

// Validates every record, orders by task id, writes the versioned dataset
// file. Re-parsing the file reproduces the records field-for-field.
EmitSummary emit_dataset(const std::vector<CuratedRecord>& records, const std::string& out_path);

std::vector<CuratedRecord> parse_dataset(const std::string& path);

// Per-language x per-source count table.
std::string render_summary(const EmitSummary& summary);

}  // namespace perfset::curate
