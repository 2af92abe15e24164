#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perfset/exec_types.hpp"
#include "perfset/metrics.hpp"

namespace perfset::report {

// One system's outcome on one task: status of its (single, greedy) solution
// plus metrics and canonical-normalized metrics when the solution passed.
struct TaskResult {
    std::string task_id;
    exec::RunStatus status = exec::RunStatus::runtime_error;
    std::optional<metrics::EfficiencyMetrics> metrics;
    std::optional<metrics::NormalizedMetrics> normalized;
};

enum class AggregationSet { overlap, own_correct };

struct EvaluationRow {
    std::string label;
    double et = 0.0, net = 0.0, mu = 0.0, nmu = 0.0, tmu = 0.0, ntmu = 0.0;
    double overlap_pct = 0.0;
    double pass1_pct = 0.0;
    // Percent reduction vs the baseline row for (et, net, mu, nmu, tmu, ntmu);
    // negative = regression, rendered with its sign.
    std::optional<std::array<double, 6>> reductions;
};

struct PairedTable {
    EvaluationRow baseline;
    EvaluationRow candidate;
    AggregationSet aggregation = AggregationSet::overlap;
};

// 100 * (baseline - value) / baseline; 0 when the baseline is 0.
double reduction_pct(double baseline, double value);

void attach_reductions(EvaluationRow& candidate, const EvaluationRow& baseline);

PairedTable paired_table(const std::string& baseline_label,
                         const std::vector<TaskResult>& baseline,
                         const std::string& candidate_label,
                         const std::vector<TaskResult>& candidate, AggregationSet aggregation);

enum class TableFormat { text, csv, table };

std::string render(const PairedTable& table, TableFormat format);

// ---------------------------------------------------------------------------
// Robustness over repeated full evaluations.
// ---------------------------------------------------------------------------

struct RobustnessSummary {
    std::size_t n_runs = 0;
    std::vector<metrics::AggregateMetrics> runs;
    // Per-metric mean and sample standard deviation (n-1), in the order
    // et, net, mu, nmu, tmu, ntmu.
    std::array<double, 6> mean{};
    std::array<double, 6> std_dev{};
};

RobustnessSummary robustness(const std::function<metrics::AggregateMetrics()>& runner,
                             int n_runs);

std::string render(const RobustnessSummary& summary, TableFormat format);

// ---------------------------------------------------------------------------
// Dataset efficiency distribution (initial vs efficient populations).
// ---------------------------------------------------------------------------

struct DistributionSummary {
    std::size_t n_pairs = 0;
    metrics::EfficiencyMetrics initial_mean;
    metrics::EfficiencyMetrics efficient_mean;
    double et_ratio = 0.0;   // initial / efficient
    double mu_ratio = 0.0;
    double tmu_ratio = 0.0;
};

DistributionSummary distribution_summary(
    const std::vector<std::pair<metrics::EfficiencyMetrics, metrics::EfficiencyMetrics>>& pairs);

std::string render(const DistributionSummary& summary, TableFormat format);

std::optional<TableFormat> parse_table_format(const std::string& text);

}  // namespace perfset::report
