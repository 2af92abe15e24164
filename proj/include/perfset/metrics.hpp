#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "perfset/exec_types.hpp"

namespace perfset::metrics {

struct EfficiencyMetrics {
    double et_s = 0.0;    // wall time over the full test suite
    double mu_mb = 0.0;   // peak resident memory
    double tmu_mbs = 0.0; // time integral of the memory profile

    bool operator==(const EfficiencyMetrics&) const = default;
};

struct NormalizedMetrics {
    double net = 0.0;
    double nmu = 0.0;
    double ntmu = 0.0;

    bool operator==(const NormalizedMetrics&) const = default;
};

struct AggregateMetrics {
    std::size_t n_tasks = 0;
    double mean_et = 0.0;
    double mean_net = 0.0;
    double mean_mu = 0.0;
    double mean_nmu = 0.0;
    double mean_tmu = 0.0;
    double mean_ntmu = 0.0;
};

// Metrics exist only for correct code: the profile must have status passed and
// a non-empty sample series. Anything else throws (metrics.undefined).
//
// The memory polyline is extended to cover [0, wall_time]: a leading point
// (0, first rss) and a trailing point (wall_time, last rss) are added when the
// samples do not already reach the ends. The integral uses the trapezoidal rule.
EfficiencyMetrics profile_metrics(const exec::ExecutionProfile& profile);

// Element-wise batch over many profiles. The OpenMP variant is the production
// path; the serial variant is the reference the tests compare against. Both
// produce bit-identical results (pure per-element map, no reduction).
std::vector<EfficiencyMetrics> profile_metrics_batch(
    const std::vector<exec::ExecutionProfile>& profiles);
std::vector<EfficiencyMetrics> profile_metrics_batch_serial(
    const std::vector<exec::ExecutionProfile>& profiles);

// net = code.et / canonical.et, likewise for memory. Throws
// metrics.degenerate_canonical when any canonical field is zero.
NormalizedMetrics normalize(const EfficiencyMetrics& code, const EfficiencyMetrics& canonical);

// Arithmetic means over per-task values. Throws on an empty list.
AggregateMetrics aggregate(
    const std::vector<std::pair<EfficiencyMetrics, NormalizedMetrics>>& per_task);

// Percentage of passed tasks under greedy decoding (one result per task id).
double pass_at_1(const std::vector<std::pair<std::string, exec::RunStatus>>& results);

// 100 * |a ∩ b| / total.
double overlap(const std::vector<std::string>& a, const std::vector<std::string>& b,
               std::size_t total);

// Pearson product-moment correlation. Throws on unequal/short inputs or zero
// variance.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Mean of per-run metrics across repeats of the same solution; callers average
// before normalizing. All inputs must come from passed runs.
EfficiencyMetrics mean_of(const std::vector<EfficiencyMetrics>& runs);

// Lexicographic selection key (et, tmu, mu) used by curate::select_best.
// Smaller key = more efficient solution.
struct SelectionKey {
    double et_s;
    double tmu_mbs;
    double mu_mb;
};

SelectionKey selection_key(const EfficiencyMetrics& m);
bool key_less(const SelectionKey& a, const SelectionKey& b);

}  // namespace perfset::metrics
