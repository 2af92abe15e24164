#include "perfset/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "perfset/error.hpp"

namespace perfset::metrics {

namespace {

Error metrics_error(const std::string& code, const std::string& msg) {
    return Error(ErrorClass::input, "metrics." + code, msg);
}

double trapezoid(const std::vector<exec::MemorySample>& samples, double wall_time_s) {
    // Extend the polyline to cover [0, wall_time] so short runs are not
    // systematically under-integrated.
    double area = 0.0;
    double prev_t = 0.0;
    double prev_rss = samples.front().rss_mb;
    for (const auto& s : samples) {
        if (s.t_s > prev_t) {
            area += (s.t_s - prev_t) * (prev_rss + s.rss_mb) * 0.5;
        }
        prev_t = s.t_s;
        prev_rss = s.rss_mb;
    }
    if (wall_time_s > prev_t) {
        area += (wall_time_s - prev_t) * prev_rss;
    }
    return area;
}

}  // namespace

EfficiencyMetrics profile_metrics(const exec::ExecutionProfile& profile) {
    if (profile.status != exec::RunStatus::passed) {
        throw metrics_error("undefined",
                            "metrics are defined only for passed runs, got status " +
                                exec::to_string(profile.status));
    }
    if (profile.samples.empty()) {
        throw metrics_error("undefined", "profile has no memory samples");
    }
    EfficiencyMetrics m;
    m.et_s = profile.wall_time_s;
    m.mu_mb = profile.peak_mb;
    m.tmu_mbs = trapezoid(profile.samples, profile.wall_time_s);
    return m;
}

std::vector<EfficiencyMetrics> profile_metrics_batch(
    const std::vector<exec::ExecutionProfile>& profiles) {
    std::vector<EfficiencyMetrics> out(profiles.size());
    const auto n = static_cast<std::ptrdiff_t>(profiles.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = profile_metrics(profiles[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<EfficiencyMetrics> profile_metrics_batch_serial(
    const std::vector<exec::ExecutionProfile>& profiles) {
    std::vector<EfficiencyMetrics> out;
    out.reserve(profiles.size());
    for (const auto& p : profiles) out.push_back(profile_metrics(p));
    return out;
}

NormalizedMetrics normalize(const EfficiencyMetrics& code, const EfficiencyMetrics& canonical) {
    if (canonical.et_s <= 0.0 || canonical.mu_mb <= 0.0 || canonical.tmu_mbs <= 0.0) {
        throw metrics_error("degenerate_canonical",
                            "canonical metrics must be positive to normalize");
    }
    NormalizedMetrics n;
    n.net = code.et_s / canonical.et_s;
    n.nmu = code.mu_mb / canonical.mu_mb;
    n.ntmu = code.tmu_mbs / canonical.tmu_mbs;
    return n;
}

AggregateMetrics aggregate(
    const std::vector<std::pair<EfficiencyMetrics, NormalizedMetrics>>& per_task) {
    if (per_task.empty()) {
        throw metrics_error("empty_aggregate", "cannot aggregate an empty task list");
    }
    AggregateMetrics agg;
    agg.n_tasks = per_task.size();
    for (const auto& [m, n] : per_task) {
        agg.mean_et += m.et_s;
        agg.mean_mu += m.mu_mb;
        agg.mean_tmu += m.tmu_mbs;
        agg.mean_net += n.net;
        agg.mean_nmu += n.nmu;
        agg.mean_ntmu += n.ntmu;
    }
    const double inv = 1.0 / static_cast<double>(per_task.size());
    agg.mean_et *= inv;
    agg.mean_mu *= inv;
    agg.mean_tmu *= inv;
    agg.mean_net *= inv;
    agg.mean_nmu *= inv;
    agg.mean_ntmu *= inv;
    return agg;
}

double pass_at_1(const std::vector<std::pair<std::string, exec::RunStatus>>& results) {
    if (results.empty()) throw metrics_error("empty_input", "pass@1 over zero tasks");
    std::unordered_set<std::string> seen;
    std::size_t passed = 0;
    for (const auto& [id, status] : results) {
        if (!seen.insert(id).second) {
            throw metrics_error("duplicate_task", "pass@1 expects one result per task: " + id);
        }
        if (status == exec::RunStatus::passed) ++passed;
    }
    return 100.0 * static_cast<double>(passed) / static_cast<double>(results.size());
}

double overlap(const std::vector<std::string>& a, const std::vector<std::string>& b,
               std::size_t total) {
    if (total == 0) throw metrics_error("empty_input", "overlap over zero tasks");
    std::set<std::string> sa(a.begin(), a.end());
    std::set<std::string> sb(b.begin(), b.end());
    std::vector<std::string> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
    std::vector<std::string> any;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(any));
    if (any.size() > total) {
        throw metrics_error("bad_total", "total is smaller than |a ∪ b|");
    }
    return 100.0 * static_cast<double>(both.size()) / static_cast<double>(total);
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw metrics_error("bad_input", "pearson needs two equally sized series of length >= 2");
    }
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw metrics_error("undefined_correlation", "zero variance in input series");
    }
    return sxy / std::sqrt(sxx * syy);
}

EfficiencyMetrics mean_of(const std::vector<EfficiencyMetrics>& runs) {
    if (runs.empty()) throw metrics_error("empty_input", "mean over zero runs");
    EfficiencyMetrics m;
    for (const auto& r : runs) {
        m.et_s += r.et_s;
        m.mu_mb += r.mu_mb;
        m.tmu_mbs += r.tmu_mbs;
    }
    const double inv = 1.0 / static_cast<double>(runs.size());
    m.et_s *= inv;
    m.mu_mb *= inv;
    m.tmu_mbs *= inv;
    return m;
}

SelectionKey selection_key(const EfficiencyMetrics& m) {
    return SelectionKey{m.et_s, m.tmu_mbs, m.mu_mb};
}

bool key_less(const SelectionKey& a, const SelectionKey& b) {
    if (a.et_s != b.et_s) return a.et_s < b.et_s;
    if (a.tmu_mbs != b.tmu_mbs) return a.tmu_mbs < b.tmu_mbs;
    return a.mu_mb < b.mu_mb;
}

}  // namespace perfset::metrics
