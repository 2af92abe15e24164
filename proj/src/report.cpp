#include "perfset/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "perfset/error.hpp"
#include "perfset/util.hpp"

namespace perfset::report {

namespace {

Error report_error(const std::string& code, const std::string& msg) {
    return Error(ErrorClass::input, "report." + code, msg);
}

constexpr int kValuePlaces = 2;     // metric cells in text/table output
constexpr int kCsvPlaces = 6;       // delimited output keeps more precision
constexpr int kPercentPlaces = 1;   // all percentages

std::string cell(double value, const std::optional<double>& reduction) {
    std::string out = util::format_fixed(value, kValuePlaces);
    if (reduction) {
        out += " (" + util::format_fixed(*reduction, kPercentPlaces) + "%)";
    }
    return out;
}

std::vector<std::string> row_cells(const EvaluationRow& row) {
    auto red = [&](std::size_t i) -> std::optional<double> {
        if (!row.reductions) return std::nullopt;
        return (*row.reductions)[i];
    };
    return {
        row.label,
        cell(row.et, red(0)),
        cell(row.net, red(1)),
        cell(row.mu, red(2)),
        cell(row.nmu, red(3)),
        cell(row.tmu, red(4)),
        cell(row.ntmu, red(5)),
        util::format_fixed(row.overlap_pct, kPercentPlaces),
        util::format_fixed(row.pass1_pct, kPercentPlaces),
    };
}

const std::vector<std::string> kPairedHeader = {
    "label", "ET (s)", "NET", "MU (Mb)", "NMU", "TMU (Mb*s)", "NTMU", "Overlap (%)", "Pass@1 (%)"};

std::string render_text_table(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << cells[c];
        }
        out << '\n';
    };
    emit(header);
    out << std::string(std::accumulate(widths.begin(), widths.end(), std::size_t{0}) +
                           2 * widths.size(),
                       '-')
        << '\n';
    for (const auto& row : rows) emit(row);
    return out.str();
}

std::string render_markdown_table(const std::vector<std::string>& header,
                                  const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    out << '|';
    for (const auto& h : header) out << ' ' << h << " |";
    out << "\n|";
    for (std::size_t c = 0; c < header.size(); ++c) out << " --- |";
    out << '\n';
    for (const auto& row : rows) {
        out << '|';
        for (const auto& cellv : row) out << ' ' << cellv << " |";
        out << '\n';
    }
    return out.str();
}

std::string csv_escape(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace

double reduction_pct(double baseline, double value) {
    if (baseline == 0.0) return 0.0;
    return 100.0 * (baseline - value) / baseline;
}

void attach_reductions(EvaluationRow& candidate, const EvaluationRow& baseline) {
    candidate.reductions = std::array<double, 6>{
        reduction_pct(baseline.et, candidate.et),   reduction_pct(baseline.net, candidate.net),
        reduction_pct(baseline.mu, candidate.mu),   reduction_pct(baseline.nmu, candidate.nmu),
        reduction_pct(baseline.tmu, candidate.tmu), reduction_pct(baseline.ntmu, candidate.ntmu),
    };
}

namespace {

std::set<std::string> passed_ids(const std::vector<TaskResult>& results) {
    std::set<std::string> ids;
    for (const auto& r : results) {
        if (r.status == exec::RunStatus::passed) ids.insert(r.task_id);
    }
    return ids;
}

EvaluationRow aggregate_row(const std::string& label, const std::vector<TaskResult>& results,
                            const std::set<std::string>& include_ids, double overlap_pct,
                            double pass1_pct) {
    std::vector<std::pair<metrics::EfficiencyMetrics, metrics::NormalizedMetrics>> per_task;
    for (const auto& r : results) {
        if (!include_ids.count(r.task_id)) continue;
        if (!r.metrics || !r.normalized) {
            throw report_error("missing_metrics",
                               "task " + r.task_id + " is aggregated but lacks metrics");
        }
        per_task.emplace_back(*r.metrics, *r.normalized);
    }
    auto agg = metrics::aggregate(per_task);
    EvaluationRow row;
    row.label = label;
    row.et = agg.mean_et;
    row.net = agg.mean_net;
    row.mu = agg.mean_mu;
    row.nmu = agg.mean_nmu;
    row.tmu = agg.mean_tmu;
    row.ntmu = agg.mean_ntmu;
    row.overlap_pct = overlap_pct;
    row.pass1_pct = pass1_pct;
    return row;
}

}  // namespace

PairedTable paired_table(const std::string& baseline_label,
                         const std::vector<TaskResult>& baseline,
                         const std::string& candidate_label,
                         const std::vector<TaskResult>& candidate, AggregationSet aggregation) {
    std::set<std::string> baseline_universe, candidate_universe;
    for (const auto& r : baseline) {
        if (!baseline_universe.insert(r.task_id).second) {
            throw report_error("duplicate_task", "baseline has two results for " + r.task_id);
        }
    }
    for (const auto& r : candidate) {
        if (!candidate_universe.insert(r.task_id).second) {
            throw report_error("duplicate_task", "candidate has two results for " + r.task_id);
        }
    }
    if (baseline_universe != candidate_universe) {
        throw report_error("universe_mismatch",
                           "baseline and candidate must cover the same task universe");
    }
    const std::size_t total = baseline_universe.size();
    if (total == 0) throw report_error("empty_input", "no task results given");

    auto a = passed_ids(baseline);
    auto b = passed_ids(candidate);
    std::set<std::string> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(both, both.begin()));

    const double overlap_pct = 100.0 * static_cast<double>(both.size()) / static_cast<double>(total);
    const double pass_base = 100.0 * static_cast<double>(a.size()) / static_cast<double>(total);
    const double pass_cand = 100.0 * static_cast<double>(b.size()) / static_cast<double>(total);

    if (aggregation == AggregationSet::overlap && both.empty()) {
        throw report_error("empty_overlap",
                           "no tasks solved by both sides; rerun with --aggregation own");
    }

    PairedTable table;
    table.aggregation = aggregation;
    const auto& base_set = aggregation == AggregationSet::overlap ? both : a;
    const auto& cand_set = aggregation == AggregationSet::overlap ? both : b;
    table.baseline = aggregate_row(baseline_label, baseline, base_set, overlap_pct, pass_base);
    table.candidate = aggregate_row(candidate_label, candidate, cand_set, overlap_pct, pass_cand);
    attach_reductions(table.candidate, table.baseline);
    return table;
}

std::string render(const PairedTable& table, TableFormat format) {
    if (format == TableFormat::csv) {
        std::ostringstream out;
        out << "label,ET,NET,MU,NMU,TMU,NTMU,Overlap,Pass@1,ET_red_pct,NET_red_pct,MU_red_pct,"
               "NMU_red_pct,TMU_red_pct,NTMU_red_pct\n";
        auto emit = [&](const EvaluationRow& row) {
            out << csv_escape(row.label);
            for (double v : {row.et, row.net, row.mu, row.nmu, row.tmu, row.ntmu}) {
                out << ',' << util::format_fixed(v, kCsvPlaces);
            }
            out << ',' << util::format_fixed(row.overlap_pct, kPercentPlaces);
            out << ',' << util::format_fixed(row.pass1_pct, kPercentPlaces);
            for (std::size_t i = 0; i < 6; ++i) {
                out << ',';
                if (row.reductions) out << util::format_fixed((*row.reductions)[i], kPercentPlaces);
            }
            out << '\n';
        };
        emit(table.baseline);
        emit(table.candidate);
        return out.str();
    }
    std::vector<std::vector<std::string>> rows = {row_cells(table.baseline),
                                                  row_cells(table.candidate)};
    return format == TableFormat::text ? render_text_table(kPairedHeader, rows)
                                       : render_markdown_table(kPairedHeader, rows);
}

// ---------------------------------------------------------------------------
// Robustness
// ---------------------------------------------------------------------------

namespace {

std::array<double, 6> metric_array(const metrics::AggregateMetrics& a) {
    return {a.mean_et, a.mean_net, a.mean_mu, a.mean_nmu, a.mean_tmu, a.mean_ntmu};
}

}  // namespace

RobustnessSummary robustness(const std::function<metrics::AggregateMetrics()>& runner,
                             int n_runs) {
    if (n_runs < 2) throw report_error("bad_argument", "robustness needs n_runs >= 2");
    RobustnessSummary summary;
    for (int i = 0; i < n_runs; ++i) {
        try {
            summary.runs.push_back(runner());
        } catch (const std::exception& e) {
            throw report_error("partial_summary", "evaluation run " + std::to_string(i + 1) +
                                                      " of " + std::to_string(n_runs) +
                                                      " aborted: " + e.what());
        }
    }
    summary.n_runs = summary.runs.size();

    for (std::size_t m = 0; m < 6; ++m) {
        double mean = 0.0;
        for (const auto& run : summary.runs) mean += metric_array(run)[m];
        mean /= static_cast<double>(summary.n_runs);
        double ss = 0.0;
        for (const auto& run : summary.runs) {
            const double d = metric_array(run)[m] - mean;
            ss += d * d;
        }
        summary.mean[m] = mean;
        summary.std_dev[m] = std::sqrt(ss / static_cast<double>(summary.n_runs - 1));
    }
    return summary;
}

std::string render(const RobustnessSummary& summary, TableFormat format) {
    const std::vector<std::string> header = {"run",         "ET (s)",     "NET", "MU (Mb)",
                                             "NMU",         "TMU (Mb*s)", "NTMU"};
    std::vector<std::vector<std::string>> rows;
    auto make_row = [](const std::string& label, const std::array<double, 6>& vals, int places) {
        std::vector<std::string> row = {label};
        for (double v : vals) row.push_back(util::format_fixed(v, places));
        return row;
    };
    for (std::size_t i = 0; i < summary.runs.size(); ++i) {
        rows.push_back(make_row("execution " + std::to_string(i + 1),
                                metric_array(summary.runs[i]), kValuePlaces));
    }
    rows.push_back(make_row("mean", summary.mean, 3));
    rows.push_back(make_row("std (sample, n-1)", summary.std_dev, 3));

    if (format == TableFormat::csv) {
        std::ostringstream out;
        out << "run,ET,NET,MU,NMU,TMU,NTMU\n";
        for (std::size_t i = 0; i < summary.runs.size(); ++i) {
            out << "execution " << (i + 1);
            for (double v : metric_array(summary.runs[i])) {
                out << ',' << util::format_fixed(v, kCsvPlaces);
            }
            out << '\n';
        }
        out << "mean";
        for (double v : summary.mean) out << ',' << util::format_fixed(v, kCsvPlaces);
        out << "\nstd (sample n-1)";
        for (double v : summary.std_dev) out << ',' << util::format_fixed(v, kCsvPlaces);
        out << '\n';
        return out.str();
    }
    return format == TableFormat::text ? render_text_table(header, rows)
                                       : render_markdown_table(header, rows);
}

// ---------------------------------------------------------------------------
// Distribution summary
// ---------------------------------------------------------------------------

DistributionSummary distribution_summary(
    const std::vector<std::pair<metrics::EfficiencyMetrics, metrics::EfficiencyMetrics>>& pairs) {
    if (pairs.empty()) throw report_error("empty_input", "no metric pairs given");
    DistributionSummary s;
    s.n_pairs = pairs.size();
    for (const auto& [initial, efficient] : pairs) {
        s.initial_mean.et_s += initial.et_s;
        s.initial_mean.mu_mb += initial.mu_mb;
        s.initial_mean.tmu_mbs += initial.tmu_mbs;
        s.efficient_mean.et_s += efficient.et_s;
        s.efficient_mean.mu_mb += efficient.mu_mb;
        s.efficient_mean.tmu_mbs += efficient.tmu_mbs;
    }
    const double inv = 1.0 / static_cast<double>(pairs.size());
    s.initial_mean.et_s *= inv;
    s.initial_mean.mu_mb *= inv;
    s.initial_mean.tmu_mbs *= inv;
    s.efficient_mean.et_s *= inv;
    s.efficient_mean.mu_mb *= inv;
    s.efficient_mean.tmu_mbs *= inv;
    s.et_ratio = s.efficient_mean.et_s == 0.0 ? 0.0 : s.initial_mean.et_s / s.efficient_mean.et_s;
    s.mu_ratio = s.efficient_mean.mu_mb == 0.0 ? 0.0 : s.initial_mean.mu_mb / s.efficient_mean.mu_mb;
    s.tmu_ratio =
        s.efficient_mean.tmu_mbs == 0.0 ? 0.0 : s.initial_mean.tmu_mbs / s.efficient_mean.tmu_mbs;
    return s;
}

std::string render(const DistributionSummary& summary, TableFormat format) {
    const std::vector<std::string> header = {"population", "mean ET (s)", "mean MU (Mb)",
                                             "mean TMU (Mb*s)"};
    std::vector<std::vector<std::string>> rows = {
        {"initial", util::format_fixed(summary.initial_mean.et_s, kValuePlaces),
         util::format_fixed(summary.initial_mean.mu_mb, kValuePlaces),
         util::format_fixed(summary.initial_mean.tmu_mbs, kValuePlaces)},
        {"efficient", util::format_fixed(summary.efficient_mean.et_s, kValuePlaces),
         util::format_fixed(summary.efficient_mean.mu_mb, kValuePlaces),
         util::format_fixed(summary.efficient_mean.tmu_mbs, kValuePlaces)},
        {"ratio (initial/efficient)", util::format_fixed(summary.et_ratio, kValuePlaces),
         util::format_fixed(summary.mu_ratio, kValuePlaces),
         util::format_fixed(summary.tmu_ratio, kValuePlaces)},
    };
    if (format == TableFormat::csv) {
        std::ostringstream out;
        out << "population,ET,MU,TMU\n";
        out << "initial," << util::format_fixed(summary.initial_mean.et_s, kCsvPlaces) << ','
            << util::format_fixed(summary.initial_mean.mu_mb, kCsvPlaces) << ','
            << util::format_fixed(summary.initial_mean.tmu_mbs, kCsvPlaces) << '\n';
        out << "efficient," << util::format_fixed(summary.efficient_mean.et_s, kCsvPlaces) << ','
            << util::format_fixed(summary.efficient_mean.mu_mb, kCsvPlaces) << ','
            << util::format_fixed(summary.efficient_mean.tmu_mbs, kCsvPlaces) << '\n';
        out << "ratio," << util::format_fixed(summary.et_ratio, kCsvPlaces) << ','
            << util::format_fixed(summary.mu_ratio, kCsvPlaces) << ','
            << util::format_fixed(summary.tmu_ratio, kCsvPlaces) << '\n';
        return out.str();
    }
    return format == TableFormat::text ? render_text_table(header, rows)
                                       : render_markdown_table(header, rows);
}

std::optional<TableFormat> parse_table_format(const std::string& text) {
    if (text == "text") return TableFormat::text;
    if (text == "csv") return TableFormat::csv;
    if (text == "table") return TableFormat::table;
    return std::nullopt;
}

}  // namespace perfset::report
