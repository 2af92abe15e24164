#include "perfset/curate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "perfset/error.hpp"

namespace perfset::curate {

std::optional<std::size_t> select_best(const std::vector<MeasuredCandidate>& measured) {
    if (measured.empty()) throw input_error("bad_argument", "select_best over zero candidates");
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        const auto& mc = measured[i];
        if (mc.status != exec::RunStatus::passed || !mc.metrics) continue;
        if (!best) {
            best = i;
            continue;
        }
        if (metrics::key_less(metrics::selection_key(*mc.metrics),
                              metrics::selection_key(*measured[*best].metrics))) {
            best = i;
        }
    }
    return best;
}

ImprovementDecision require_improvement(const metrics::EfficiencyMetrics& chosen,
                                        const metrics::EfficiencyMetrics& initial, double delta,
                                        double rho) {
    if (initial.et_s <= 0.0 || initial.tmu_mbs <= 0.0 || initial.mu_mb <= 0.0) {
        return ImprovementDecision{false, "degenerate_canonical"};
    }
    const bool faster_enough = chosen.et_s <= (1.0 - delta) * initial.et_s &&
                               chosen.tmu_mbs <= (1.0 + rho) * initial.tmu_mbs;
    const bool leaner_enough = chosen.tmu_mbs <= (1.0 - delta) * initial.tmu_mbs &&
                               chosen.et_s <= (1.0 + rho) * initial.et_s;
    if (faster_enough || leaner_enough) return ImprovementDecision{true, ""};
    return ImprovementDecision{false, "no_improvement"};
}

namespace {

nlohmann::json metrics_json(const metrics::EfficiencyMetrics& m) {
    return {{"et_s", m.et_s}, {"mu_mb", m.mu_mb}, {"tmu_mbs", m.tmu_mbs}};
}

metrics::EfficiencyMetrics metrics_from(const nlohmann::json& j) {
    return metrics::EfficiencyMetrics{j.at("et_s").get<double>(), j.at("mu_mb").get<double>(),
                                      j.at("tmu_mbs").get<double>()};
}

}  // namespace

nlohmann::json to_json(const CuratedRecord& record) {
    return {
        {"task_id", record.task_id},
        {"language", to_string(record.language)},
        {"instruction", record.instruction},
        {"response", record.response},
        {"chosen_metrics", metrics_json(record.chosen_metrics)},
        {"initial_metrics", metrics_json(record.initial_metrics)},
        {"normalized",
         {{"net", record.normalized.net},
          {"nmu", record.normalized.nmu},
          {"ntmu", record.normalized.ntmu}}},
        {"provider_label", record.provider_label},
        {"source_dataset", record.source_dataset},
        {"environment_label", record.environment_label},
    };
}

CuratedRecord curated_from_json(const nlohmann::json& j) {
    CuratedRecord r;
    r.task_id = j.at("task_id").get<std::string>();
    auto lang = parse_language(j.at("language").get<std::string>());
    if (!lang) throw input_error("bad_record", "unknown language in curated record " + r.task_id);
    r.language = *lang;
    r.instruction = j.at("instruction").get<std::string>();
    r.response = j.at("response").get<std::string>();
    r.chosen_metrics = metrics_from(j.at("chosen_metrics"));
    r.initial_metrics = metrics_from(j.at("initial_metrics"));
    const auto& n = j.at("normalized");
    r.normalized = metrics::NormalizedMetrics{n.at("net").get<double>(), n.at("nmu").get<double>(),
                                              n.at("ntmu").get<double>()};
    r.provider_label = j.at("provider_label").get<std::string>();
    r.source_dataset = j.at("source_dataset").get<std::string>();
    r.environment_label = j.value("environment_label", std::string{});
    return r;
}

namespace {

void validate_record(const CuratedRecord& r) {
    if (r.task_id.empty() || r.response.empty() || r.instruction.empty()) {
        throw input_error("bad_record", "curated record has empty required fields: " + r.task_id);
    }
    if (!(r.normalized.net < 1.0 || r.normalized.ntmu < 1.0)) {
        throw input_error("bad_record",
                          "curated record " + r.task_id + " shows no efficiency improvement");
    }
}

}  // namespace

EmitSummary emit_dataset(const std::vector<CuratedRecord>& records, const std::string& out_path) {
    for (const auto& r : records) validate_record(r);

    std::vector<const CuratedRecord*> ordered;
    ordered.reserve(records.size());
    for (const auto& r : records) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const CuratedRecord* a, const CuratedRecord* b) {
                         return a->task_id < b->task_id;
                     });

    EmitSummary summary;
    JsonlWriter writer(out_path, "curated");
    for (const CuratedRecord* r : ordered) {
        writer.write(to_json(*r));
        ++summary.n_records;
        ++summary.per_language[to_string(r->language)];
        ++summary.per_source[r->source_dataset];
        ++summary.matrix[{to_string(r->language), r->source_dataset}];
    }
    return summary;
}

std::vector<CuratedRecord> parse_dataset(const std::string& path) {
    std::vector<CuratedRecord> records;
    for (const auto& j : read_jsonl(path, "curated")) records.push_back(curated_from_json(j));
    return records;
}

std::string render_summary(const EmitSummary& summary) {
    std::ostringstream out;
    std::set<std::string> sources;
    for (const auto& [source, _] : summary.per_source) sources.insert(source);

    out << "language";
    for (const auto& source : sources) out << '\t' << source;
    out << "\ttotal\n";
    for (const auto& [language, total] : summary.per_language) {
        out << language;
        for (const auto& source : sources) {
            auto it = summary.matrix.find({language, source});
            out << '\t' << (it == summary.matrix.end() ? 0 : it->second);
        }
        out << '\t' << total << '\n';
    }
    out << "total";
    for (const auto& source : sources) {
        auto it = summary.per_source.find(source);
        out << '\t' << (it == summary.per_source.end() ? 0 : it->second);
    }
    out << '\t' << summary.n_records << '\n';
    return out.str();
}

}  // namespace perfset::curate
