#pragma once

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace testenv {

// Field-level diff over JSONL artifact files. Fields whose dotted path ends
// with one of `measured_fields` are allowed to differ (wall-clock, memory, and
// similar measured quantities); any other difference is reported.
struct FieldDiff {
    std::vector<std::string> differences;
    bool identical_modulo_measured() const { return differences.empty(); }
};

inline void diff_json(const nlohmann::json& a, const nlohmann::json& b, const std::string& path,
                      const std::set<std::string>& measured_fields, FieldDiff& out) {
    auto leaf = [&](const std::string& p) {
        auto pos = p.rfind('.');
        std::string last = pos == std::string::npos ? p : p.substr(pos + 1);
        return measured_fields.count(last) > 0;
    };
    if (leaf(path)) return;
    if (a.type() != b.type()) {
        out.differences.push_back(path + ": type mismatch");
        return;
    }
    if (a.is_object()) {
        std::set<std::string> keys;
        for (auto it = a.begin(); it != a.end(); ++it) keys.insert(it.key());
        for (auto it = b.begin(); it != b.end(); ++it) keys.insert(it.key());
        for (const auto& key : keys) {
            std::string sub = path.empty() ? key : path + "." + key;
            if (leaf(sub)) continue;
            if (!a.contains(key) || !b.contains(key)) {
                out.differences.push_back(sub + ": present on one side only");
                continue;
            }
            diff_json(a.at(key), b.at(key), sub, measured_fields, out);
        }
        return;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            out.differences.push_back(path + ": array length " + std::to_string(a.size()) +
                                      " vs " + std::to_string(b.size()));
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            diff_json(a[i], b[i], path + "[" + std::to_string(i) + "]", measured_fields, out);
        }
        return;
    }
    if (a != b) {
        out.differences.push_back(path + ": " + a.dump() + " vs " + b.dump());
    }
}

// Default whitelist: every measured quantity the pipeline writes.
inline const std::set<std::string>& measured_field_names() {
    static const std::set<std::string> fields = {
        "wall_time_s", "peak_mb",  "samples",  "stdout_tail", "stderr_tail",
        "et_s",        "mu_mb",    "tmu_mbs",  "net",         "nmu",
        "ntmu",        "baseline_mb",
    };
    return fields;
}

inline FieldDiff diff_jsonl_files(const std::string& path_a, const std::string& path_b,
                                  const std::set<std::string>& measured_fields) {
    FieldDiff out;
    std::ifstream in_a(path_a), in_b(path_b);
    std::string line_a, line_b;
    std::size_t line_no = 0;
    while (true) {
        bool got_a = static_cast<bool>(std::getline(in_a, line_a));
        bool got_b = static_cast<bool>(std::getline(in_b, line_b));
        ++line_no;
        if (!got_a && !got_b) break;
        if (got_a != got_b) {
            out.differences.push_back("line " + std::to_string(line_no) +
                                      ": files have different lengths");
            break;
        }
        auto ja = nlohmann::json::parse(line_a, nullptr, false);
        auto jb = nlohmann::json::parse(line_b, nullptr, false);
        if (ja.is_discarded() || jb.is_discarded()) {
            if (line_a != line_b) {
                out.differences.push_back("line " + std::to_string(line_no) + ": raw mismatch");
            }
            continue;
        }
        diff_json(ja, jb, "", measured_fields, out);
    }
    return out;
}

}  // namespace testenv
