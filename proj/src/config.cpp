#include "perfset/config.hpp"

#include <fstream>

#include "perfset/error.hpp"
#include "perfset/util.hpp"

namespace perfset {

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("unreadable_file", "cannot read config file: " + path);
    Config config;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = util::trim(line);
        if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') continue;
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']') {
                throw config_error("syntax", path + ":" + std::to_string(line_no) +
                                                 ": unterminated section header");
            }
            section = util::trim(trimmed.substr(1, trimmed.size() - 2));
            continue;
        }
        auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw config_error("syntax",
                               path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = util::trim(trimmed.substr(0, eq));
        std::string value = util::trim(trimmed.substr(eq + 1));
        if (key.empty()) {
            throw config_error("syntax", path + ":" + std::to_string(line_no) + ": empty key");
        }
        config.sections_[section][key] = value;
    }
    return config;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto sit = sections_.find(section);
    return sit != sections_.end() && sit->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return fallback;
    auto kit = sit->second.find(key);
    return kit == sit->second.end() ? fallback : kit->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get(section, key, ""));
    } catch (const std::exception&) {
        throw config_error("bad_value", section + "." + key + " is not a number");
    }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoi(get(section, key, ""));
    } catch (const std::exception&) {
        throw config_error("bad_value", section + "." + key + " is not an integer");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = util::to_lower(get(section, key, ""));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("bad_value", section + "." + key + " is not a boolean");
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::vector<std::string> Config::provider_names() const {
    std::vector<std::string> names;
    for (const auto& [section, _] : sections_) {
        if (util::starts_with(section, "provider.")) {
            names.push_back(section.substr(std::string("provider.").size()));
        }
    }
    return names;
}

provider::ProviderHandle Config::provider_handle(const std::string& name) const {
    const std::string section = "provider." + name;
    if (sections_.find(section) == sections_.end()) {
        throw config_error("provider", "no [" + section + "] section in the config");
    }
    provider::ProviderHandle handle;
    handle.label = get(section, "label", name);
    std::string kind = get(section, "kind", "replay");
    if (kind == "http_chat") {
        handle.kind = provider::ProviderKind::http_chat;
    } else if (kind == "replay") {
        handle.kind = provider::ProviderKind::replay;
    } else {
        throw config_error("provider", section + ".kind must be http_chat or replay");
    }
    handle.endpoint = get(section, "endpoint", "");
    handle.model_name = get(section, "model_name", "");
    handle.api_key_env = get(section, "api_key_env", "");
    handle.max_retries = get_int(section, "max_retries", handle.max_retries);
    handle.request_timeout_s = get_double(section, "request_timeout_s", handle.request_timeout_s);
    handle.rate_limit_per_min = get_double(section, "rate_limit", handle.rate_limit_per_min);
    handle.temperature = get_double(section, "temperature", handle.temperature);
    handle.retry_backoff_ms = get_int(section, "retry_backoff_ms", handle.retry_backoff_ms);
    handle.replay_root = get(section, "replay_root", "");
    provider::validate(handle);
    return handle;
}

}  // namespace perfset
