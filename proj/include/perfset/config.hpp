#pragma once

#include <map>
#include <string>
#include <vector>

#include "perfset/provider.hpp"

namespace perfset {

// Key-value configuration with INI-style [section] headers. Full-line comments
// start with '#' or ';'. CLI flags override config values; config values
// override built-in defaults.
class Config {
public:
    Config() = default;

    static Config load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    // Names of [provider.NAME] sections.
    std::vector<std::string> provider_names() const;
    provider::ProviderHandle provider_handle(const std::string& name) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace perfset
