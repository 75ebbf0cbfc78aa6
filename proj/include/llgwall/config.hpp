#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "llgwall/errors.hpp"

namespace llgwall {

// Flat key=value configuration. Blank lines and lines starting with '#' are
// ignored; keys must be unique and drawn from a known set.
class Config {
  public:
    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw config_error("config: cannot open file '" + path + "'");
        return parse_stream(in, path);
    }

    static Config parse_stream(std::istream& in, const std::string& origin = "<stream>") {
        Config cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string trimmed = trim(line);
            if (trimmed.empty() || trimmed[0] == '#') continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw config_error("config: " + origin + ":" + std::to_string(lineno) +
                                   ": expected key=value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw config_error("config: " + origin + ":" + std::to_string(lineno) +
                                   ": empty key");
            if (cfg.kv_.count(key))
                throw config_error("config: duplicate key '" + key + "'");
            cfg.kv_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        char* end = nullptr;
        const double v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0')
            throw config_error("config: key '" + key + "' is not a number: '" +
                               it->second + "'");
        return v;
    }

    long get_long(const std::string& key, long fallback) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        char* end = nullptr;
        const long v = std::strtol(it->second.c_str(), &end, 10);
        if (end == it->second.c_str() || *end != '\0')
            throw config_error("config: key '" + key + "' is not an integer: '" +
                               it->second + "'");
        return v;
    }

    // Rejects any key outside the known set.
    void require_known(const std::vector<std::string>& known) const {
        for (const auto& [key, value] : kv_) {
            bool ok = false;
            for (const auto& k : known)
                if (k == key) { ok = true; break; }
            if (!ok)
                throw config_error("config: unknown key '" + key + "'");
        }
    }

  private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return {};
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    std::map<std::string, std::string> kv_;
};

} // namespace llgwall
