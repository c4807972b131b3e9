#pragma once
// Layered key-value configuration: defaults < file < environment < flags.
//
// File syntax is "key = value" per line with '#' comments; "[section]"
// headers prefix the keys that follow ("[retrieval]" + "alpha" ->
// "retrieval.alpha"). Environment variables are CHRONOS_ plus the key in
// upper case with dots as underscores (CHRONOS_RETRIEVAL_ALPHA).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronos/date.hpp"
#include "chronos/knowledge_store.hpp"

namespace chronos {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    Config() : values_(defaults()) {}

    static const std::map<std::string, std::string>& defaults() {
        static const std::map<std::string, std::string> d{
            {"embedding.provider", "local"},
            {"embedding.dim", "256"},
            {"embedding.endpoint", ""},
            {"embedding.model", ""},
            {"embedding.api_key_env", "CHRONOS_API_KEY"},
            {"embedding.max_in_flight", "4"},
            {"embedding.timeout_s", "30"},
            {"retrieval.alpha", "0.75"},
            {"retrieval.tau_days", "180"},
            {"retrieval.candidate_pool", "50"},
            {"retrieval.top_n", "4"},
            {"retrieval.pooled_cap", "0"},
            {"eeg.augment_rounds", "1"},
            {"eeg.view_scope", "as_of"},
            {"knowledge.start", "2024-01-01"},
            {"knowledge.end", "2025-12-31"},
            {"prompts.dir", ""},
            {"llm.backend", "scripted"},
            {"llm.endpoint", ""},
            {"llm.model", ""},
            {"llm.api_key_env", "CHRONOS_API_KEY"},
            {"llm.timeout_s", "60"},
            {"llm.retries", "3"},
            {"llm.backoff_ms", "500"},
            {"llm.max_in_flight", "4"},
            {"scripted.lexicon", ""},
            {"scripted.history", ""},
            {"scripted.cutoff", "2024-01-01"},
            {"scripted.reference_date", "2025-12-31"},
            {"eval.workers", "1"},
            {"eval.deterministic", "true"},
        };
        return d;
    }

    static bool is_path_key(const std::string& key) {
        return key == "scripted.lexicon" || key == "scripted.history" || key == "prompts.dir";
    }

    static std::string env_name(const std::string& key) {
        std::string out = "CHRONOS_";
        for (char c : key) out.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        return out;
    }

    /// Relative paths in the file resolve against the file's directory.
    void load_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
        const auto base = path.parent_path();
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto t = detail::collapse_whitespace(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[' && t.back() == ']') {
                section = detail::collapse_whitespace(t.substr(1, t.size() - 2));
                continue;
            }
            auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
            }
            std::string key = detail::collapse_whitespace(t.substr(0, eq));
            if (!section.empty()) key = section + "." + key;
            std::string value = detail::collapse_whitespace(t.substr(eq + 1));
            if (is_path_key(key) && !value.empty() && std::filesystem::path(value).is_relative()) {
                value = (base / value).lexically_normal().string();
            }
            set(key, value, path.string() + ":" + std::to_string(lineno));
        }
    }

    void apply_environment() {
        for (const auto& [key, _] : defaults()) {
            if (const char* v = std::getenv(env_name(key).c_str())) values_[key] = v;
        }
    }

    /// "key=value" strings, e.g. from repeated --set flags.
    void apply_overrides(const std::vector<std::string>& assignments) {
        for (const auto& a : assignments) {
            auto eq = a.find('=');
            if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not key=value");
            set(detail::collapse_whitespace(a.substr(0, eq)), detail::collapse_whitespace(a.substr(eq + 1)), "--set");
        }
    }

    void set(const std::string& key, const std::string& value, const std::string& origin = "code") {
        if (!defaults().contains(key)) throw ConfigError(origin + ": unknown config key '" + key + "'");
        values_[key] = value;
    }

    const std::string& get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key) const {
        const auto& v = get(key);
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError(key + ": expected a number, got '" + v + "'");
        }
    }

    long get_int(const std::string& key) const {
        const auto& v = get(key);
        try {
            std::size_t used = 0;
            long n = std::stol(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return n;
        } catch (const std::exception&) {
            throw ConfigError(key + ": expected an integer, got '" + v + "'");
        }
    }

    std::size_t get_size(const std::string& key) const {
        const long n = get_int(key);
        if (n < 0) throw ConfigError(key + ": must not be negative");
        return static_cast<std::size_t>(n);
    }

    bool get_bool(const std::string& key) const {
        const auto v = detail::ascii_lower(get(key));
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError(key + ": expected a boolean, got '" + get(key) + "'");
    }

    Date get_date(const std::string& key) const {
        Date d;
        if (!Date::try_parse(get(key), d)) throw ConfigError(key + ": expected YYYY-MM-DD, got '" + get(key) + "'");
        return d;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace chronos
