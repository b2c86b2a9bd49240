// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace polsim::config {

/// Flat `key = value` text with `#` comments. Keys are unique.
class Config {
public:
    struct Entry {
        std::string value;
        std::size_t line = 0;
    };

    Config() = default;

    /// Throws ParseError on malformed lines, duplicate keys or keys not in
    /// `allowed` (when non-empty).
    static Config parse(const std::string& text, const std::string& source, const std::set<std::string>& allowed = {});
    static Config load(const std::filesystem::path& path, const std::set<std::string>& allowed = {});

    const std::string& source() const { return source_; }
    bool contains(const std::string& key) const { return entries_.contains(key); }
    std::optional<std::string> get_string(const std::string& key) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    double double_or(const std::string& key, double fallback) const;
    long long int_or(const std::string& key, long long fallback) const;
    bool bool_or(const std::string& key, bool fallback) const;
    /// Comma-separated numbers, or `start:step:stop` (inclusive).
    std::vector<double> list_or(const std::string& key, const std::vector<double>& fallback) const;

    /// Sets or replaces a value (command-line overrides).
    void set(const std::string& key, const std::string& value);

private:
    const Entry* find(const std::string& key) const;

    std::string source_ = "<config>";
    std::map<std::string, Entry> entries_;
};

}  // namespace polsim::config
