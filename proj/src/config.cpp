// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/config.hpp"

#include <cmath>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"

namespace polsim::config {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source, const std::set<std::string>& allowed)
{
    Config cfg;
    cfg.source_ = source;
    const auto lines = text::read_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto body = trim(text::strip_comment(lines[i]));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(source, line_no, 1, "expected 'key = value'");
        }
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) {
            throw ParseError(source, line_no, 1, "missing key");
        }
        if (value.empty()) {
            throw ParseError(source, line_no, eq + 2, "missing value for '" + key + "'");
        }
        if (!allowed.empty() && !allowed.contains(key)) {
            throw ParseError(source, line_no, 1, "unknown key '" + key + "'");
        }
        if (cfg.entries_.contains(key)) {
            throw ParseError(source, line_no, 1, "duplicate key '" + key + "'");
        }
        cfg.entries_[key] = {value, line_no};
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path, const std::set<std::string>& allowed)
{
    return parse(text::read_file(path), path.string(), allowed);
}

const Config::Entry* Config::find(const std::string& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> Config::get_string(const std::string& key) const
{
    if (const auto* e = find(key)) {
        return e->value;
    }
    return std::nullopt;
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const
{
    return get_string(key).value_or(fallback);
}

double Config::double_or(const std::string& key, double fallback) const
{
    const auto* e = find(key);
    if (!e) {
        return fallback;
    }
    const double v = text::parse_double({e->value, 1}, source_ + " (" + key + ")", e->line);
    if (!std::isfinite(v)) {
        throw ParseError(source_, e->line, 1, "'" + key + "' must be finite");
    }
    return v;
}

long long Config::int_or(const std::string& key, long long fallback) const
{
    const auto* e = find(key);
    return e ? text::parse_int({e->value, 1}, source_ + " (" + key + ")", e->line) : fallback;
}

bool Config::bool_or(const std::string& key, bool fallback) const
{
    const auto* e = find(key);
    if (!e) {
        return fallback;
    }
    if (e->value == "true" || e->value == "1") {
        return true;
    }
    if (e->value == "false" || e->value == "0") {
        return false;
    }
    throw ParseError(source_, e->line, 1, "'" + key + "' must be true or false");
}

std::vector<double> Config::list_or(const std::string& key, const std::vector<double>& fallback) const
{
    const auto* e = find(key);
    if (!e) {
        return fallback;
    }
    const std::string where = source_ + " (" + key + ")";
    std::vector<double> out;
    if (e->value.find(':') != std::string::npos) {
        const auto parts = text::split(e->value, ":", true);
        if (parts.size() != 3) {
            throw ParseError(source_, e->line, 1, "range must be start:step:stop");
        }
        const double start = text::parse_double({trim(parts[0].text), 1}, where, e->line);
        const double step = text::parse_double({trim(parts[1].text), 1}, where, e->line);
        const double stop = text::parse_double({trim(parts[2].text), 1}, where, e->line);
        if (!(step > 0.0) || stop < start) {
            throw ParseError(source_, e->line, 1, "range needs step > 0 and stop >= start");
        }
        const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        if (n > 1000000) {
            throw ParseError(source_, e->line, 1, "range has too many points");
        }
        for (long long i = 0; i <= n; ++i) {
            out.push_back(start + static_cast<double>(i) * step);
        }
        return out;
    }
    for (const auto& tok : text::split(e->value, ",", true)) {
        out.push_back(text::parse_double({trim(tok.text), tok.column}, where, e->line));
    }
    return out;
}

void Config::set(const std::string& key, const std::string& value)
{
    entries_[key] = {value, 0};
}

}  // namespace polsim::config
