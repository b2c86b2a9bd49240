// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polsim/error.hpp"

namespace polsim::text {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::pair<std::size_t, std::size_t> trim_range(std::string_view s, std::size_t begin, std::size_t end)
{
    while (begin < end && is_blank(s[begin])) {
        ++begin;
    }
    while (end > begin && is_blank(s[end - 1])) {
        --end;
    }
    return {begin, end};
}

}  // namespace

std::vector<Token> split(std::string_view line, std::string_view separators, bool keep_empty)
{
    std::vector<Token> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || separators.find(line[i]) != std::string_view::npos) {
            const auto [b, e] = trim_range(line, start, i);
            if (keep_empty || e > b) {
                out.push_back({line.substr(b, e - b), b + 1});
            }
            start = i + 1;
        }
    }
    return out;
}

std::string_view strip_comment(std::string_view line)
{
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.remove_suffix(1);
    }
    return line;
}

std::vector<std::string> read_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::string current;
    std::istringstream in(text);
    while (std::getline(in, current)) {
        if (!current.empty() && current.back() == '\r') {
            current.pop_back();
        }
        lines.push_back(current);
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << contents;
}

double parse_double(const Token& token, const std::string& source, std::size_t line)
{
    auto text = token.text;
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(source, line, token.column, "expected a number, got '" + std::string(token.text) + "'");
    }
    return value;
}

long long parse_int(const Token& token, const std::string& source, std::size_t line)
{
    auto text = token.text;
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    long long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw ParseError(source, line, token.column, "expected an integer, got '" + std::string(token.text) + "'");
    }
    return value;
}

std::string format_double(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string format_fixed(double value, int decimals)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    std::string s(buf, ptr);
    if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);  // no "-0.000"
    }
    return s;
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::string::npos;
}

CsvTable parse_csv(const std::string& text, const std::string& source)
{
    CsvTable table;
    const auto lines = read_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto body = strip_comment(lines[i]);
        if (body.find_first_not_of(" \t") == std::string_view::npos) {
            continue;
        }
        const auto fields = split(body, ",", true);
        std::vector<std::string> values;
        values.reserve(fields.size());
        for (const auto& f : fields) {
            values.emplace_back(f.text);
        }
        if (table.header.empty()) {
            table.header = std::move(values);
            continue;
        }
        if (values.size() != table.header.size()) {
            throw ParseError(source, i + 1, 0,
                             "expected " + std::to_string(table.header.size()) + " fields, got " +
                                 std::to_string(values.size()));
        }
        table.rows.push_back(std::move(values));
        table.row_lines.push_back(i + 1);
    }
    if (table.header.empty()) {
        throw ParseError(source, 1, 0, "empty CSV, header expected");
    }
    return table;
}

}  // namespace polsim::text
