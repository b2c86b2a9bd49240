// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace polsim::text {

struct Token {
    std::string_view text;
    std::size_t column = 0;  ///< 1-based
};

/// Splits on any character in `separators`, trimming surrounding blanks.
/// With `keep_empty`, consecutive separators yield empty fields (CSV).
std::vector<Token> split(std::string_view line, std::string_view separators, bool keep_empty);

/// Strips a trailing '\r' and anything from '#' onward.
std::string_view strip_comment(std::string_view line);

std::vector<std::string> read_lines(const std::string& text);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// Strict numeric parsing; the whole token must be consumed. Throws
/// ParseError located at (source, line, token.column).
double parse_double(const Token& token, const std::string& source, std::size_t line);
long long parse_int(const Token& token, const std::string& source, std::size_t line);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);
/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Simple CSV table: the first non-comment line is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  ///< source line of each row

    /// Index of `name` in the header, or npos.
    std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(const std::string& text, const std::string& source);

}  // namespace polsim::text
