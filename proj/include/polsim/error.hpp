// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polsim {

/// Invalid argument to a model operation (non-finite angle, gain medium, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed text input. Carries a 1-based line and column; column 0 means
/// the whole line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string source_;
    std::size_t line_;
    std::size_t column_;
};

/// A solver failed to converge or an estimator had no data.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double residual = 0.0);

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Request outside the validity range of a model (e.g. propagation horizon).
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace polsim
