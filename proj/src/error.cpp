// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/error.hpp"

#include <sstream>
#include <utility>

namespace polsim {

namespace {

std::string format_location(const std::string& source, std::size_t line, std::size_t column,
                            const std::string& what)
{
    std::ostringstream os;
    os << (source.empty() ? "<input>" : source) << ":" << line;
    if (column > 0) {
        os << ":" << column;
    }
    os << ": " << what;
    return os.str();
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(format_location(source, line, column, what)),
      source_(std::move(source)),
      line_(line),
      column_(column)
{
}

NumericError::NumericError(const std::string& what, double residual)
    : std::runtime_error(what), residual_(residual)
{
}

}  // namespace polsim
