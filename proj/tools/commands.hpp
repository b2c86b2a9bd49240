// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace polsim::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kNumeric = 3,
};

/// Error raised while reading the run configuration; maps to kUsage.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::optional<std::filesystem::path> config;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::filesystem::path out_dir = ".";
    std::filesystem::path data_dir;
};

/// POLSIM_DATA_DIR if set, otherwise the directory baked in at build time.
std::filesystem::path default_data_dir();

int cmd_coating(const Options& opts, std::ostream& out);
int cmd_per_map(const Options& opts, std::ostream& out);
int cmd_compensate(const Options& opts, std::ostream& out);
int cmd_offset_scan(const Options& opts, std::ostream& out);
int cmd_bell(const Options& opts, std::ostream& out);

}  // namespace polsim::cli
