// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "polsim/error.hpp"

namespace {

using polsim::cli::ExitCode;

int dispatch(const std::function<int()>& run)
{
    try {
        return run();
    } catch (const polsim::cli::ConfigError& e) {
        std::cerr << "polsim: config error: " << e.what() << '\n';
        return ExitCode::kUsage;
    } catch (const polsim::ParseError& e) {
        std::cerr << "polsim: parse error: " << e.what() << '\n';
        return ExitCode::kParse;
    } catch (const polsim::NumericError& e) {
        std::cerr << "polsim: " << e.what() << '\n';
        return ExitCode::kNumeric;
    } catch (const polsim::RangeError& e) {
        std::cerr << "polsim: " << e.what() << '\n';
        return ExitCode::kNumeric;
    } catch (const polsim::InputError& e) {
        std::cerr << "polsim: invalid input: " << e.what() << '\n';
        return ExitCode::kUsage;
    } catch (const std::exception& e) {
        std::cerr << "polsim: " << e.what() << '\n';
        return ExitCode::kUsage;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polarization simulation for a satellite uplink transmitting antenna"};
    app.require_subcommand(1);

    polsim::cli::Options opts;
    std::string config;
    std::string out_dir = ".";

    using Command = int (*)(const polsim::cli::Options&, std::ostream&);
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"coating", {"Mirror coating reflectance and phase report", polsim::cli::cmd_coating}},
        {"per-map", {"Extinction-ratio map over antenna pointing directions", polsim::cli::cmd_per_map}},
        {"compensate", {"HWP compensation schedule for satellite passes", polsim::cli::cmd_compensate}},
        {"offset-scan", {"Uplink fidelity under ground and satellite angle offsets", polsim::cli::cmd_offset_scan}},
        {"bell", {"Monte Carlo ground-to-satellite CHSH test", polsim::cli::cmd_bell}},
    };
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config, "Key-value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--seed", opts.seed, "Random seed");
        sub->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "Output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::kOk : ExitCode::kUsage;
    }

    if (!config.empty()) {
        opts.config = config;
    }
    opts.out_dir = out_dir;
    opts.data_dir = polsim::cli::default_data_dir();
    for (const auto& [name, entry] : commands) {
        if (app.got_subcommand(name)) {
            const Command run = entry.second;
            return dispatch([&] { return run(opts, std::cout); });
        }
    }
    return ExitCode::kUsage;
}
