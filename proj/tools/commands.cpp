// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "polsim/antenna.hpp"
#include "polsim/compensation.hpp"
#include "polsim/config.hpp"
#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/link_sim.hpp"
#include "polsim/orbit.hpp"
#include "polsim/parallel.hpp"
#include "polsim/thinfilm.hpp"
#include "polsim/tle.hpp"

#ifndef POLSIM_DEFAULT_DATA_DIR
#define POLSIM_DEFAULT_DATA_DIR "data"
#endif

namespace polsim::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using text::format_fixed;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const std::set<std::string> kCoatingKeys = {"coating", "stack_file", "coating_angle_deg", "coating_wavelength_nm",
                                            "mirror_rs_power", "mirror_rp_power", "mirror_phase_pi"};

std::set<std::string> with_coating_keys(std::set<std::string> keys)
{
    keys.insert(kCoatingKeys.begin(), kCoatingKeys.end());
    return keys;
}

config::Config load_config(const Options& opts, const std::set<std::string>& allowed)
{
    if (!opts.config) {
        return {};
    }
    try {
        return config::Config::load(*opts.config, allowed);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

/// Relative paths are tried against the working directory, then the data directory.
fs::path resolve(const Options& opts, const std::string& name)
{
    const fs::path p(name);
    if (p.is_absolute() || fs::exists(p)) {
        return p;
    }
    return opts.data_dir / p;
}

void write_output(const Options& opts, const std::string& name, const std::string& contents)
{
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + opts.out_dir.string() + ": " + ec.message());
    }
    try {
        text::write_file(opts.out_dir / name, contents);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

struct CoatingSpec {
    std::string kind = "measured";
    std::string stack_file = "reference_stack.txt";
    double angle_deg = 45.0;
    double wavelength_nm = 780.0;
    double rs = 0.999908;
    double rp = 0.998168;
    double phase_pi = 0.9996;
};

CoatingSpec read_coating(const config::Config& cfg, const std::string& fallback_kind)
{
    CoatingSpec c;
    c.kind = cfg.string_or("coating", fallback_kind);
    c.stack_file = cfg.string_or("stack_file", c.stack_file);
    c.angle_deg = cfg.double_or("coating_angle_deg", c.angle_deg);
    c.wavelength_nm = cfg.double_or("coating_wavelength_nm", c.wavelength_nm);
    c.rs = cfg.double_or("mirror_rs_power", c.rs);
    c.rp = cfg.double_or("mirror_rp_power", c.rp);
    c.phase_pi = cfg.double_or("mirror_phase_pi", c.phase_pi);
    if (c.kind != "measured" && c.kind != "ideal" && c.kind != "stack" && c.kind != "custom") {
        throw ConfigError("coating must be one of measured, ideal, stack, custom");
    }
    if (c.kind == "measured" && (cfg.contains("mirror_rs_power") || cfg.contains("mirror_rp_power") ||
                              cfg.contains("mirror_phase_pi"))) {
        throw ConfigError("mirror_* keys need coating = custom");
    }
    return c;
}

jones::MirrorResponse build_coating(const Options& opts, const CoatingSpec& c)
{
    if (c.kind == "ideal") {
        return jones::MirrorResponse::ideal();
    }
    if (c.kind == "stack") {
        const auto stack = thinfilm::load_stack(resolve(opts, c.stack_file));
        return thinfilm::stack_response(stack, {c.angle_deg * kDeg, c.wavelength_nm});
    }
    try {
        return jones::MirrorResponse::from_power_and_phase(c.rs, c.rp, c.phase_pi * std::numbers::pi);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

json coating_json(const CoatingSpec& c, const jones::MirrorResponse& m)
{
    json j;
    j["kind"] = c.kind;
    if (c.kind == "stack") {
        j["stack_file"] = c.stack_file;
        j["angle_deg"] = c.angle_deg;
        j["wavelength_nm"] = c.wavelength_nm;
    }
    j["rs_power"] = m.power_s();
    j["rp_power"] = m.power_p();
    j["phase_difference_over_pi"] = m.phase_difference() / std::numbers::pi;
    return j;
}

jones::PolarizationState parse_state(const std::string& label)
{
    for (const auto& s : antenna::standard_states()) {
        if (s.label == label) {
            return s.state;
        }
    }
    throw ConfigError("input_state must be one of H, V, +, -");
}

template <typename Fn>
auto reading_config(Fn&& fn)
{
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

fs::path default_data_dir()
{
    if (const char* env = std::getenv("POLSIM_DATA_DIR"); env && *env) {
        return env;
    }
    return POLSIM_DEFAULT_DATA_DIR;
}

// ---------------------------------------------------------------------------

int cmd_coating(const Options& opts, std::ostream& out)
{
    const auto cfg = load_config(opts, {"stack_file", "angle_deg", "wavelengths_nm"});
    struct {
        std::string stack_file;
        double angle_deg;
        std::vector<double> wavelengths;
    } s = reading_config([&] {
        return decltype(s){cfg.string_or("stack_file", "reference_stack.txt"), cfg.double_or("angle_deg", 45.0),
                           cfg.list_or("wavelengths_nm", {780.0, 532.0})};
    });
    if (s.wavelengths.empty()) {
        throw ConfigError("wavelengths_nm must not be empty");
    }
    const auto stack = thinfilm::load_stack(resolve(opts, s.stack_file));

    json report;
    report["stack_file"] = s.stack_file;
    report["layer_count"] = stack.layers.size();
    report["angle_deg"] = s.angle_deg;
    report["results"] = json::array();
    for (double wl : s.wavelengths) {
        const auto m = thinfilm::stack_response(stack, {s.angle_deg * kDeg, wl});
        const double avg = 0.5 * (m.power_s() + m.power_p());
        json row;
        row["wavelength_nm"] = wl;
        row["rs_power"] = m.power_s();
        row["rp_power"] = m.power_p();
        row["phase_difference_over_pi"] = m.phase_difference() / std::numbers::pi;
        row["average_reflectance"] = avg;
        report["results"].push_back(row);
        out << "wavelength " << format_fixed(wl, 1) << " nm: |r_s|^2 = " << format_fixed(m.power_s(), 6)
            << ", |r_p|^2 = " << format_fixed(m.power_p(), 6)
            << ", dphi/pi = " << format_fixed(m.phase_difference() / std::numbers::pi, 5)
            << ", average = " << format_fixed(avg, 6) << '\n';
    }
    write_output(opts, "coating.json", report.dump(2) + "\n");
    return kOk;
}

int cmd_per_map(const Options& opts, std::ostream& out)
{
    const auto cfg =
        load_config(opts, with_coating_keys({"elevations_deg", "azimuths_deg", "states", "zero_point_deg"}));
    struct {
        CoatingSpec coating;
        std::vector<double> elevations, azimuths;
        std::string states;
        double zero_point;
    } s = reading_config([&] {
        return decltype(s){read_coating(cfg, "measured"), cfg.list_or("elevations_deg", {30.0, 50.0, 70.0}),
                           cfg.list_or("azimuths_deg", {-180.0, -135.0, -90.0, -45.0, 0.0, 45.0, 90.0, 135.0}),
                           cfg.string_or("states", "H,V,+,-"), cfg.double_or("zero_point_deg", 145.8)};
    });
    std::vector<antenna::LabeledState> states;
    for (const auto& tok : text::split(s.states, ",", true)) {
        const std::string label(tok.text);
        states.push_back({label, parse_state(label)});
    }
    if (s.elevations.empty() || s.azimuths.empty() || states.empty()) {
        throw ConfigError("per-map grid must not be empty");
    }
    const auto coating = build_coating(opts, s.coating);
    antenna::AntennaModel model;
    model.reference_rotation = compensation::reference_rotation_for_zero_point(s.zero_point);
    const auto cells = reading_config(
        [&] { return antenna::antenna_per_scan(model, coating, s.elevations, s.azimuths, states, opts.jobs); });
    const auto sum = antenna::summarize(cells);

    json summary;
    summary["coating"] = coating_json(s.coating, coating);
    summary["cells"] = cells.size();
    summary["min_per"] = sum.min_per;
    summary["mean_per"] = sum.mean_per;
    summary["min_fidelity"] = sum.min_fidelity;
    summary["mean_fidelity"] = sum.mean_fidelity;
    write_output(opts, "per_map.csv", antenna::per_scan_csv(cells));
    write_output(opts, "per_map.json", summary.dump(2) + "\n");
    out << cells.size() << " cells, min PER " << format_fixed(sum.min_per, 1) << ", mean PER "
        << format_fixed(sum.mean_per, 1) << '\n';
    return kOk;
}

int cmd_compensate(const Options& opts, std::ostream& out)
{
    const auto cfg = load_config(
        opts, with_coating_keys({"tle_file", "pass_file", "station_latitude_deg", "station_longitude_deg",
                                 "station_altitude_m", "start_utc", "window_s", "threshold_deg", "step_s",
                                 "beta_model", "direction", "zero_point_deg", "sign", "max_slew_deg_per_s",
                                 "max_step_deg", "input_state"}));
    struct Settings {
        CoatingSpec coating;
        std::string tle_file, pass_file, start, beta_model, direction, input_state;
        orbit::GroundStation station;
        double window_s;
        orbit::PassOptions pass_options;
        compensation::CompensationConfig comp;
    };
    const Settings s = reading_config([&] {
        Settings r;
        r.coating = read_coating(cfg, "measured");
        r.tle_file = cfg.string_or("tle_file", "micius_synthetic.tle");
        r.pass_file = cfg.string_or("pass_file", "");
        r.start = cfg.string_or("start_utc", "");
        r.beta_model = cfg.string_or("beta_model", "roll");
        r.direction = cfg.string_or("direction", "any");
        r.input_state = cfg.string_or("input_state", "H");
        const auto ngari = orbit::GroundStation::ngari();
        r.station = {cfg.double_or("station_latitude_deg", ngari.latitude_deg),
                     cfg.double_or("station_longitude_deg", ngari.longitude_deg),
                     cfg.double_or("station_altitude_m", ngari.altitude_m)};
        r.station.validate();
        r.window_s = cfg.double_or("window_s", 86400.0);
        r.pass_options.threshold_deg = cfg.double_or("threshold_deg", 10.0);
        r.pass_options.step_s = cfg.double_or("step_s", 1.0);
        r.comp.zero_point_deg = cfg.double_or("zero_point_deg", r.comp.zero_point_deg);
        r.comp.sign = static_cast<int>(cfg.int_or("sign", r.comp.sign));
        r.comp.max_slew_deg_per_s = cfg.double_or("max_slew_deg_per_s", r.comp.max_slew_deg_per_s);
        r.comp.max_step_deg = cfg.double_or("max_step_deg", r.comp.max_step_deg);
        r.comp.validate();
        if (r.beta_model == "roll") {
            r.pass_options.beta_model = orbit::BetaModel::roll;
        } else if (r.beta_model == "nadir_fixed") {
            r.pass_options.beta_model = orbit::BetaModel::nadir_fixed;
        } else {
            throw ConfigError("beta_model must be roll or nadir_fixed");
        }
        if (r.direction != "any" && r.direction != "north_to_south") {
            throw ConfigError("direction must be any or north_to_south");
        }
        if (!(r.window_s > 0.0) || !(r.pass_options.step_s > 0.0)) {
            throw ConfigError("window_s and step_s must be positive");
        }
        return r;
    });
    const auto input = parse_state(s.input_state);
    const auto coating = build_coating(opts, s.coating);

    std::vector<orbit::PassProfile> passes;
    if (!s.pass_file.empty()) {
        const auto path = resolve(opts, s.pass_file);
        passes.push_back(orbit::parse_pass_csv(text::read_file(path), path.string()));
    } else {
        const auto path = resolve(opts, s.tle_file);
        const auto record = tle::parse_tle(text::read_file(path), path.string());
        const UtcInstant start =
            s.start.empty() ? record.epoch() : reading_config([&] { return parse_iso8601(s.start); });
        passes = orbit::extract_passes(record, s.station, start, s.window_s, s.pass_options);
    }
    if (s.direction == "north_to_south") {
        std::erase_if(passes, [](const orbit::PassProfile& p) {
            return std::cos(p.samples.front().azimuth_deg * kDeg) <= 0.0 ||
                   std::cos(p.samples.back().azimuth_deg * kDeg) >= 0.0;
        });
    }
    if (passes.empty()) {
        throw NumericError("no pass above the elevation threshold in the search window");
    }

    antenna::AntennaModel model;
    model.reference_rotation = compensation::reference_rotation_for_zero_point(s.comp.zero_point_deg);
    json summary;
    summary["coating"] = coating_json(s.coating, coating);
    summary["passes"] = json::array();
    for (std::size_t k = 0; k < passes.size(); ++k) {
        const auto& pass = passes[k];
        const auto schedule = compensation::schedule_from_pass(pass, s.comp);
        const auto fid = compensation::verify_compensation(pass, model, coating, input, s.comp);
        const double min_fid = *std::min_element(fid.begin(), fid.end());
        const std::string stem = "pass_" + std::to_string(k + 1);
        write_output(opts, stem + ".csv", orbit::pass_csv(pass));
        write_output(opts, stem + "_schedule.csv", compensation::schedule_csv(schedule));
        write_output(opts, stem + "_schedule.json", compensation::schedule_metadata_json(schedule));

        json p;
        p["index"] = k + 1;
        p["start_utc"] = to_iso8601(pass.samples.front().t);
        p["end_utc"] = to_iso8601(pass.samples.back().t);
        p["samples"] = pass.samples.size();
        p["max_elevation_deg"] = pass.max_elevation();
        p["max_rate_deg_per_s"] = schedule.max_rate_deg_per_s;
        p["min_fidelity"] = min_fid;
        p["warnings"] = schedule.warnings;
        summary["passes"].push_back(p);
        out << stem << ": " << to_iso8601(pass.samples.front().t) << " .. " << to_iso8601(pass.samples.back().t)
            << ", max el " << format_fixed(pass.max_elevation(), 2) << " deg, max rate "
            << format_fixed(schedule.max_rate_deg_per_s, 4) << " deg/s, min fidelity " << format_fixed(min_fid, 6)
            << (schedule.warnings.empty() ? "" : ", " + std::to_string(schedule.warnings.size()) + " warning(s)")
            << '\n';
    }
    write_output(opts, "compensate.json", summary.dump(2) + "\n");
    return kOk;
}

int cmd_offset_scan(const Options& opts, std::ostream& out)
{
    const auto cfg = load_config(opts, with_coating_keys({"ground_offsets_deg", "sat_offsets_deg", "input_state",
                                                          "zero_point_deg", "sign", "geometry_theta_deg",
                                                          "geometry_phi_deg", "geometry_beta_deg"}));
    struct Settings {
        CoatingSpec coating;
        std::vector<double> ground, sat, theta, phi, beta;
        std::string input_state;
        compensation::CompensationConfig comp;
    };
    const Settings s = reading_config([&] {
        Settings r;
        r.coating = read_coating(cfg, "measured");
        r.ground = cfg.list_or("ground_offsets_deg", {-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5});
        r.sat = cfg.list_or("sat_offsets_deg", {0.0, -1.0});
        r.input_state = cfg.string_or("input_state", "H");
        r.comp.zero_point_deg = cfg.double_or("zero_point_deg", r.comp.zero_point_deg);
        r.comp.sign = static_cast<int>(cfg.int_or("sign", r.comp.sign));
        r.comp.validate();
        // Default geometry: the per-map pointing grid with the satellite frame at 0.
        std::vector<double> th, ph, be;
        for (double el : {30.0, 50.0, 70.0}) {
            for (double az = -180.0; az < 180.0; az += 45.0) {
                th.push_back(az);
                ph.push_back(el);
                be.push_back(0.0);
            }
        }
        r.theta = cfg.list_or("geometry_theta_deg", th);
        r.phi = cfg.list_or("geometry_phi_deg", ph);
        r.beta = cfg.list_or("geometry_beta_deg", std::vector<double>(r.theta.size(), 0.0));
        if (r.theta.size() != r.phi.size() || r.theta.size() != r.beta.size()) {
            throw ConfigError("geometry_theta_deg, geometry_phi_deg and geometry_beta_deg need equal lengths");
        }
        if (r.ground.empty() || r.sat.empty() || r.theta.empty()) {
            throw ConfigError("offset grids and geometry must not be empty");
        }
        return r;
    });
    const auto input = parse_state(s.input_state);
    const auto coating = build_coating(opts, s.coating);
    std::vector<link::Geometry> geometry;
    for (std::size_t i = 0; i < s.theta.size(); ++i) {
        geometry.push_back({s.theta[i], s.phi[i], s.beta[i]});
    }
    antenna::AntennaModel model;
    model.reference_rotation = compensation::reference_rotation_for_zero_point(s.comp.zero_point_deg);
    const auto cells = reading_config([&] {
        return link::offset_scan(s.ground, s.sat, model, coating, input, geometry, s.comp, opts.jobs);
    });
    const auto peak = link::offset_peak(cells);

    json summary;
    summary["coating"] = coating_json(s.coating, coating);
    summary["input_state"] = s.input_state;
    summary["geometry_samples"] = geometry.size();
    summary["peak"] = {{"ground_offset_deg", peak.ground_offset_deg},
                       {"sat_offset_deg", peak.sat_offset_deg},
                       {"fidelity", peak.fidelity}};
    write_output(opts, "offset_scan.csv", link::offset_scan_csv(cells));
    write_output(opts, "offset_scan.json", summary.dump(2) + "\n");
    out << cells.size() << " cells, peak fidelity " << format_fixed(peak.fidelity, 6) << " at ground "
        << format_fixed(peak.ground_offset_deg, 2) << " deg, satellite " << format_fixed(peak.sat_offset_deg, 2)
        << " deg\n";
    return kOk;
}

int cmd_bell(const Options& opts, std::ostream& out)
{
    const auto cfg = load_config(
        opts, {"source_fidelity", "pair_rate_hz", "loss_db", "depolarization", "channel_rotation_deg", "efficiency",
               "dark_rate_hz", "window_ns", "integration_s", "calibrate", "target_s", "target_coincidences",
               "settings_phi1_deg", "settings_phi2_deg", "runs"});
    struct Settings {
        link::SourceModel source;
        link::ChannelModel channel;
        link::DetectionModel det;
        double source_fidelity = 0.0;
        double rotation_deg = 0.0;
        bool calibrate = false;
        double target_s = 0.0;
        double target_total = 0.0;
        std::array<link::Setting, 4> settings{};
        long long runs = 1;
    };
    const Settings s = reading_config([&] {
        Settings r;
        r.source_fidelity = cfg.double_or("source_fidelity", 0.9329);
        r.source.state = link::make_source(r.source_fidelity);
        r.source.pair_rate_hz = cfg.double_or("pair_rate_hz", 1e6);
        r.source.validate();
        r.channel.loss_db = cfg.double_or("loss_db", 46.0);
        r.channel.depolarization = cfg.double_or("depolarization", 0.0);
        r.rotation_deg = cfg.double_or("channel_rotation_deg", 0.0);
        r.channel.rotation = jones::rotator(r.rotation_deg * kDeg);
        r.channel.validate();
        r.det.efficiency = cfg.double_or("efficiency", r.det.efficiency);
        r.det.dark_rate_hz = cfg.double_or("dark_rate_hz", r.det.dark_rate_hz);
        r.det.window_s = cfg.double_or("window_ns", r.det.window_s * 1e9) * 1e-9;
        r.det.integration_s = cfg.double_or("integration_s", r.det.integration_s);
        r.det.validate();
        r.calibrate = cfg.bool_or("calibrate", false);
        r.target_s = cfg.double_or("target_s", 2.312);
        r.target_total = cfg.double_or("target_coincidences", 2138.0);
        const auto phi1 = cfg.list_or("settings_phi1_deg", {0.0, 0.0, 45.0, 45.0});
        const auto phi2 = cfg.list_or("settings_phi2_deg", {22.5, 67.5, 22.5, 67.5});
        if (phi1.size() != 4 || phi2.size() != 4) {
            throw ConfigError("settings_phi1_deg and settings_phi2_deg need exactly four angles");
        }
        for (int k = 0; k < 4; ++k) {
            r.settings[k] = {phi1[k] * kDeg, phi2[k] * kDeg};
        }
        r.runs = cfg.int_or("runs", 1);
        if (r.runs < 1 || r.runs > 100000) {
            throw ConfigError("runs must lie in [1, 100000]");
        }
        return r;
    });

    link::ChannelModel channel = s.channel;
    if (s.calibrate) {
        const auto cal = link::calibrate_channel(s.source, s.det, s.settings, s.target_s, s.target_total);
        channel.loss_db = cal.channel.loss_db;
        channel.depolarization = cal.channel.depolarization;
        if (s.rotation_deg != 0.0) {
            throw ConfigError("calibrate = true requires channel_rotation_deg = 0");
        }
    }
    std::vector<link::ChshResult> runs(static_cast<std::size_t>(s.runs));
    parallel_for(runs.size(), opts.jobs, [&](std::size_t i) {
        runs[i] = link::run_bell_test(s.source, channel, s.det, s.settings, opts.seed + i);
    });
    const double analytic = link::chsh_analytic(link::apply_channel(s.source.state, channel), s.settings);
    const double expected = link::expected_chsh(s.source, channel, s.det, s.settings);
    const auto& first = runs.front();

    json j;
    j["seed"] = opts.seed;
    j["model"] = {{"source_fidelity", s.source_fidelity},
                  {"pair_rate_hz", s.source.pair_rate_hz},
                  {"loss_db", channel.loss_db},
                  {"depolarization", channel.depolarization},
                  {"channel_rotation_deg", s.rotation_deg},
                  {"efficiency", s.det.efficiency},
                  {"dark_rate_hz", s.det.dark_rate_hz},
                  {"window_ns", s.det.window_s * 1e9},
                  {"integration_s", s.det.integration_s},
                  {"calibrated", s.calibrate}};
    j["settings"] = json::array();
    for (int k = 0; k < 4; ++k) {
        const auto& c = first.counts[k];
        j["settings"].push_back({{"phi1_rad", first.settings[k].phi1},
                                 {"phi2_rad", first.settings[k].phi2},
                                 {"counts", {c.pp, c.mm, c.pm, c.mp}},
                                 {"E", first.correlations[k].value},
                                 {"sigma_E", first.correlations[k].sigma}});
    }
    j["S"] = first.s;
    j["sigma_S"] = first.sigma_s;
    j["total_coincidences"] = first.total_coincidences;
    j["expected_S"] = expected;
    j["state_S"] = analytic;
    if (runs.size() > 1) {
        double sum = 0.0;
        double sum2 = 0.0;
        std::ostringstream csv;
        csv << "seed,S,sigma_S,total_coincidences\n";
        for (std::size_t i = 0; i < runs.size(); ++i) {
            sum += runs[i].s;
            sum2 += runs[i].s * runs[i].s;
            csv << opts.seed + i << ',' << text::format_double(runs[i].s) << ','
                << text::format_double(runs[i].sigma_s) << ',' << runs[i].total_coincidences << '\n';
        }
        const double n = static_cast<double>(runs.size());
        const double mean = sum / n;
        j["runs"] = {{"count", runs.size()},
                     {"mean_S", mean},
                     {"stddev_S", std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)))}};
        write_output(opts, "bell_runs.csv", csv.str());
    }
    write_output(opts, "bell.json", j.dump(2) + "\n");
    write_output(opts, "bell_counts.csv", link::counts_csv(first));

    for (int k = 0; k < 4; ++k) {
        out << "E(" << format_fixed(first.settings[k].phi1 / kDeg, 2) << ", "
            << format_fixed(first.settings[k].phi2 / kDeg, 2) << ") = " << format_fixed(first.correlations[k].value, 4)
            << " +/- " << format_fixed(first.correlations[k].sigma, 4) << '\n';
    }
    out << "S = " << format_fixed(first.s, 4) << " +/- " << format_fixed(first.sigma_s, 4) << " from "
        << first.total_coincidences << " coincidences (expected S " << format_fixed(expected, 4) << ", loss "
        << format_fixed(channel.loss_db, 2) << " dB)\n";
    return kOk;
}

}  // namespace polsim::cli
