// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/compensation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"

namespace polsim::compensation {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

void CompensationConfig::validate() const
{
    if (!std::isfinite(zero_point_deg)) {
        throw InputError("zero point must be finite");
    }
    if (sign != 1 && sign != -1) {
        throw InputError("compensation sign must be +1 or -1");
    }
    if (!(max_slew_deg_per_s > 0.0) || !(max_step_deg > 0.0)) {
        throw InputError("slew and step limits must be positive");
    }
}

double reduce_half_turn(double angle_deg)
{
    double r = std::fmod(angle_deg, 180.0);
    if (r < 0.0) {
        r += 180.0;
    }
    if (r >= 180.0 - 1e-9) {
        r = 0.0;
    }
    return r;
}

double compensation_angle(double theta_deg, double phi_deg, double beta_deg, double zero_point_deg, int sign)
{
    if (!std::isfinite(theta_deg) || !std::isfinite(phi_deg) || !std::isfinite(beta_deg) ||
        !std::isfinite(zero_point_deg)) {
        throw InputError("compensation angle inputs must be finite");
    }
    return reduce_half_turn(zero_point_deg + sign * (theta_deg + phi_deg + beta_deg) / 2.0);
}

std::vector<double> unwrap_half_turn(std::span<const double> angles_deg)
{
    std::vector<double> out(angles_deg.begin(), angles_deg.end());
    for (std::size_t i = 1; i < out.size(); ++i) {
        double d = std::fmod(angles_deg[i] - angles_deg[i - 1], 180.0);
        if (d >= 90.0) {
            d -= 180.0;
        } else if (d < -90.0) {
            d += 180.0;
        }
        out[i] = out[i - 1] + d;
    }
    return out;
}

double reference_rotation_for_zero_point(double zero_point_deg)
{
    return 2.0 * zero_point_deg * kDeg;
}

CompensationSchedule schedule_from_pass(const orbit::PassProfile& pass, const CompensationConfig& config)
{
    config.validate();
    if (pass.samples.empty()) {
        throw InputError("cannot schedule an empty pass");
    }
    CompensationSchedule schedule;
    schedule.config = config;

    std::vector<double> angles;
    angles.reserve(pass.samples.size());
    for (const auto& s : pass.samples) {
        angles.push_back(
            compensation_angle(s.azimuth_deg, s.elevation_deg, s.beta_deg, config.zero_point_deg, config.sign));
    }
    const auto unwrapped = unwrap_half_turn(angles);

    schedule.samples.resize(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
        auto& out = schedule.samples[i];
        out.t = pass.samples[i].t;
        out.hwp_deg = angles[i];
        out.unwrapped_deg = unwrapped[i];
        if (i > 0) {
            const double dt = pass.samples[i].t - pass.samples[i - 1].t;
            if (!(dt > 0.0)) {
                throw InputError("pass timestamps must strictly increase");
            }
            const double step = unwrapped[i] - unwrapped[i - 1];
            out.rate_deg_per_s = step / dt;
            schedule.max_step_deg = std::max(schedule.max_step_deg, std::abs(step));
        }
    }
    if (schedule.samples.size() > 1) {
        schedule.samples[0].rate_deg_per_s = schedule.samples[1].rate_deg_per_s;
    }
    for (const auto& s : schedule.samples) {
        schedule.max_rate_deg_per_s = std::max(schedule.max_rate_deg_per_s, std::abs(s.rate_deg_per_s));
    }

    if (schedule.max_rate_deg_per_s > config.max_slew_deg_per_s) {
        std::ostringstream os;
        os << "max rate " << schedule.max_rate_deg_per_s << " deg/s exceeds the HWP slew limit "
           << config.max_slew_deg_per_s << " deg/s";
        schedule.warnings.push_back(os.str());
    }
    if (schedule.max_step_deg > config.max_step_deg) {
        std::ostringstream os;
        os << "discontinuity: single-step change of " << schedule.max_step_deg << " deg exceeds "
           << config.max_step_deg << " deg";
        schedule.warnings.push_back(os.str());
    }
    return schedule;
}

std::string schedule_csv(const CompensationSchedule& schedule)
{
    std::ostringstream os;
    os << "t_iso8601,hwp_deg,rate_deg_per_s\n";
    for (const auto& s : schedule.samples) {
        os << to_iso8601(s.t) << ',' << text::format_double(s.hwp_deg) << ','
           << text::format_double(s.rate_deg_per_s) << '\n';
    }
    return os.str();
}

std::vector<ScheduleSample> parse_schedule_csv(const std::string& text, const std::string& source)
{
    const auto table = text::parse_csv(text, source);
    const auto t_col = table.column("t_iso8601");
    const auto h_col = table.column("hwp_deg");
    const auto r_col = table.column("rate_deg_per_s");
    if (t_col == std::string::npos || h_col == std::string::npos || r_col == std::string::npos) {
        throw ParseError(source, 1, 0, "schedule CSV needs t_iso8601, hwp_deg, rate_deg_per_s");
    }
    std::vector<ScheduleSample> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.row_lines[r];
        ScheduleSample s;
        try {
            s.t = parse_iso8601(row[t_col]);
        } catch (const InputError& e) {
            throw ParseError(source, line, t_col + 1, e.what());
        }
        s.hwp_deg = text::parse_double({row[h_col], h_col + 1}, source, line);
        s.rate_deg_per_s = text::parse_double({row[r_col], r_col + 1}, source, line);
        out.push_back(s);
    }
    return out;
}

std::string schedule_metadata_json(const CompensationSchedule& schedule)
{
    nlohmann::ordered_json j;
    j["zero_point_deg"] = schedule.config.zero_point_deg;
    j["sign"] = schedule.config.sign;
    j["max_slew_deg_per_s"] = schedule.config.max_slew_deg_per_s;
    j["max_rate_deg_per_s"] = schedule.max_rate_deg_per_s;
    j["max_step_deg"] = schedule.max_step_deg;
    j["samples"] = schedule.samples.size();
    if (!schedule.samples.empty()) {
        j["start"] = to_iso8601(schedule.samples.front().t);
        j["end"] = to_iso8601(schedule.samples.back().t);
    }
    j["warnings"] = schedule.warnings;
    return j.dump(2) + "\n";
}

QuantizationError quantization_error(double hwp_accuracy_deg)
{
    if (!(hwp_accuracy_deg >= 0.0) || !std::isfinite(hwp_accuracy_deg)) {
        throw InputError("HWP accuracy must be a finite non-negative angle");
    }
    const double rad = hwp_accuracy_deg * kDeg;
    const double s = std::sin(2.0 * rad);
    return {rad, s * s};
}

jones::OpticalElement uplink_channel(const antenna::AntennaModel& model, const jones::MirrorResponse& coating,
                                     double theta_deg, double phi_deg, double beta_deg)
{
    const auto dir = antenna::PointingDirection::make(theta_deg, phi_deg);
    return jones::rotator(beta_deg * kDeg) * antenna::scanning_head_jones(dir, coating, model.reference_rotation);
}

jones::PolarizationState compensated_target(const jones::PolarizationState& input)
{
    return {input.h(), -input.v()};
}

double compensated_fidelity(const antenna::AntennaModel& model, const jones::MirrorResponse& coating,
                            const jones::PolarizationState& input, double theta_deg, double phi_deg,
                            double beta_deg, double hwp_deg)
{
    const auto in = input.normalized();
    const auto chain = jones::hwp(hwp_deg * kDeg) * uplink_channel(model, coating, theta_deg, phi_deg, beta_deg);
    return jones::fidelity(chain.apply(in).normalized(), compensated_target(in));
}

std::vector<double> verify_compensation(const orbit::PassProfile& pass, const antenna::AntennaModel& model,
                                        const jones::MirrorResponse& coating, const jones::PolarizationState& input,
                                        const CompensationConfig& config, HwpMode mode)
{
    const auto schedule = schedule_from_pass(pass, config);
    std::vector<double> out;
    out.reserve(pass.samples.size());
    for (std::size_t i = 0; i < pass.samples.size(); ++i) {
        const auto& s = pass.samples[i];
        const double hwp_deg = mode == HwpMode::scheduled ? schedule.samples[i].hwp_deg
                                                          : schedule.samples.front().hwp_deg;
        out.push_back(
            compensated_fidelity(model, coating, input, s.azimuth_deg, s.elevation_deg, s.beta_deg, hwp_deg));
    }
    return out;
}

}  // namespace polsim::compensation
