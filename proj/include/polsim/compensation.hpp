// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <span>
#include <string>
#include <vector>

#include "polsim/antenna.hpp"
#include "polsim/jones.hpp"
#include "polsim/orbit.hpp"
#include "polsim/time.hpp"

namespace polsim::compensation {

struct CompensationConfig {
    /// HWP reading that restores |H> at pointing (0, 0); per-installation calibration.
    double zero_point_deg = 145.8;
    /// +1: the plate turns by +(theta + phi + beta)/2. -1 reverses the sense.
    int sign = +1;
    double max_slew_deg_per_s = 5.0;
    /// Largest single-step change of the unwrapped angle before a
    /// discontinuity warning.
    double max_step_deg = 1.0;

    void validate() const;
};

/// zero_point + sign * (theta + phi + beta) / 2, reduced to [0, 180).
double compensation_angle(double theta_deg, double phi_deg, double beta_deg, double zero_point_deg,
                          int sign = +1);

/// Maps any angle to [0, 180). Values within 1e-9 of 180 map to 0.
double reduce_half_turn(double angle_deg);

/// Removes 180-degree wraps: consecutive differences land in [-90, 90).
std::vector<double> unwrap_half_turn(std::span<const double> angles_deg);

/// Output-frame rotation of the antenna model that matches a zero point:
/// 2 * zero_point, radians.
double reference_rotation_for_zero_point(double zero_point_deg);

struct ScheduleSample {
    UtcInstant t;
    double hwp_deg = 0.0;        ///< reduced, [0, 180)
    double unwrapped_deg = 0.0;  ///< continuous series used for rates
    double rate_deg_per_s = 0.0;
};

struct CompensationSchedule {
    std::vector<ScheduleSample> samples;
    CompensationConfig config;
    double max_rate_deg_per_s = 0.0;
    double max_step_deg = 0.0;
    std::vector<std::string> warnings;
};

/// One HWP angle per pass sample. Rates are backward differences of the
/// unwrapped series (the first sample takes the second's rate).
CompensationSchedule schedule_from_pass(const orbit::PassProfile& pass, const CompensationConfig& config = {});

/// `t_iso8601,hwp_deg,rate_deg_per_s`
std::string schedule_csv(const CompensationSchedule& schedule);
std::vector<ScheduleSample> parse_schedule_csv(const std::string& text, const std::string& source = "<schedule>");
/// Zero point, sign, max rate, slew limit, sample count and warnings.
std::string schedule_metadata_json(const CompensationSchedule& schedule);

struct QuantizationError {
    double angle_rad = 0.0;   ///< plate accuracy expressed in radians
    double infidelity = 0.0;  ///< sin^2(2 * accuracy): a plate error turns the output by twice as much
};

QuantizationError quantization_error(double hwp_accuracy_deg);

/// Ground antenna at (theta, phi) followed by the satellite frame rotation beta.
jones::OpticalElement uplink_channel(const antenna::AntennaModel& model, const jones::MirrorResponse& coating,
                                     double theta_deg, double phi_deg, double beta_deg);

/// State an ideally compensated chain delivers for `input`: diag(1, -1) input.
/// |H> maps to |H>.
jones::PolarizationState compensated_target(const jones::PolarizationState& input);

/// Fidelity of hwp(angle) * channel * input to the compensated target.
double compensated_fidelity(const antenna::AntennaModel& model, const jones::MirrorResponse& coating,
                            const jones::PolarizationState& input, double theta_deg, double phi_deg,
                            double beta_deg, double hwp_deg);

enum class HwpMode {
    scheduled,  ///< follow the compensation law sample by sample
    fixed,      ///< hold the angle computed for the first sample
};

/// End-to-end fidelity per pass sample.
std::vector<double> verify_compensation(const orbit::PassProfile& pass, const antenna::AntennaModel& model,
                                        const jones::MirrorResponse& coating, const jones::PolarizationState& input,
                                        const CompensationConfig& config = {}, HwpMode mode = HwpMode::scheduled);

}  // namespace polsim::compensation
