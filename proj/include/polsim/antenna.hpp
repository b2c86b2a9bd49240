// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "polsim/jones.hpp"

namespace polsim::antenna {

using jones::MirrorResponse;
using jones::OpticalElement;
using jones::PolarizationState;

/// Rotationally symmetric conic mirror, z = r^2 / (4 f) for conic = -1.
struct Paraboloid {
    double focal_length_mm = 0.0;
    double semi_diameter_mm = 0.0;
    double conic = -1.0;

    /// Vertex radius of curvature R gives f = |R| / 2.
    static Paraboloid from_radius(double radius_mm, double semi_diameter_mm, double conic = -1.0);
};

/// The two off-axis parabolic mirrors of the transmitting antenna.
struct TelescopeGeometry {
    Paraboloid primary;
    Paraboloid secondary;

    /// Primary R = -1625 mm / 190 mm semi-diameter, secondary R = -65 mm /
    /// 7.6 mm, both conic -1.
    static TelescopeGeometry reference_design();
    void validate() const;
};

struct PointingDirection {
    double azimuth_deg = 0.0;    ///< [-180, 180)
    double elevation_deg = 0.0;  ///< [0, 90]

    /// Wraps azimuth into [-180, 180) and validates elevation.
    static PointingDirection make(double azimuth_deg, double elevation_deg);
    void validate() const;
};

/// Antenna model used by the scans and by the motion compensation.
struct AntennaModel {
    TelescopeGeometry geometry = TelescopeGeometry::reference_design();
    /// Fixed rotation of the output frame at pointing (0, 0), radians. The
    /// HWP zero point of the compensation law equals half of it (mod 90 deg);
    /// the default matches a 145.8 deg zero point.
    double reference_rotation = 2.0 * 145.8 * std::numbers::pi / 180.0;
};

/// Incidence angle of an axis-parallel ray at height h: atan(h / (2 f)).
double parabola_incidence_angle(const Paraboloid& mirror, double ray_height_mm);
double max_incidence_angle(const Paraboloid& mirror);

/// Polarization frame rotation produced by pointing, theta + phi, radians.
double frame_rotation(const PointingDirection& dir);

/**
 * Jones matrix of the two-mirror 45-degree scanning head.
 *
 * The azimuth stage turns the input into the first mirror's s/p frame, the
 * elevation stage turns the field between the mirrors, and a fixed output
 * rotation closes the chain:
 *
 *     J = R(ref) * D * R(-phi) * D * R(theta),   D = diag(r_s, r_p)
 *
 * With ideal mirrors (r_s = 1, r_p = -1) this collapses to R(theta + phi + ref).
 * The paraboloids are treated as polarization-neutral.
 */
OpticalElement scanning_head_jones(const PointingDirection& dir, const MirrorResponse& coating,
                                   double reference_rotation = 0.0);

/// Orientation of the polarization ellipse's major axis, radians in (-pi/2, pi/2].
double major_axis_angle(const PolarizationState& state);

struct LabeledState {
    std::string label;
    PolarizationState state;
};

/// H, V, +, - in that order.
std::vector<LabeledState> standard_states();

struct PerCell {
    double elevation_deg = 0.0;
    double azimuth_deg = 0.0;
    std::string state_label;
    double per = 0.0;
    double fidelity = 0.0;
};

/// PER of the chief ray through the antenna, measured against the
/// orientation an ideal antenna would produce.
PerCell measure_cell(const AntennaModel& model, const MirrorResponse& coating, const PointingDirection& dir,
                     const LabeledState& input);

/// Cells ordered elevation-major, then azimuth, then state. `jobs` > 1
/// evaluates cells on worker threads; the output order does not change.
std::vector<PerCell> antenna_per_scan(const AntennaModel& model, const MirrorResponse& coating,
                                      std::span<const double> elevations_deg, std::span<const double> azimuths_deg,
                                      std::span<const LabeledState> states, int jobs = 1);

struct PerSummary {
    double min_per = 0.0;
    double mean_per = 0.0;
    double min_fidelity = 0.0;
    double mean_fidelity = 0.0;
};

PerSummary summarize(std::span<const PerCell> cells);

/// `elevation_deg,azimuth_deg,state_label,per,fidelity` with a header row.
std::string per_scan_csv(std::span<const PerCell> cells);
std::vector<PerCell> parse_per_scan_csv(const std::string& text, const std::string& source = "<per-map>");

}  // namespace polsim::antenna
