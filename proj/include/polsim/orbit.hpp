// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polsim/time.hpp"
#include "polsim/tle.hpp"

namespace polsim::orbit {

using Vec3 = Eigen::Vector3d;

inline constexpr double kEarthMu = 398600.4418;        // km^3 / s^2
inline constexpr double kEarthRadius = 6378.137;       // km, spherical model
inline constexpr double kPropagationHorizon = 7 * 86400.0;  // s either side of epoch

/// Earth-centred inertial position and velocity, km and km/s.
struct StateVector {
    Vec3 position = Vec3::Zero();
    Vec3 velocity = Vec3::Zero();
};

/// Eccentric anomaly E with E - e sin E = mean_anomaly (radians), 0 <= e < 1.
double solve_kepler(double mean_anomaly, double eccentricity);

double semi_major_axis(const tle::TleRecord& record);

/// Two-body propagation of the record's mean elements. Throws RangeError more
/// than seven days from epoch.
StateVector propagate_state(const tle::TleRecord& record, UtcInstant t);
Vec3 propagate(const tle::TleRecord& record, UtcInstant t);

/// Geodetic latitude is used as geocentric on a spherical Earth.
struct GroundStation {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double altitude_m = 0.0;

    /// 32 19'33.07" N, 80 01'34.18" E, 5047 m.
    static GroundStation ngari();
    void validate() const;
    Vec3 ecef() const;  ///< km
};

struct Topocentric {
    double azimuth_deg = 0.0;  ///< from north through east, [0, 360); 0 at zenith
    double elevation_deg = 0.0;
    double range_km = 0.0;
};

Vec3 eci_to_ecef(const Vec3& eci, UtcInstant t);
Vec3 ecef_to_eci(const Vec3& ecef, UtcInstant t);

Topocentric topocentric_ecef(const Vec3& satellite_ecef, const GroundStation& station);
Topocentric topocentric(const Vec3& satellite_eci, const GroundStation& station, UtcInstant t);

// ---------------------------------------------------------------------------
// Passes

enum class BetaModel {
    roll,         ///< rotation of the line of sight about the along-track axis, from nadir
    nadir_fixed,  ///< beta = 0
};

struct PassSample {
    UtcInstant t;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    double beta_deg = 0.0;
};

struct PassProfile {
    std::vector<PassSample> samples;

    double duration() const;
    double max_elevation() const;
    /// Index of the highest sample.
    std::size_t culmination() const;
    /// Throws InputError unless timestamps strictly increase and every
    /// elevation is at least `threshold_deg` (minus `slack`).
    void validate(double threshold_deg, double slack = 1e-6) const;
};

/// Satellite and station in the same inertial frame at one instant.
struct LineOfSight {
    StateVector satellite;
    Vec3 station = Vec3::Zero();
};

/**
 * Satellite-side frame angle. For `roll`, the satellite keeps its boresight on
 * nadir with x along-track; beta is the signed angle from nadir to the line of
 * sight about x, positive toward y = up x along-track. It stays continuous
 * through culmination because the station is always below the satellite's
 * local horizontal while visible.
 */
double beta_angle(const LineOfSight& geometry, BetaModel model);
std::vector<double> beta_angles(std::span<const LineOfSight> geometry, BetaModel model);

/// Replaces the beta column verbatim. Sizes must match.
void inject_beta(PassProfile& pass, std::span<const double> beta_deg);

struct PassOptions {
    double threshold_deg = 10.0;
    double step_s = 1.0;
    BetaModel beta_model = BetaModel::roll;
};

using Ephemeris = std::function<StateVector(UtcInstant)>;

/**
 * Maximal intervals with elevation >= threshold inside [start, start + window].
 * First and last samples sit on the threshold crossing (bisected to 1 us);
 * interior samples lie on the start + k * step grid. Passes already in
 * progress at either edge of the window are dropped.
 */
std::vector<PassProfile> extract_passes(const Ephemeris& ephemeris, const GroundStation& station,
                                        UtcInstant start, double window_s, const PassOptions& options = {});
std::vector<PassProfile> extract_passes(const tle::TleRecord& record, const GroundStation& station,
                                        UtcInstant start, double window_s, const PassOptions& options = {});

/// `t_iso8601,az_deg,el_deg,beta_deg`
std::string pass_csv(const PassProfile& pass);
/// Accepts the same columns; `beta_deg` is optional (zero when absent).
PassProfile parse_pass_csv(const std::string& text, const std::string& source = "<pass>");

}  // namespace polsim::orbit
