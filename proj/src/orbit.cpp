// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <cmath>
#include <numbers>

#include "polsim/error.hpp"
#include "polsim/orbit.hpp"

namespace polsim::orbit {

namespace {

using std::numbers::pi;

constexpr double kDeg = pi / 180.0;

Eigen::Matrix3d rot_z(double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d m;
    m << c, -s, 0, s, c, 0, 0, 0, 1;
    return m;
}

Eigen::Matrix3d rot_x(double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d m;
    m << 1, 0, 0, 0, c, -s, 0, s, c;
    return m;
}

double mean_motion_rad_s(const tle::TleRecord& record)
{
    return record.mean_motion * 2.0 * pi / 86400.0;
}

}  // namespace

double solve_kepler(double mean_anomaly, double eccentricity)
{
    if (!(eccentricity >= 0.0 && eccentricity < 1.0) || !std::isfinite(mean_anomaly)) {
        throw InputError("Kepler solver needs finite M and 0 <= e < 1");
    }
    const double turns = std::floor(mean_anomaly / (2.0 * pi));
    const double m = mean_anomaly - turns * 2.0 * pi;

    // E - M = e sin E, so the root is bracketed by [M - e, M + e].
    double lo = m - eccentricity;
    double hi = m + eccentricity;
    double e_anom = eccentricity < 0.8 ? m : pi;
    e_anom = std::clamp(e_anom, lo, hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double f = e_anom - eccentricity * std::sin(e_anom) - m;
        if (std::abs(f) < 1e-15) {
            break;
        }
        if (f > 0.0) {
            hi = e_anom;
        } else {
            lo = e_anom;
        }
        const double df = 1.0 - eccentricity * std::cos(e_anom);
        double next = e_anom - f / df;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == e_anom) {
            break;
        }
        e_anom = next;
    }
    return e_anom + turns * 2.0 * pi;
}

double semi_major_axis(const tle::TleRecord& record)
{
    const double n = mean_motion_rad_s(record);
    return std::cbrt(kEarthMu / (n * n));
}

StateVector propagate_state(const tle::TleRecord& record, UtcInstant t)
{
    record.validate();
    const double dt = t - record.epoch();
    if (std::abs(dt) > kPropagationHorizon) {
        throw RangeError("propagation more than 7 days from the element epoch");
    }
    const double n = mean_motion_rad_s(record);
    const double a = semi_major_axis(record);
    const double e = record.eccentricity;
    const double big_e = solve_kepler(record.mean_anomaly_deg * kDeg + n * dt, e);

    const double cos_e = std::cos(big_e);
    const double sin_e = std::sin(big_e);
    const double root = std::sqrt(1.0 - e * e);
    const double e_dot = n / (1.0 - e * cos_e);

    const Vec3 r_pqw(a * (cos_e - e), a * root * sin_e, 0.0);
    const Vec3 v_pqw(-a * sin_e * e_dot, a * root * cos_e * e_dot, 0.0);

    const Eigen::Matrix3d to_eci =
        rot_z(record.raan_deg * kDeg) * rot_x(record.inclination_deg * kDeg) * rot_z(record.arg_perigee_deg * kDeg);
    return {to_eci * r_pqw, to_eci * v_pqw};
}

Vec3 propagate(const tle::TleRecord& record, UtcInstant t)
{
    return propagate_state(record, t).position;
}

GroundStation GroundStation::ngari()
{
    return {32.0 + 19.0 / 60.0 + 33.07 / 3600.0, 80.0 + 1.0 / 60.0 + 34.18 / 3600.0, 5047.0};
}

void GroundStation::validate() const
{
    if (!(std::abs(latitude_deg) <= 90.0) || !std::isfinite(longitude_deg) || !(altitude_m > -500.0)) {
        throw InputError("ground station needs |latitude| <= 90 and altitude > -500 m");
    }
}

Vec3 GroundStation::ecef() const
{
    validate();
    const double r = kEarthRadius + altitude_m / 1000.0;
    const double lat = latitude_deg * kDeg;
    const double lon = longitude_deg * kDeg;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

Vec3 eci_to_ecef(const Vec3& eci, UtcInstant t)
{
    return rot_z(-gmst(t)) * eci;
}

Vec3 ecef_to_eci(const Vec3& ecef, UtcInstant t)
{
    return rot_z(gmst(t)) * ecef;
}

Topocentric topocentric_ecef(const Vec3& satellite_ecef, const GroundStation& station)
{
    const Vec3 site = station.ecef();
    const double lat = station.latitude_deg * kDeg;
    const double lon = station.longitude_deg * kDeg;
    const Vec3 east(-std::sin(lon), std::cos(lon), 0.0);
    const Vec3 north(-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat));
    const Vec3 up(std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat));

    const Vec3 rho = satellite_ecef - site;
    const double range = rho.norm();
    const double e = rho.dot(east);
    const double n = rho.dot(north);
    const double u = rho.dot(up);

    Topocentric out;
    out.range_km = range;
    out.elevation_deg = std::asin(std::clamp(u / range, -1.0, 1.0)) / kDeg;
    if (std::hypot(e, n) > 1e-9 * range) {
        double az = std::atan2(e, n) / kDeg;
        if (az < 0.0) {
            az += 360.0;
        }
        out.azimuth_deg = az >= 360.0 ? 0.0 : az;
    }
    return out;
}

Topocentric topocentric(const Vec3& satellite_eci, const GroundStation& station, UtcInstant t)
{
    return topocentric_ecef(eci_to_ecef(satellite_eci, t), station);
}

}  // namespace polsim::orbit
