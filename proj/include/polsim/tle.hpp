// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polsim/time.hpp"

namespace polsim::tle {

/// Fields written as an implied-decimal mantissa with a power-of-ten
/// exponent, e.g. " 12345-4" = 0.12345e-4.
struct ExponentField {
    char sign = ' ';           ///< ' ', '+' or '-'
    int mantissa = 0;          ///< five digits, unsigned
    char exponent_sign = '-';  ///< kept verbatim so "-0" and "+0" both round-trip
    int exponent = 0;          ///< single digit, unsigned

    double value() const;
    auto operator<=>(const ExponentField&) const = default;
};

struct TleRecord {
    std::string name;  ///< empty for the two-line form

    int satellite_number = 0;
    char classification = 'U';
    std::string international_designator = "        ";  ///< columns 10-17, verbatim
    int epoch_year = 0;                                 ///< four-digit year
    double epoch_day = 1.0;                             ///< day of year, 1.0 = Jan 1 00:00 UTC
    double mean_motion_dot = 0.0;                       ///< first derivative / 2, rev/day^2
    ExponentField mean_motion_ddot;                     ///< second derivative / 6, rev/day^3
    ExponentField bstar;                                ///< drag term, 1/earth radii
    char ephemeris_type = '0';
    int element_set_number = 0;

    double inclination_deg = 0.0;
    double raan_deg = 0.0;
    double eccentricity = 0.0;
    double arg_perigee_deg = 0.0;
    double mean_anomaly_deg = 0.0;
    double mean_motion = 0.0;  ///< rev/day
    int revolution_number = 0;

    UtcInstant epoch() const;
    void validate() const;
};

/// (sum of digits + number of '-') mod 10 over the first 68 characters.
int checksum(std::string_view line);

/// Parses one record given as two lines, or three with a leading name line.
/// Throws ParseError with the input line number and 1-based column.
TleRecord parse_tle(const std::string& text, const std::string& source = "<tle>");

/// Parses every record in a TLE file (two- and three-line forms may mix).
std::vector<TleRecord> parse_tle_file(const std::string& text, const std::string& source = "<tle>");

/// The two element lines (plus the name line when present), each ending in
/// '\n', with freshly computed checksums.
std::string format_tle(const TleRecord& record);

}  // namespace polsim::tle
