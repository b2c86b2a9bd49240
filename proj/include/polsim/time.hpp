// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <string>
#include <string_view>

namespace polsim {

/// UTC instant as seconds since 1970-01-01T00:00:00Z. Leap seconds are ignored.
struct UtcInstant {
    double unix_seconds = 0.0;

    static UtcInstant from_calendar(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                                    double second = 0.0);

    UtcInstant operator+(double seconds) const { return {unix_seconds + seconds}; }
    double operator-(const UtcInstant& other) const { return unix_seconds - other.unix_seconds; }
    auto operator<=>(const UtcInstant&) const = default;

    double julian_date() const { return unix_seconds / 86400.0 + 2440587.5; }
};

/// `YYYY-MM-DDTHH:MM:SS.sssZ`, rounded to the millisecond.
std::string to_iso8601(UtcInstant t);
/// Accepts `YYYY-MM-DDTHH:MM:SS[.fraction][Z]`. Throws InputError.
UtcInstant parse_iso8601(std::string_view text);

/// Greenwich mean sidereal angle in radians, [0, 2 pi). UT1 is taken as UTC.
double gmst(UtcInstant t);

}  // namespace polsim
