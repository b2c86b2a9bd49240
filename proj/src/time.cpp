// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/time.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "polsim/error.hpp"

namespace polsim {

namespace {

using namespace std::chrono;

bool read_fixed_int(std::string_view s, std::size_t pos, std::size_t width, int& out)
{
    if (pos + width > s.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return false;
        }
    }
    const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + width, out);
    return ec == std::errc();
}

}  // namespace

UtcInstant UtcInstant::from_calendar(int year, unsigned month, unsigned day, int hour, int minute, double second)
{
    const year_month_day ymd{std::chrono::year(year), std::chrono::month(month), std::chrono::day(day)};
    if (!ymd.ok()) {
        throw InputError("invalid calendar date");
    }
    const auto days = sys_days(ymd).time_since_epoch().count();
    return {static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second};
}

std::string to_iso8601(UtcInstant t)
{
    const auto total_ms = static_cast<long long>(std::llround(t.unix_seconds * 1000.0));
    long long day_count = total_ms / 86'400'000;
    long long ms_of_day = total_ms % 86'400'000;
    if (ms_of_day < 0) {
        ms_of_day += 86'400'000;
        --day_count;
    }
    const year_month_day ymd{sys_days{days{day_count}}};
    const long long h = ms_of_day / 3'600'000;
    const long long m = (ms_of_day / 60'000) % 60;
    const long long s = (ms_of_day / 1000) % 60;
    const long long ms = ms_of_day % 1000;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), h, m, s, ms);
    return buf;
}

UtcInstant parse_iso8601(std::string_view text)
{
    auto fail = [&]() -> UtcInstant {
        throw InputError("invalid ISO-8601 UTC timestamp '" + std::string(text) + "'");
    };
    int year = 0;
    int month = 0;
    int day = 0;
    int hour = 0;
    int minute = 0;
    int sec = 0;
    if (text.size() < 19 || !read_fixed_int(text, 0, 4, year) || text[4] != '-' ||
        !read_fixed_int(text, 5, 2, month) || text[7] != '-' || !read_fixed_int(text, 8, 2, day) ||
        (text[10] != 'T' && text[10] != ' ') || !read_fixed_int(text, 11, 2, hour) || text[13] != ':' ||
        !read_fixed_int(text, 14, 2, minute) || text[16] != ':' || !read_fixed_int(text, 17, 2, sec)) {
        return fail();
    }
    double fraction = 0.0;
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        std::size_t end = pos + 1;
        while (end < text.size() && text[end] >= '0' && text[end] <= '9') {
            ++end;
        }
        if (end == pos + 1) {
            return fail();
        }
        std::string digits = "0" + std::string(text.substr(pos, end - pos));
        std::from_chars(digits.data(), digits.data() + digits.size(), fraction);
        pos = end;
    }
    if (pos < text.size() && text[pos] == 'Z') {
        ++pos;
    }
    if (pos != text.size() || hour > 23 || minute > 59 || sec > 60) {
        return fail();
    }
    try {
        return UtcInstant::from_calendar(year, static_cast<unsigned>(month), static_cast<unsigned>(day), hour,
                                         minute, sec + fraction);
    } catch (const InputError&) {
        return fail();
    }
}

double gmst(UtcInstant t)
{
    // IAU 1982 expression in seconds of sidereal time.
    const double tu = (t.julian_date() - 2451545.0) / 36525.0;
    double seconds = 67310.54841 + (876600.0 * 3600.0 + 8640184.812866) * tu + 0.093104 * tu * tu -
                     6.2e-6 * tu * tu * tu;
    seconds = std::fmod(seconds, 86400.0);
    double angle = seconds / 240.0 * std::numbers::pi / 180.0;
    if (angle < 0.0) {
        angle += 2.0 * std::numbers::pi;
    }
    return angle;
}

}  // namespace polsim
