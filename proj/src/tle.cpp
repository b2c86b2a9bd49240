// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/tle.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"

namespace polsim::tle {

namespace {

constexpr std::size_t kLineLength = 69;

class LineReader {
public:
    LineReader(std::string_view line, std::size_t line_no, int tle_line, const std::string& source)
        : line_(line), line_no_(line_no), tle_line_(tle_line), source_(source)
    {
    }

    [[noreturn]] void fail(std::size_t column, const std::string& msg) const
    {
        throw ParseError(source_, line_no_, column, "TLE line " + std::to_string(tle_line_) + ": " + msg);
    }

    // 1-based inclusive column range.
    std::string_view field(std::size_t first, std::size_t last) const
    {
        return line_.substr(first - 1, last - first + 1);
    }

    double real(std::size_t first, std::size_t last, const char* what) const
    {
        auto f = trimmed(first, last);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
            fail(first, std::string("non-numeric ") + what);
        }
        return v;
    }

    int integer(std::size_t first, std::size_t last, const char* what, bool blank_is_zero = false) const
    {
        auto f = trimmed(first, last);
        if (f.empty() && blank_is_zero) {
            return 0;
        }
        int v = 0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
            fail(first, std::string("non-numeric ") + what);
        }
        return v;
    }

    // Columns holding only digits, e.g. the implied-decimal eccentricity.
    int digits(std::size_t first, std::size_t last, const char* what) const
    {
        const auto f = field(first, last);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] < '0' || f[i] > '9') {
                fail(first + i, std::string("non-numeric ") + what);
            }
        }
        int v = 0;
        std::from_chars(f.data(), f.data() + f.size(), v);
        return v;
    }

    // "sNNNNNsE": sign, five mantissa digits, exponent sign and digit.
    ExponentField exponent_field(std::size_t first, const char* what) const
    {
        const auto f = field(first, first + 7);
        const char sign = f[0];
        if (sign != ' ' && sign != '-' && sign != '+') {
            fail(first, std::string("bad sign in ") + what);
        }
        const int mantissa = digits(first + 1, first + 5, what);
        const char esign = f[6];
        if (esign != '-' && esign != '+') {
            fail(first + 6, std::string("bad exponent sign in ") + what);
        }
        const int exponent = digits(first + 7, first + 7, what);
        return {sign, mantissa, esign, exponent};
    }

    void expect_blank(std::size_t column) const
    {
        if (line_[column - 1] != ' ') {
            fail(column, "expected a blank separator");
        }
    }

private:
    std::string_view trimmed(std::size_t first, std::size_t last) const
    {
        auto f = field(first, last);
        while (!f.empty() && f.front() == ' ') {
            f.remove_prefix(1);
        }
        while (!f.empty() && f.back() == ' ') {
            f.remove_suffix(1);
        }
        if (!f.empty() && f.front() == '+') {
            f.remove_prefix(1);
        }
        return f;
    }

    std::string_view line_;
    std::size_t line_no_;
    int tle_line_;
    const std::string& source_;
};

void check_line(const LineReader& r, std::string_view line, int tle_line)
{
    if (line.size() != kLineLength) {
        r.fail(0, "expected " + std::to_string(kLineLength) + " characters, got " + std::to_string(line.size()));
    }
    const char last = line[68];
    if (last < '0' || last > '9') {
        r.fail(69, "checksum must be a digit");
    }
    const int expected = checksum(line);
    if (last - '0' != expected) {
        r.fail(69, "checksum mismatch (computed " + std::to_string(expected) + ", found " +
                       std::string(1, last) + ")");
    }
    if (line[0] != static_cast<char>('0' + tle_line)) {
        r.fail(1, "line number must be " + std::to_string(tle_line));
    }
    r.expect_blank(2);
}

std::string strip_cr(std::string s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) {
        s.pop_back();
    }
    return s;
}

TleRecord parse_lines(const std::string* name, std::size_t name_line_no, const std::string& l1, std::size_t n1,
                      const std::string& l2, std::size_t n2, const std::string& source)
{
    (void)name_line_no;
    TleRecord rec;
    if (name != nullptr) {
        rec.name = *name;
    }

    const LineReader r1(l1, n1, 1, source);
    check_line(r1, l1, 1);
    rec.satellite_number = r1.digits(3, 7, "satellite number");
    rec.classification = l1[7];
    r1.expect_blank(9);
    rec.international_designator = std::string(r1.field(10, 17));
    r1.expect_blank(18);
    const int yy = r1.digits(19, 20, "epoch year");
    rec.epoch_year = yy < 57 ? 2000 + yy : 1900 + yy;
    rec.epoch_day = r1.real(21, 32, "epoch day");
    r1.expect_blank(33);
    {
        const auto f = r1.field(34, 43);
        if ((f[0] != ' ' && f[0] != '-' && f[0] != '+') || f[1] != '.') {
            r1.fail(34, "malformed first derivative of mean motion");
        }
        const double mag = r1.digits(36, 43, "first derivative of mean motion") * 1e-8;
        rec.mean_motion_dot = f[0] == '-' ? -mag : mag;
    }
    r1.expect_blank(44);
    rec.mean_motion_ddot = r1.exponent_field(45, "second derivative of mean motion");
    r1.expect_blank(53);
    rec.bstar = r1.exponent_field(54, "drag term");
    r1.expect_blank(62);
    rec.ephemeris_type = l1[62];
    r1.expect_blank(64);
    rec.element_set_number = r1.integer(65, 68, "element set number", true);

    const LineReader r2(l2, n2, 2, source);
    check_line(r2, l2, 2);
    if (r2.digits(3, 7, "satellite number") != rec.satellite_number) {
        r2.fail(3, "satellite number differs from line 1");
    }
    r2.expect_blank(8);
    rec.inclination_deg = r2.real(9, 16, "inclination");
    r2.expect_blank(17);
    rec.raan_deg = r2.real(18, 25, "right ascension of the ascending node");
    r2.expect_blank(26);
    rec.eccentricity = r2.digits(27, 33, "eccentricity") * 1e-7;
    r2.expect_blank(34);
    rec.arg_perigee_deg = r2.real(35, 42, "argument of perigee");
    r2.expect_blank(43);
    rec.mean_anomaly_deg = r2.real(44, 51, "mean anomaly");
    r2.expect_blank(52);
    rec.mean_motion = r2.real(53, 63, "mean motion");
    rec.revolution_number = r2.integer(64, 68, "revolution number", true);

    if (!(rec.mean_motion > 0.0 && rec.mean_motion < 20.0)) {
        r2.fail(53, "mean motion must lie in (0, 20) rev/day");
    }
    if (rec.epoch_day < 1.0 || rec.epoch_day >= 367.0) {
        r1.fail(21, "epoch day out of range");
    }
    return rec;
}

}  // namespace

double ExponentField::value() const
{
    const double m = (sign == '-' ? -mantissa : mantissa) * 1e-5;
    return m * std::pow(10.0, exponent_sign == '-' ? -exponent : exponent);
}

UtcInstant TleRecord::epoch() const
{
    return UtcInstant::from_calendar(epoch_year, 1, 1) + (epoch_day - 1.0) * 86400.0;
}

void TleRecord::validate() const
{
    if (!(eccentricity >= 0.0 && eccentricity < 1.0)) {
        throw InputError("eccentricity must lie in [0, 1)");
    }
    if (!(mean_motion > 0.0 && mean_motion < 20.0)) {
        throw InputError("mean motion must lie in (0, 20) rev/day");
    }
    if (satellite_number < 0 || satellite_number > 99999) {
        throw InputError("satellite number must have at most five digits");
    }
}

int checksum(std::string_view line)
{
    int sum = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(68, line.size()); ++i) {
        const char c = line[i];
        if (c >= '0' && c <= '9') {
            sum += c - '0';
        } else if (c == '-') {
            sum += 1;
        }
    }
    return sum % 10;
}

std::vector<TleRecord> parse_tle_file(const std::string& text, const std::string& source)
{
    const auto raw = text::read_lines(text);
    std::vector<std::pair<std::string, std::size_t>> lines;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto l = strip_cr(raw[i]);
        if (l.find_first_not_of(' ') != std::string::npos) {
            lines.emplace_back(std::move(l), i + 1);
        }
    }
    std::vector<TleRecord> records;
    std::size_t i = 0;
    while (i < lines.size()) {
        const bool starts_element = lines[i].first.starts_with("1 ");
        if (starts_element) {
            if (i + 1 >= lines.size()) {
                throw ParseError(source, lines[i].second, 0, "TLE line 2 missing");
            }
            records.push_back(parse_lines(nullptr, 0, lines[i].first, lines[i].second, lines[i + 1].first,
                                          lines[i + 1].second, source));
            i += 2;
        } else {
            if (i + 2 >= lines.size()) {
                throw ParseError(source, lines[i].second, 0, "incomplete TLE record after name line");
            }
            records.push_back(parse_lines(&lines[i].first, lines[i].second, lines[i + 1].first,
                                          lines[i + 1].second, lines[i + 2].first, lines[i + 2].second, source));
            i += 3;
        }
    }
    if (records.empty()) {
        throw ParseError(source, 1, 0, "no TLE records found");
    }
    return records;
}

TleRecord parse_tle(const std::string& text, const std::string& source)
{
    auto records = parse_tle_file(text, source);
    if (records.size() != 1) {
        throw ParseError(source, 1, 0, "expected exactly one TLE record, found " + std::to_string(records.size()));
    }
    return records.front();
}

std::string format_tle(const TleRecord& rec)
{
    rec.validate();
    auto exponent_field = [](const ExponentField& f) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%c%05d%c%d", f.sign, f.mantissa, f.exponent_sign, f.exponent);
        return std::string(buf);
    };
    if (rec.international_designator.size() != 8) {
        throw InputError("international designator must be exactly 8 characters");
    }

    char ndot[32];
    std::snprintf(ndot, sizeof(ndot), "%c.%08ld", rec.mean_motion_dot < 0 ? '-' : ' ',
                  std::lround(std::abs(rec.mean_motion_dot) * 1e8));

    char l1[80];
    std::snprintf(l1, sizeof(l1), "1 %05d%c %s %02d%012.8f %s %s %s %c %4d", rec.satellite_number,
                  rec.classification, rec.international_designator.c_str(), rec.epoch_year % 100, rec.epoch_day,
                  ndot, exponent_field(rec.mean_motion_ddot).c_str(), exponent_field(rec.bstar).c_str(),
                  rec.ephemeris_type, rec.element_set_number % 10000);

    char l2[80];
    std::snprintf(l2, sizeof(l2), "2 %05d %8.4f %8.4f %07ld %8.4f %8.4f %11.8f%5d", rec.satellite_number,
                  rec.inclination_deg, rec.raan_deg, std::lround(rec.eccentricity * 1e7), rec.arg_perigee_deg,
                  rec.mean_anomaly_deg, rec.mean_motion, rec.revolution_number % 100000);

    std::string line1(l1);
    std::string line2(l2);
    if (line1.size() != 68 || line2.size() != 68) {
        throw InputError("TLE field overflow while formatting");
    }
    line1.push_back(static_cast<char>('0' + checksum(line1)));
    line2.push_back(static_cast<char>('0' + checksum(line2)));

    std::string out;
    if (!rec.name.empty()) {
        out += rec.name + '\n';
    }
    out += line1 + '\n' + line2 + '\n';
    return out;
}

}  // namespace polsim::tle
