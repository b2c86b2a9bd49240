// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/orbit.hpp"

namespace polsim::orbit {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Evaluated {
    PassSample sample;
    LineOfSight geometry;
};

Evaluated evaluate(const Ephemeris& ephemeris, const GroundStation& station, UtcInstant t, BetaModel model)
{
    const StateVector sat = ephemeris(t);
    const auto topo = topocentric(sat.position, station, t);
    const LineOfSight los{sat, ecef_to_eci(station.ecef(), t)};
    return {{t, topo.azimuth_deg, topo.elevation_deg, beta_angle(los, model)}, los};
}

double elevation_at(const Ephemeris& ephemeris, const GroundStation& station, UtcInstant t)
{
    return topocentric(ephemeris(t).position, station, t).elevation_deg;
}

// Returns the instant on the `inside` side of a threshold crossing in [a, b].
UtcInstant bisect_crossing(const Ephemeris& ephemeris, const GroundStation& station, double threshold,
                           UtcInstant outside, UtcInstant inside)
{
    while (std::abs(inside - outside) > 1e-6) {
        const UtcInstant mid{0.5 * (outside.unix_seconds + inside.unix_seconds)};
        if (elevation_at(ephemeris, station, mid) >= threshold) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return inside;
}

}  // namespace

double PassProfile::duration() const
{
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
}

std::size_t PassProfile::culmination() const
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].elevation_deg > samples[best].elevation_deg) {
            best = i;
        }
    }
    return best;
}

double PassProfile::max_elevation() const
{
    return samples.empty() ? 0.0 : samples[culmination()].elevation_deg;
}

void PassProfile::validate(double threshold_deg, double slack) const
{
    if (samples.empty()) {
        throw InputError("empty pass profile");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
            throw InputError("pass timestamps must strictly increase");
        }
        if (samples[i].elevation_deg < threshold_deg - slack) {
            throw InputError("pass sample below the elevation threshold");
        }
    }
}

double beta_angle(const LineOfSight& geometry, BetaModel model)
{
    if (model == BetaModel::nadir_fixed) {
        return 0.0;
    }
    const Vec3 up = geometry.satellite.position.normalized();
    const Vec3 v = geometry.satellite.velocity;
    const Vec3 along = (v - v.dot(up) * up).normalized();
    const Vec3 cross = up.cross(along);
    const Vec3 los = geometry.station - geometry.satellite.position;
    return std::atan2(los.dot(cross), -los.dot(up)) / kDeg;
}

std::vector<double> beta_angles(std::span<const LineOfSight> geometry, BetaModel model)
{
    std::vector<double> out;
    out.reserve(geometry.size());
    for (const auto& g : geometry) {
        out.push_back(beta_angle(g, model));
    }
    return out;
}

void inject_beta(PassProfile& pass, std::span<const double> beta_deg)
{
    if (beta_deg.size() != pass.samples.size()) {
        throw InputError("injected beta series length differs from the pass");
    }
    for (std::size_t i = 0; i < beta_deg.size(); ++i) {
        pass.samples[i].beta_deg = beta_deg[i];
    }
}

std::vector<PassProfile> extract_passes(const Ephemeris& ephemeris, const GroundStation& station,
                                        UtcInstant start, double window_s, const PassOptions& options)
{
    station.validate();
    if (!(window_s > 0.0) || window_s > kPropagationHorizon) {
        throw InputError("pass window must lie in (0, 7 days]");
    }
    if (!(options.threshold_deg >= 0.0 && options.threshold_deg < 90.0)) {
        throw InputError("elevation threshold must lie in [0, 90)");
    }
    if (!(options.step_s > 0.0)) {
        throw InputError("sampling step must be positive");
    }

    const auto steps = static_cast<long long>(std::floor(window_s / options.step_s));
    const double thr = options.threshold_deg;
    std::vector<PassProfile> passes;

    std::optional<PassProfile> current;
    UtcInstant prev_t = start;
    bool prev_above = elevation_at(ephemeris, station, start) >= thr;
    bool truncated = prev_above;  // pass already in progress at the window start

    for (long long k = 0; k <= steps; ++k) {
        const UtcInstant t = start + static_cast<double>(k) * options.step_s;
        const auto ev = evaluate(ephemeris, station, t, options.beta_model);
        const bool above = ev.sample.elevation_deg >= thr;

        if (above && !prev_above) {
            const UtcInstant rise = bisect_crossing(ephemeris, station, thr, prev_t, t);
            current.emplace();
            if (t - rise > 1e-9) {
                current->samples.push_back(evaluate(ephemeris, station, rise, options.beta_model).sample);
            }
            truncated = false;
        }
        if (above && current) {
            current->samples.push_back(ev.sample);
        }
        if (!above && prev_above) {
            if (current && !truncated) {
                const UtcInstant set = bisect_crossing(ephemeris, station, thr, t, prev_t);
                if (set - prev_t > 1e-9) {
                    current->samples.push_back(evaluate(ephemeris, station, set, options.beta_model).sample);
                }
                passes.push_back(std::move(*current));
            }
            current.reset();
            truncated = false;
        }
        prev_above = above;
        prev_t = t;
    }
    return passes;
}

std::vector<PassProfile> extract_passes(const tle::TleRecord& record, const GroundStation& station,
                                        UtcInstant start, double window_s, const PassOptions& options)
{
    return extract_passes([&record](UtcInstant t) { return propagate_state(record, t); }, station, start,
                          window_s, options);
}

std::string pass_csv(const PassProfile& pass)
{
    using text::format_double;
    std::ostringstream os;
    os << "t_iso8601,az_deg,el_deg,beta_deg\n";
    for (const auto& s : pass.samples) {
        os << to_iso8601(s.t) << ',' << format_double(s.azimuth_deg) << ',' << format_double(s.elevation_deg)
           << ',' << format_double(s.beta_deg) << '\n';
    }
    return os.str();
}

PassProfile parse_pass_csv(const std::string& text, const std::string& source)
{
    const auto table = text::parse_csv(text, source);
    const auto t_col = table.column("t_iso8601");
    const auto az_col = table.column("az_deg");
    const auto el_col = table.column("el_deg");
    const auto beta_col = table.column("beta_deg");
    if (t_col == std::string::npos || az_col == std::string::npos || el_col == std::string::npos) {
        throw ParseError(source, 1, 0, "pass CSV needs columns t_iso8601, az_deg, el_deg[, beta_deg]");
    }
    PassProfile pass;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.row_lines[r];
        PassSample s;
        try {
            s.t = parse_iso8601(row[t_col]);
        } catch (const InputError& e) {
            throw ParseError(source, line, t_col + 1, e.what());
        }
        s.azimuth_deg = text::parse_double({row[az_col], az_col + 1}, source, line);
        s.elevation_deg = text::parse_double({row[el_col], el_col + 1}, source, line);
        if (beta_col != std::string::npos) {
            s.beta_deg = text::parse_double({row[beta_col], beta_col + 1}, source, line);
        }
        if (!pass.samples.empty() && !(s.t > pass.samples.back().t)) {
            throw ParseError(source, line, t_col + 1, "timestamps must strictly increase");
        }
        pass.samples.push_back(s);
    }
    if (pass.samples.empty()) {
        throw ParseError(source, 1, 0, "pass CSV has no samples");
    }
    return pass;
}

}  // namespace polsim::orbit
