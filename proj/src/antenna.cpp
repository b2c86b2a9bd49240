// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/antenna.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/parallel.hpp"

namespace polsim::antenna {

namespace {

using std::numbers::pi;

constexpr double kDeg = pi / 180.0;

}  // namespace

Paraboloid Paraboloid::from_radius(double radius_mm, double semi_diameter_mm, double conic)
{
    return {std::abs(radius_mm) / 2.0, semi_diameter_mm, conic};
}

TelescopeGeometry TelescopeGeometry::reference_design()
{
    return {Paraboloid::from_radius(-1625.0, 190.0), Paraboloid::from_radius(-65.0, 7.6)};
}

void TelescopeGeometry::validate() const
{
    for (const auto* m : {&primary, &secondary}) {
        if (!(m->focal_length_mm > 0.0) || !(m->semi_diameter_mm > 0.0)) {
            throw InputError("telescope mirrors need positive focal length and semi-diameter");
        }
    }
}

PointingDirection PointingDirection::make(double azimuth_deg, double elevation_deg)
{
    if (!std::isfinite(azimuth_deg)) {
        throw InputError("azimuth must be finite");
    }
    double az = std::fmod(azimuth_deg + 180.0, 360.0);
    if (az < 0.0) {
        az += 360.0;
    }
    PointingDirection dir{az - 180.0, elevation_deg};
    dir.validate();
    return dir;
}

void PointingDirection::validate() const
{
    if (!(azimuth_deg >= -180.0 && azimuth_deg < 180.0)) {
        throw InputError("azimuth must lie in [-180, 180) degrees");
    }
    if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0)) {
        throw InputError("elevation must lie in [0, 90] degrees");
    }
}

double parabola_incidence_angle(const Paraboloid& mirror, double ray_height_mm)
{
    if (!(mirror.focal_length_mm > 0.0)) {
        throw InputError("focal length must be positive");
    }
    if (!(ray_height_mm >= 0.0 && ray_height_mm <= mirror.semi_diameter_mm)) {
        throw InputError("ray height outside the mirror aperture");
    }
    // Surface slope dz/dr = r / (2 f).
    return std::atan(ray_height_mm / (2.0 * mirror.focal_length_mm));
}

double max_incidence_angle(const Paraboloid& mirror)
{
    return parabola_incidence_angle(mirror, mirror.semi_diameter_mm);
}

double frame_rotation(const PointingDirection& dir)
{
    return (dir.azimuth_deg + dir.elevation_deg) * kDeg;
}

OpticalElement scanning_head_jones(const PointingDirection& dir, const MirrorResponse& coating,
                                   double reference_rotation)
{
    dir.validate();
    const auto mirror = jones::mirror_element(coating);
    return jones::rotator(reference_rotation) * mirror * jones::rotator(-dir.elevation_deg * kDeg) * mirror *
           jones::rotator(dir.azimuth_deg * kDeg);
}

double major_axis_angle(const PolarizationState& state)
{
    const auto h = state.h();
    const auto v = state.v();
    return 0.5 * std::atan2(2.0 * (std::conj(h) * v).real(), std::norm(h) - std::norm(v));
}

std::vector<LabeledState> standard_states()
{
    return {{"H", PolarizationState::horizontal()},
            {"V", PolarizationState::vertical()},
            {"+", PolarizationState::diagonal()},
            {"-", PolarizationState::antidiagonal()}};
}

PerCell measure_cell(const AntennaModel& model, const MirrorResponse& coating, const PointingDirection& dir,
                     const LabeledState& input)
{
    const auto in = input.state.normalized();
    const auto out = scanning_head_jones(dir, coating, model.reference_rotation).apply(in).normalized();
    const auto ideal = scanning_head_jones(dir, MirrorResponse::ideal(), model.reference_rotation).apply(in);
    const double reference = major_axis_angle(ideal);
    return {dir.elevation_deg, dir.azimuth_deg, input.label, jones::measure_per(out, reference),
            jones::fidelity(out, ideal.normalized())};
}

std::vector<PerCell> antenna_per_scan(const AntennaModel& model, const MirrorResponse& coating,
                                      std::span<const double> elevations_deg, std::span<const double> azimuths_deg,
                                      std::span<const LabeledState> states, int jobs)
{
    if (elevations_deg.empty() || azimuths_deg.empty() || states.empty()) {
        throw InputError("PER scan needs non-empty elevation, azimuth and state lists");
    }
    model.geometry.validate();
    jones::mirror_element(coating);  // passivity check before fanning out

    const std::size_t per_el = azimuths_deg.size() * states.size();
    std::vector<PerCell> cells(elevations_deg.size() * per_el);
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        const std::size_t e = i / per_el;
        const std::size_t a = (i % per_el) / states.size();
        const std::size_t s = i % states.size();
        const auto dir = PointingDirection::make(azimuths_deg[a], elevations_deg[e]);
        cells[i] = measure_cell(model, coating, dir, states[s]);
    });
    return cells;
}

PerSummary summarize(std::span<const PerCell> cells)
{
    if (cells.empty()) {
        throw InputError("cannot summarize an empty scan");
    }
    PerSummary s{cells[0].per, 0.0, cells[0].fidelity, 0.0};
    for (const auto& c : cells) {
        s.min_per = std::min(s.min_per, c.per);
        s.min_fidelity = std::min(s.min_fidelity, c.fidelity);
        s.mean_per += c.per;
        s.mean_fidelity += c.fidelity;
    }
    s.mean_per /= static_cast<double>(cells.size());
    s.mean_fidelity /= static_cast<double>(cells.size());
    return s;
}

std::string per_scan_csv(std::span<const PerCell> cells)
{
    using text::format_double;
    std::ostringstream os;
    os << "elevation_deg,azimuth_deg,state_label,per,fidelity\n";
    for (const auto& c : cells) {
        os << format_double(c.elevation_deg) << ',' << format_double(c.azimuth_deg) << ',' << c.state_label << ','
           << format_double(c.per) << ',' << format_double(c.fidelity) << '\n';
    }
    return os.str();
}

std::vector<PerCell> parse_per_scan_csv(const std::string& text, const std::string& source)
{
    const auto table = text::parse_csv(text, source);
    const char* names[] = {"elevation_deg", "azimuth_deg", "state_label", "per", "fidelity"};
    std::size_t idx[5];
    for (int k = 0; k < 5; ++k) {
        idx[k] = table.column(names[k]);
        if (idx[k] == std::string::npos) {
            throw ParseError(source, 1, 0, std::string("missing column ") + names[k]);
        }
    }
    std::vector<PerCell> cells;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = table.row_lines[r];
        auto num = [&](int k) { return text::parse_double({row[idx[k]], idx[k] + 1}, source, line); };
        cells.push_back({num(0), num(1), row[idx[2]], num(3), num(4)});
    }
    return cells;
}

}  // namespace polsim::antenna
