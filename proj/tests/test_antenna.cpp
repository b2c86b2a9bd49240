// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <doctest.h>

#include "oracles.hpp"
#include "polsim/antenna.hpp"
#include "polsim/error.hpp"

using namespace polsim;
using namespace polsim::antenna;
using jones::MirrorResponse;
using jones::PolarizationState;
using oracle::kDeg;
using oracle::kPi;

namespace {

const MirrorResponse kMeasured = MirrorResponse::from_power_and_phase(0.999908, 0.998168, 0.9996 * kPi);

const std::vector<double> kEl = {30, 50, 70};
const std::vector<double> kAz = {-180, -135, -90, -45, 0, 45, 90, 135};

}  // namespace

TEST_CASE("paraboloid incidence angles")
{
    const auto g = TelescopeGeometry::reference_design();
    CHECK(g.primary.focal_length_mm == doctest::Approx(812.5));
    CHECK(g.secondary.focal_length_mm == doctest::Approx(32.5));
    CHECK(parabola_incidence_angle(g.primary, 0.0) == 0.0);
    CHECK(parabola_incidence_angle(g.primary, 190.0) / kDeg == doctest::Approx(std::atan(190.0 / 1625.0) / kDeg));
    CHECK(parabola_incidence_angle(g.primary, 190.0) / kDeg == doctest::Approx(6.67).epsilon(0.002));
    CHECK(parabola_incidence_angle(g.secondary, 7.6) / kDeg == doctest::Approx(6.67).epsilon(0.002));
    CHECK_THROWS_AS(parabola_incidence_angle(g.primary, 191.0), InputError);
    CHECK_THROWS_AS(parabola_incidence_angle(g.primary, -1.0), InputError);
    CHECK(max_incidence_angle(g.primary) < 7 * kDeg);
    CHECK(max_incidence_angle(g.secondary) < 7 * kDeg);
}

TEST_CASE("pointing directions wrap and validate")
{
    CHECK(PointingDirection::make(180.0, 10.0).azimuth_deg == doctest::Approx(-180.0));
    CHECK(PointingDirection::make(-190.0, 10.0).azimuth_deg == doctest::Approx(170.0));
    CHECK_THROWS_AS(PointingDirection::make(0.0, 91.0), InputError);
    CHECK_THROWS_AS(PointingDirection::make(0.0, -1.0), InputError);
}

TEST_CASE("ideal scanning head is a pure frame rotation")
{
    const auto ideal = MirrorResponse::ideal();
    const auto ref = scanning_head_jones(PointingDirection::make(0, 0), ideal).apply(PolarizationState::horizontal());
    CHECK(jones::measure_per(ref.normalized(), major_axis_angle(ref)) == jones::kPerCap);

    const auto at90 = scanning_head_jones(PointingDirection::make(90, 0), ideal).apply(PolarizationState::horizontal());
    const double turn = std::remainder(major_axis_angle(at90) - major_axis_angle(ref), kPi);
    CHECK(std::abs(std::abs(turn) - kPi / 2) < 1e-9);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> az(-180, 180), el(0, 90), g(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        const auto dir = PointingDirection::make(az(rng), el(rng));
        const double gamma = g(rng);
        const auto out = scanning_head_jones(dir, ideal).apply(PolarizationState::linear(gamma));
        const double rot = std::remainder(major_axis_angle(out) - gamma, kPi);
        CHECK(std::abs(std::remainder(rot - frame_rotation(dir), kPi)) < 1e-9);
        CHECK(frame_rotation(dir) == doctest::Approx((dir.azimuth_deg + dir.elevation_deg) * kDeg));
    }
}

TEST_CASE("antenna elements are passive")
{
    for (double az : kAz) {
        for (double el : kEl) {
            const auto m = scanning_head_jones(PointingDirection::make(az, el), kMeasured, 1.234).matrix();
            Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
            CHECK(svd.singularValues().maxCoeff() <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("measured coating keeps PER above 400 at (0, 50) for |+>")
{
    const AntennaModel model;
    const auto cell = measure_cell(model, kMeasured, PointingDirection::make(0, 50), standard_states()[2]);
    CHECK(cell.state_label == "+");
    CHECK(cell.per >= 400);
}

TEST_CASE("PER scan")
{
    const AntennaModel model;
    const auto states = standard_states();
    REQUIRE(states.size() == 4);

    SUBCASE("ideal coating saturates")
    {
        for (const auto& c : antenna_per_scan(model, MirrorResponse::ideal(), kEl, kAz, states)) {
            CHECK(c.per == jones::kPerCap);
        }
    }
    SUBCASE("measured coating over the test grid")
    {
        const auto cells = antenna_per_scan(model, kMeasured, kEl, kAz, states, 4);
        CHECK(cells.size() == 96);
        CHECK(summarize(cells).min_per >= 400);
        CHECK(cells.front().elevation_deg == 30);
        CHECK(cells.front().azimuth_deg == -180);
        CHECK(cells[1].state_label == "V");
        CHECK(cells[4].azimuth_deg == -135);
        CHECK(cells.back().elevation_deg == 70);
        // Same cells in the same order with one worker.
        const auto serial = antenna_per_scan(model, kMeasured, kEl, kAz, states, 1);
        CHECK(per_scan_csv(serial) == per_scan_csv(cells));
    }
    SUBCASE("single cell reduces to the Jones composition")
    {
        const std::vector<double> el{50}, az{45};
        const std::vector<LabeledState> one{states[3]};
        const auto cells = antenna_per_scan(model, kMeasured, el, az, one);
        REQUIRE(cells.size() == 1);
        const auto ideal_out =
            scanning_head_jones(PointingDirection::make(45, 50), MirrorResponse::ideal(), model.reference_rotation)
                .apply(states[3].state);
        const auto out = scanning_head_jones(PointingDirection::make(45, 50), kMeasured, model.reference_rotation)
                              .apply(states[3].state)
                              .normalized();
        CHECK(cells[0].per == doctest::Approx(jones::measure_per(out, major_axis_angle(ideal_out))));
    }
    SUBCASE("empty grids are rejected")
    {
        CHECK_THROWS_AS(antenna_per_scan(model, kMeasured, {}, kAz, states), InputError);
    }
}

TEST_CASE("PER CSV round trip")
{
    const AntennaModel model;
    const auto states = standard_states();
    const auto cells = antenna_per_scan(model, kMeasured, kEl, kAz, states);
    const auto text = per_scan_csv(cells);
    const auto back = parse_per_scan_csv(text);
    REQUIRE(back.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(back[i].per == cells[i].per);
        CHECK(back[i].fidelity == cells[i].fidelity);
        CHECK(back[i].state_label == cells[i].state_label);
    }
    CHECK(per_scan_csv(back) == text);
}
