// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "oracles.hpp"
#include "polsim/compensation.hpp"
#include "polsim/csv.hpp"
#include "polsim/error.hpp"

using namespace polsim;
using namespace polsim::compensation;
using jones::MirrorResponse;
using jones::PolarizationState;
using oracle::kDeg;
using oracle::kPi;

namespace {

const MirrorResponse kMeasured = MirrorResponse::from_power_and_phase(0.999908, 0.998168, 0.9996 * kPi);

orbit::PassProfile make_pass(const std::vector<std::array<double, 3>>& rows)
{
    orbit::PassProfile p;
    const auto t0 = UtcInstant::from_calendar(2026, 10, 18, 18, 0, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        p.samples.push_back({t0 + static_cast<double>(i), rows[i][0], rows[i][1], rows[i][2]});
    }
    return p;
}

std::vector<orbit::PassProfile> synthetic_passes()
{
    const auto rec =
        tle::parse_tle(text::read_file(std::filesystem::path(POLSIM_TEST_DATA_DIR) / "micius_synthetic.tle"));
    return orbit::extract_passes(rec, orbit::GroundStation::ngari(), rec.epoch(), 2 * 86400.0);
}

}  // namespace

TEST_CASE("compensation angle")
{
    CHECK(compensation_angle(0, 0, 0, 145.8) == doctest::Approx(145.8));
    CHECK(compensation_angle(10, 20, 6, 145.8) == doctest::Approx(163.8));
    CHECK(compensation_angle(40, 30, -1.6, 145.8) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(compensation_angle(10, 20, 6, 145.8, -1) == doctest::Approx(127.8));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-400, 400);
    for (int i = 0; i < 500; ++i) {
        const double a = compensation_angle(u(rng), u(rng), u(rng), 145.8);
        CHECK(a >= 0.0);
        CHECK(a < 180.0);
    }
    // Slope 1/2 in each argument, away from the wrap.
    const double h = 1e-3;
    const double base = compensation_angle(5, 6, 7, 20);
    CHECK((compensation_angle(5 + h, 6, 7, 20) - base) / h == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((compensation_angle(5, 6 + h, 7, 20) - base) / h == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((compensation_angle(5, 6, 7 + h, 20) - base) / h == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("half-turn helpers")
{
    CHECK(reduce_half_turn(-10) == doctest::Approx(170));
    CHECK(reduce_half_turn(180 - 1e-12) == 0.0);
    const std::vector<double> wrapped = {178, 179.5, 0.5, 2, 1, 179};
    const auto u = unwrap_half_turn(wrapped);
    CHECK(u[2] == doctest::Approx(180.5));
    CHECK(u[5] == doctest::Approx(179));
    CHECK(reference_rotation_for_zero_point(145.8) == doctest::Approx(2 * 145.8 * kDeg));
}

TEST_CASE("quantization error")
{
    CHECK(quantization_error(0.01).angle_rad == doctest::Approx(1.745e-4).epsilon(1e-3));
    CHECK(quantization_error(0.0).angle_rad == 0.0);
    CHECK(quantization_error(0.0).infidelity == 0.0);
    CHECK(quantization_error(0.1).angle_rad == doctest::Approx(1.745e-3).epsilon(1e-3));
    CHECK(quantization_error(0.1).infidelity == doctest::Approx(std::pow(std::sin(0.2 * kDeg), 2)).epsilon(1e-12));
    CHECK(quantization_error(0.1).infidelity == doctest::Approx(1.22e-5).epsilon(0.01));
    CHECK_THROWS_AS(quantization_error(-0.1), InputError);
}

TEST_CASE("ideal mirrors compensate exactly")
{
    const antenna::AntennaModel model;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> az(-180, 180), el(0, 90), beta(-90, 90), g(-1.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const double th = az(rng), ph = el(rng), be = beta(rng);
        const auto input = PolarizationState::linear(g(rng));
        const double alpha = compensation_angle(th, ph, be, 145.8);
        CHECK(compensated_fidelity(model, MirrorResponse::ideal(), input, th, ph, be, alpha) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
    const double alpha = compensation_angle(0, 0, 0, 145.8);
    const auto chain = jones::hwp(alpha * kDeg) * uplink_channel(model, MirrorResponse::ideal(), 0, 0, 0);
    CHECK(jones::fidelity(chain.apply(PolarizationState::horizontal()).normalized(),
                          PolarizationState::horizontal()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("schedules")
{
    SUBCASE("constant pass")
    {
        const auto s = schedule_from_pass(make_pass({{10, 20, 3}, {10, 20, 3}, {10, 20, 3}}));
        CHECK(s.max_rate_deg_per_s == 0.0);
        for (const auto& x : s.samples) {
            CHECK(x.hwp_deg == doctest::Approx(compensation_angle(10, 20, 3, 145.8)));
        }
        CHECK(s.warnings.empty());
    }
    SUBCASE("step in beta raises a warning")
    {
        const auto s = schedule_from_pass(make_pass({{10, 20, 0}, {10, 20, 0}, {10, 20, 40}, {10, 20, 40}}));
        CHECK(!s.warnings.empty());
        CHECK(schedule_metadata_json(s).find("warnings") != std::string::npos);
    }
    SUBCASE("slew limit")
    {
        CompensationConfig cfg;
        cfg.max_slew_deg_per_s = 0.1;
        const auto s = schedule_from_pass(make_pass({{0, 20, 0}, {1, 20, 0}, {2, 20, 0}}), cfg);
        CHECK(s.max_rate_deg_per_s == doctest::Approx(0.5));
        CHECK(!s.warnings.empty());
    }
    SUBCASE("wrap does not create phantom rates")
    {
        const auto s = schedule_from_pass(make_pass({{67.6, 0, 0}, {68.0, 0, 0}, {68.8, 0, 0}}));
        CHECK(s.samples[2].hwp_deg < 1.0);
        CHECK(s.samples[1].hwp_deg > 179.0);
        CHECK(s.max_rate_deg_per_s < 0.5);
    }
}

TEST_CASE("synthetic north-to-south passes stay below 0.5 deg/s")
{
    int checked = 0;
    for (const auto& p : synthetic_passes()) {
        const bool n_to_s = std::cos(p.samples.front().azimuth_deg * kDeg) > 0 &&
                            std::cos(p.samples.back().azimuth_deg * kDeg) < 0;
        if (!n_to_s || p.max_elevation() < 20) {
            continue;
        }
        const auto s = schedule_from_pass(p);
        // Finite differences on the unwrapped series.
        double worst = 0.0;
        double jump = 0.0;
        for (std::size_t i = 1; i < s.samples.size(); ++i) {
            const double dt = s.samples[i].t - s.samples[i - 1].t;
            const double d = s.samples[i].unwrapped_deg - s.samples[i - 1].unwrapped_deg;
            worst = std::max(worst, std::abs(d) / dt);
            jump = std::max(jump, std::abs(d));
            CHECK(s.samples[i].hwp_deg >= 0.0);
            CHECK(s.samples[i].hwp_deg < 180.0);
        }
        CHECK(worst == doctest::Approx(s.max_rate_deg_per_s).epsilon(1e-9));
        CHECK(worst < 0.5);
        CHECK(jump < 1.0);
        ++checked;
    }
    CHECK(checked >= 2);
}

TEST_CASE("verify_compensation")
{
    const antenna::AntennaModel model;
    const auto passes = synthetic_passes();
    REQUIRE(!passes.empty());
    for (const auto& p : passes) {
        for (double f : verify_compensation(p, model, MirrorResponse::ideal(), PolarizationState::horizontal())) {
            CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
        }
        const auto fp = verify_compensation(p, model, kMeasured, PolarizationState::horizontal());
        CHECK(*std::min_element(fp.begin(), fp.end()) >= 0.995);
    }
}

TEST_CASE("fixed plate loses fidelity as the frame turns")
{
    const antenna::AntennaModel model;
    // Near-zenith pass: azimuth swings by 150 degrees.
    std::vector<std::array<double, 3>> rows;
    for (int i = 0; i <= 60; ++i) {
        rows.push_back({-60.0 + 2.5 * i, 60.0 + 25.0 * std::sin(kPi * i / 60.0), 0.1 * i});
    }
    const auto pass = make_pass(rows);
    const auto f = verify_compensation(pass, model, MirrorResponse::ideal(), PolarizationState::horizontal(), {},
                                       HwpMode::fixed);
    double worst_expected = 1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double delta = ((rows[i][0] + rows[i][1] + rows[i][2]) - (rows[0][0] + rows[0][1] + rows[0][2])) * kDeg;
        const double expected = std::pow(std::cos(delta), 2);
        CHECK(f[i] == doctest::Approx(expected).epsilon(1e-9));
        worst_expected = std::min(worst_expected, expected);
    }
    CHECK(*std::min_element(f.begin(), f.end()) == doctest::Approx(worst_expected).epsilon(1e-9));
}

TEST_CASE("schedule CSV and metadata")
{
    const auto passes = synthetic_passes();
    const auto s = schedule_from_pass(passes.front());
    const auto text = schedule_csv(s);
    const auto back = parse_schedule_csv(text);
    REQUIRE(back.size() == s.samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].hwp_deg == s.samples[i].hwp_deg);
        CHECK(back[i].rate_deg_per_s == s.samples[i].rate_deg_per_s);
    }
    const auto meta = nlohmann::json::parse(schedule_metadata_json(s));
    CHECK(meta["zero_point_deg"] == 145.8);
    CHECK(meta["max_rate_deg_per_s"].get<double>() == s.max_rate_deg_per_s);
    CHECK(meta["samples"] == s.samples.size());
}
