// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <doctest.h>

#include <limits>

#include "oracles.hpp"
#include "polsim/error.hpp"
#include "polsim/jones.hpp"

using namespace polsim;
using namespace polsim::jones;
using oracle::kPi;

namespace {

const PolarizationState H = PolarizationState::horizontal();
const PolarizationState V = PolarizationState::vertical();
const PolarizationState D = PolarizationState::diagonal();
const PolarizationState A = PolarizationState::antidiagonal();

double fid_out(const OpticalElement& e, const PolarizationState& in, const PolarizationState& target)
{
    return fidelity(e.apply(in).normalized(), target);
}

}  // namespace

TEST_CASE("states normalize and hide global phase")
{
    const PolarizationState s({3.0, 1.0}, {0.0, -4.0});
    CHECK(s.normalized().norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(PolarizationState(0.0, 0.0).normalized(), InputError);
    const auto n = s.normalized();
    for (double g : {0.1, 1.0, 2.5, -3.0}) {
        const auto shifted = PolarizationState(n.amplitudes() * std::polar(1.0, g));
        CHECK(fidelity(n, shifted) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fidelity anchors")
{
    CHECK(fidelity(H, H) == doctest::Approx(1.0));
    CHECK(fidelity(H, V) == doctest::Approx(0.0));
    CHECK(fidelity(H, D) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fidelity(PolarizationState(2.0, 0.0), H), InputError);
    CHECK(fidelity(D, PolarizationState::linear(0.3)) == doctest::Approx(fidelity(PolarizationState::linear(0.3), D)));
}

TEST_CASE("half-wave plate examples")
{
    CHECK(fid_out(hwp(0.0), H, H) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fid_out(hwp(kPi / 8), H, D) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fid_out(hwp(kPi / 4), H, V) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(hwp(std::numeric_limits<double>::quiet_NaN()), InputError);
    CHECK_THROWS_AS(qwp(std::numeric_limits<double>::infinity()), InputError);
}

TEST_CASE("half-wave plate maps linear angle gamma to 2 alpha - gamma")
{
    for (double alpha = -1.5; alpha < 1.6; alpha += 0.37) {
        for (double gamma = -1.2; gamma < 1.3; gamma += 0.41) {
            const auto out = hwp(alpha).apply(PolarizationState::linear(gamma));
            CHECK(fidelity(out.normalized(), PolarizationState::linear(2 * alpha - gamma)) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("quarter-wave plate examples")
{
    CHECK(fid_out(qwp(0.0), H, H) == doctest::Approx(1.0).epsilon(1e-12));
    const auto c = qwp(kPi / 4).apply(H);
    CHECK(std::norm(c.h()) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(c.v()) == doctest::Approx(0.5).epsilon(1e-12));
    const Eigen::Matrix2cd twice = qwp(0.3).matrix() * qwp(0.3).matrix();
    CHECK(oracle::distance_up_to_phase(twice, hwp(0.3).matrix()) < 1e-12);
}

TEST_CASE("waveplates and rotators are unitary")
{
    for (double a = -4.0; a < 4.0; a += 0.13) {
        for (const auto& e : {hwp(a), qwp(a), rotator(a), retarder(a, 0.7 * a)}) {
            const Eigen::Matrix2cd m = e.matrix().adjoint() * e.matrix();
            CHECK((m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("polarizer follows Malus' law and is a projector")
{
    CHECK(polarizer(0.0).apply(H).intensity() == doctest::Approx(1.0));
    CHECK(polarizer(kPi / 2).apply(H).intensity() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(polarizer(kPi / 6).apply(H).intensity() == doctest::Approx(0.75).epsilon(1e-12));
    for (double a = -1.5; a < 1.5; a += 0.2) {
        const auto p = polarizer(a).matrix();
        CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
        for (double g = -1.5; g < 1.5; g += 0.3) {
            const double c = std::cos(a - g);
            CHECK(std::abs(polarizer(a).apply(PolarizationState::linear(g)).intensity() - c * c) < 1e-12);
        }
    }
}

TEST_CASE("mirror elements")
{
    const auto id = mirror_element({1.0, 1.0}).matrix();
    CHECK((id - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(fid_out(mirror_element(MirrorResponse::ideal()), D, A) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(mirror_element({1.01, -1.0}), InputError);

    const auto measured = MirrorResponse::from_power_and_phase(0.999908, 0.998168, 0.9996 * kPi);
    CHECK(measured.power_s() == doctest::Approx(0.999908).epsilon(1e-12));
    CHECK(measured.power_p() == doctest::Approx(0.998168).epsilon(1e-12));
    CHECK(measured.phase_difference() == doctest::Approx(0.9996 * kPi).epsilon(1e-12));
    // Direct arithmetic: diag(a, b e^{-i d}) on (1, 1)/sqrt2, overlap with (1, -1)/sqrt2.
    const double a = std::sqrt(0.999908);
    const double b = std::sqrt(0.998168);
    const std::complex<double> out_h = a / std::sqrt(2.0);
    const std::complex<double> out_v = b * std::polar(1.0, -0.9996 * kPi) / std::sqrt(2.0);
    const double expected = std::norm((out_h - out_v) / std::sqrt(2.0)) / (std::norm(out_h) + std::norm(out_v));
    const double f = fid_out(mirror_element(measured), D, A);
    CHECK(f == doctest::Approx(expected).epsilon(1e-12));
    CHECK(f >= 0.999);
}

TEST_CASE("PER and fidelity conversions")
{
    CHECK(per_to_fidelity(887) == doctest::Approx(0.99887).epsilon(5e-6));
    CHECK(per_to_fidelity(445) == doctest::Approx(0.99776).epsilon(5e-6));
    CHECK(per_to_fidelity(1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(per_to_fidelity(0.0), InputError);
    CHECK_THROWS_AS(per_to_fidelity(-2.0), InputError);
    CHECK_THROWS_AS(fidelity_to_per(1.0), InputError);
    for (double per = 1.0001; per < 1e8; per *= 1.7) {
        const double f = per_to_fidelity(per);
        CHECK(f > 0.5);
        CHECK(f < 1.0);
        CHECK(fidelity_to_per(f) == doctest::Approx(per).epsilon(1e-15 * per * per + 1e-12));
    }
    for (double f = 0.5001; f < 0.99999; f += 0.0173) {
        CHECK(per_to_fidelity(fidelity_to_per(f)) == doctest::Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("measure_per")
{
    CHECK(measure_per(H, 0.0) == kPerCap);
    CHECK(measure_per(D, 0.0) == doctest::Approx(1.0));
    const PolarizationState s(0.9993, 0.0374);
    const double expected = (0.9993 * 0.9993) / (0.0374 * 0.0374);
    CHECK(measure_per(s.normalized(), 0.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(714).epsilon(0.001));
}

TEST_CASE("fiber compensation")
{
    SUBCASE("identity")
    {
        const auto sol = solve_fiber_compensation(OpticalElement::identity());
        CHECK(sol.residual < 1e-6);
    }
    SUBCASE("half-wave channel")
    {
        const auto channel = hwp(0.2);
        const auto sol = solve_fiber_compensation(channel);
        const auto total = qwp(sol.q1) * hwp(sol.h) * qwp(sol.q2) * channel;
        CHECK(fidelity(total.apply(H).normalized(), H) >= 1 - 1e-9);
        CHECK(fidelity(total.apply(D).normalized(), D) >= 1 - 1e-9);
    }
    SUBCASE("random unitaries")
    {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 100; ++i) {
            const OpticalElement channel(oracle::random_unitary(rng));
            const auto sol = solve_fiber_compensation(channel);
            const auto total = qwp(sol.q1) * hwp(sol.h) * qwp(sol.q2) * channel;
            CHECK(oracle::distance_up_to_phase(total.matrix(), Eigen::Matrix2cd::Identity()) < 1e-6);
            for (double a : {sol.q1, sol.h, sol.q2}) {
                CHECK(a >= -kPi / 2);
                CHECK(a < kPi / 2);
            }
        }
    }
    SUBCASE("non-unitary channel")
    {
        CHECK_THROWS_AS(solve_fiber_compensation(polarizer(0.1)), InputError);
    }
}
