// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <doctest.h>

#include <filesystem>

#include "oracles.hpp"
#include "polsim/error.hpp"
#include "polsim/thinfilm.hpp"

using namespace polsim;
using namespace polsim::thinfilm;
using oracle::kDeg;
using oracle::kPi;

namespace {

double wrap_pi(double x)
{
    return std::remainder(x, 2 * kPi);
}

LayerStack random_stack(std::mt19937_64& rng, int max_layers)
{
    std::uniform_int_distribution<int> count(1, max_layers);
    std::uniform_real_distribution<double> index(1.3, 2.3);
    std::uniform_real_distribution<double> thick(10.0, 400.0);
    LayerStack s;
    s.ambient = {1.0, 0.0};
    s.substrate = {index(rng), 0.0};
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        s.layers.push_back({{index(rng), 0.0}, thick(rng)});
    }
    return s;
}

}  // namespace

TEST_CASE("snell")
{
    CHECK(std::abs(snell({1.0, 1.5}, 0.0)) < 1e-15);
    CHECK(snell({1.0, 1.5}, 30 * kDeg).real() == doctest::Approx(std::asin(1.0 / 3.0)).epsilon(1e-12));
    const Interface tir{1.5, 1.0};
    const auto t = snell(tir, 60 * kDeg);
    CHECK(std::abs(std::sin(t)) > 1.0);
    CHECK(std::abs(1.5 * std::sin(60 * kDeg) - 1.0 * std::sin(t)) < 1e-12);
}

TEST_CASE("fresnel examples")
{
    const auto n = fresnel({1.0, 1.5}, 0.0);
    CHECK(n.r_s.real() == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(n.r_p.real() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(fresnel({1.0, 1.5}, std::atan(1.5)).r_p) < 1e-12);
    const auto g = fresnel({1.0, 1.5}, 89.9 * kDeg);
    // Grazing limit with plain double arithmetic on the textbook forms.
    const double ci = std::cos(89.9 * kDeg);
    const double ct = std::sqrt(1.0 - std::pow(std::sin(89.9 * kDeg) / 1.5, 2));
    CHECK(std::abs(g.r_s) == doctest::Approx(std::abs((ci - 1.5 * ct) / (ci + 1.5 * ct))).epsilon(1e-12));
    CHECK(std::abs(g.r_p) == doctest::Approx(std::abs((1.5 * ci - ct) / (1.5 * ci + ct))).epsilon(1e-12));
    CHECK(std::abs(g.r_s) > 0.99);
    CHECK(std::abs(g.r_p) > 0.98);
}

TEST_CASE("fresnel properties over random real index pairs")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> idx(1.0, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 89.0 * kDeg);
    for (int i = 0; i < 100; ++i) {
        const Interface iface{idx(rng), idx(rng)};
        CHECK(std::abs(fresnel(iface, std::atan(iface.n.real() / iface.n0.real())).r_p) < 1e-10);
        const auto r0 = fresnel(iface, 0.0);
        const double expected = std::abs(iface.n.real() - iface.n0.real()) / (iface.n.real() + iface.n0.real());
        CHECK(std::abs(std::abs(r0.r_s) - expected) < 1e-12);
        CHECK(std::abs(std::abs(r0.r_s) - std::abs(r0.r_p)) < 1e-12);
        double theta = ang(rng);
        if (iface.n0.real() > iface.n.real()) {
            theta = std::min(theta, 0.9 * std::asin(iface.n.real() / iface.n0.real()));
        }
        const auto r = fresnel(iface, theta);
        const auto t = fresnel_transmittance(iface, theta);
        CHECK(std::abs(r.power_s() + t.s - 1.0) < 1e-10);
        CHECK(std::abs(r.power_p() + t.p - 1.0) < 1e-10);
    }
}

TEST_CASE("empty stack reduces to the bare interface")
{
    const LayerStack s{{1.0, 0.0}, {}, {1.5, 0.0}};
    for (double th : {0.0, 0.3, 1.0}) {
        const auto a = stack_response(s, {th, 780.0});
        const auto b = fresnel({1.0, 1.5}, th);
        const auto c = stack_response_oracle(s, {th, 780.0});
        CHECK(std::abs(a.r_s - b.r_s) < 1e-12);
        CHECK(std::abs(a.r_p - b.r_p) < 1e-12);
        CHECK(c.r_s == b.r_s);
        CHECK(c.r_p == b.r_p);
    }
    CHECK(stack_response(s, {0.0, 780.0}).r_s.real() == doctest::Approx(-0.2).epsilon(1e-12));
}

TEST_CASE("single quarter-wave layer")
{
    const LayerStack s{{1.0, 0.0}, {{{1.38, 0.0}, 780.0 / (4 * 1.38)}}, {1.5, 0.0}};
    const auto r = stack_response(s, {0.0, 780.0});
    const double expected = oracle::quarter_wave_reflectance(1.0, 1.38, 1.5);
    CHECK(expected == doctest::Approx(0.014110).epsilon(1e-4));
    CHECK(r.power_s() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.power_p() == doctest::Approx(expected).epsilon(1e-12));
    const auto o = stack_response_oracle(s, {0.0, 780.0});
    CHECK(std::abs(o.r_s - r.r_s) < 1e-10);
    CHECK(std::abs(o.r_p - r.r_p) < 1e-10);
}

TEST_CASE("characteristic matrix agrees with recursive composition")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(0.0, 80.0 * kDeg);
    std::uniform_real_distribution<double> wl(400.0, 1600.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_stack(rng, 60);
        const Ray ray{ang(rng), wl(rng)};
        const auto a = stack_response(s, ray);
        const auto b = stack_response_oracle(s, ray);
        worst = std::max({worst, std::abs(a.r_s - b.r_s), std::abs(a.r_p - b.r_p)});
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("absorbing layers stay passive and methods agree")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> k(0.0, 0.5);
    for (int i = 0; i < 100; ++i) {
        auto s = random_stack(rng, 20);
        for (auto& l : s.layers) {
            l.index += std::complex<double>(0.0, k(rng));
        }
        const Ray ray{0.7, 633.0};
        const auto a = stack_response(s, ray);
        const auto b = stack_response_oracle(s, ray);
        CHECK(std::abs(a.r_s - b.r_s) < 1e-10);
        CHECK(std::abs(a.r_p - b.r_p) < 1e-10);
        CHECK(a.power_s() <= 1.0);
        CHECK(a.power_p() <= 1.0);
    }
}

TEST_CASE("quarter-wave mirror at 45 degrees")
{
    const auto s = quarter_wave_stack({1.0, 0.0}, {2.10, 0.0}, {1.45, 0.0}, {1.52, 0.0}, 50, 780.0, 45 * kDeg);
    CHECK(s.layers.size() == 50);
    const auto r = stack_response(s, {45 * kDeg, 780.0});
    CHECK(r.power_s() > 0.999);
    CHECK(r.power_s() >= r.power_p());
    CHECK(std::abs(wrap_pi(r.phase_difference() - kPi)) < 0.05 * kPi);
    const auto o = stack_response_oracle(s, {45 * kDeg, 780.0});
    CHECK(std::abs(o.r_s - r.r_s) < 1e-10);
    CHECK(std::abs(o.r_p - r.r_p) < 1e-10);
}

TEST_CASE("reflectance grows with the number of quarter-wave pairs")
{
    double previous = 0.0;
    for (int pairs = 0; pairs <= 25; ++pairs) {
        const auto s = quarter_wave_stack({1.0, 0.0}, {2.10, 0.0}, {1.45, 0.0}, {1.52, 0.0}, 2 * pairs, 780.0, 0.0);
        const double r = stack_response(s, {0.0, 780.0}).power_s();
        CHECK(r >= previous - 1e-15);
        previous = r;
    }
    CHECK(previous > 0.9999);
}

TEST_CASE("stack file parsing")
{
    const std::string text = "# demo\nambient 1 0\nsubstrate 1.52 0\n2.1 0 98.5  # high\n1.45 0 154\n";
    const auto s = parse_stack(text);
    CHECK(s.layers.size() == 2);
    CHECK(s.substrate.real() == 1.52);
    CHECK(s.layers[1].thickness_nm == 154.0);
    const auto again = parse_stack(format_stack(s));
    CHECK(again.layers.size() == 2);
    CHECK(again.layers[0].index == s.layers[0].index);
    CHECK(again.layers[0].thickness_nm == s.layers[0].thickness_nm);
    CHECK(format_stack(again) == format_stack(s));

    auto line_of = [](const std::string& bad) -> std::size_t {
        try {
            parse_stack(bad);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("ambient 1 0\nsubstrate 1.5 0\n2.1 0 -3\n") == 3);
    CHECK(line_of("ambient 1 0\nsubstrate 1.5 0\n2.1 x 3\n") == 3);
    CHECK(line_of("ambient 1 0\n2.1 0 3\nsubstrate 1.5 0\n") == 3);
    CHECK(line_of("ambient 1 0\nambient 1 0\nsubstrate 1.5 0\n") == 2);
    CHECK(line_of("ambient 1 0\nsubstrate 1.5 0\n2.1 0\n") == 3);
    CHECK_THROWS_AS(parse_stack("substrate 1.5 0\n"), ParseError);
}

TEST_CASE("shipped reference stack")
{
    const auto s = load_stack(std::filesystem::path(POLSIM_TEST_DATA_DIR) / "reference_stack.txt");
    CHECK(s.layers.size() == 50);
    const auto r = stack_response(s, {45 * kDeg, 780.0});
    CHECK(r.power_s() > 0.999);
    CHECK(std::abs(wrap_pi(r.phase_difference() - kPi)) < 0.05 * kPi);
}
