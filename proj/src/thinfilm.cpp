// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/thinfilm.hpp"

#include <cmath>
#include <numbers>

#include "polsim/error.hpp"

namespace polsim::thinfilm {

namespace {

using std::numbers::pi;

constexpr Complex kI{0.0, 1.0};

void check_angle(double theta_i)
{
    if (!std::isfinite(theta_i) || theta_i < 0.0 || theta_i >= pi / 2) {
        throw InputError("angle of incidence must lie in [0, pi/2)");
    }
}

void check_index(Complex n, const char* what)
{
    if (!std::isfinite(n.real()) || !std::isfinite(n.imag()) || !(n.real() > 0.0) || n.imag() < 0.0) {
        throw InputError(std::string(what) + ": refractive index needs Re(n) > 0 and Im(n) >= 0");
    }
}

// cos(theta) inside a medium of index n for the Snell invariant
// kappa = n0 sin(theta_0). The branch keeps n cos(theta) in the upper half
// plane so fields decay (or propagate forward) away from the interface.
Complex cos_in_medium(Complex n, Complex kappa)
{
    const Complex s = kappa / n;
    Complex c = std::sqrt(1.0 - s * s);
    const Complex nc = n * c;
    if (nc.imag() < 0.0 || (nc.imag() == 0.0 && nc.real() < 0.0)) {
        c = -c;
    }
    return c;
}

struct Coefficients {
    Complex r_s;
    Complex r_p;
};

// Single-interface coefficients between media a and b for a given invariant.
Coefficients interface_coefficients(Complex na, Complex nb, Complex kappa)
{
    const Complex ca = cos_in_medium(na, kappa);
    const Complex cb = cos_in_medium(nb, kappa);
    return {(na * ca - nb * cb) / (na * ca + nb * cb), (nb * ca - na * cb) / (nb * ca + na * cb)};
}

}  // namespace

void LayerStack::validate() const
{
    check_index(ambient, "ambient");
    check_index(substrate, "substrate");
    for (const auto& layer : layers) {
        check_index(layer.index, "layer");
        if (!(layer.thickness_nm > 0.0) || !std::isfinite(layer.thickness_nm)) {
            throw InputError("layer thickness must be positive");
        }
    }
}

Complex snell(const Interface& iface, double theta_i)
{
    check_index(iface.n0, "n0");
    check_index(iface.n, "n");
    check_angle(theta_i);
    return std::asin(iface.n0 * std::sin(theta_i) / iface.n);
}

MirrorResponse fresnel(const Interface& iface, double theta_i)
{
    check_index(iface.n0, "n0");
    check_index(iface.n, "n");
    check_angle(theta_i);
    const auto c = interface_coefficients(iface.n0, iface.n, iface.n0 * std::sin(theta_i));
    return {c.r_s, c.r_p};
}

Transmittance fresnel_transmittance(const Interface& iface, double theta_i)
{
    check_index(iface.n0, "n0");
    check_index(iface.n, "n");
    check_angle(theta_i);
    const Complex kappa = iface.n0 * std::sin(theta_i);
    const Complex ci = cos_in_medium(iface.n0, kappa);
    const Complex ct = cos_in_medium(iface.n, kappa);
    const Complex t_s = 2.0 * iface.n0 * ci / (iface.n0 * ci + iface.n * ct);
    const Complex t_p = 2.0 * iface.n0 * ci / (iface.n * ci + iface.n0 * ct);
    const double factor = (iface.n * ct).real() / (iface.n0 * ci).real();
    return {factor * std::norm(t_s), factor * std::norm(t_p)};
}

MirrorResponse stack_response(const LayerStack& stack, const Ray& ray)
{
    stack.validate();
    check_angle(ray.theta_i);
    if (!(ray.wavelength_nm > 0.0)) {
        throw InputError("wavelength must be positive");
    }
    const Complex kappa = stack.ambient * std::sin(ray.theta_i);

    // Tilted optical admittances: N cos(theta) for s, N / cos(theta) for p.
    auto admittance = [&](Complex n, bool p) {
        const Complex c = cos_in_medium(n, kappa);
        return p ? n / c : n * c;
    };

    auto reflect = [&](bool p) {
        Eigen::Matrix2cd product = Eigen::Matrix2cd::Identity();
        for (const auto& layer : stack.layers) {
            const Complex c = cos_in_medium(layer.index, kappa);
            const Complex delta = 2.0 * pi * layer.index * layer.thickness_nm * c / ray.wavelength_nm;
            const Complex eta = admittance(layer.index, p);
            Eigen::Matrix2cd m;
            m << std::cos(delta), -kI * std::sin(delta) / eta, -kI * eta * std::sin(delta), std::cos(delta);
            product = product * m;
        }
        const Eigen::Vector2cd bc = product * Eigen::Vector2cd(1.0, admittance(stack.substrate, p));
        const Complex eta0 = admittance(stack.ambient, p);
        return (eta0 * bc(0) - bc(1)) / (eta0 * bc(0) + bc(1));
    };

    // The admittance form of r_p carries the opposite sign to the Fresnel r_p.
    return {reflect(false), -reflect(true)};
}

MirrorResponse stack_response_oracle(const LayerStack& stack, const Ray& ray)
{
    stack.validate();
    check_angle(ray.theta_i);
    if (!(ray.wavelength_nm > 0.0)) {
        throw InputError("wavelength must be positive");
    }
    const Complex kappa = stack.ambient * std::sin(ray.theta_i);
    const auto& layers = stack.layers;
    if (layers.empty()) {
        const auto c = interface_coefficients(stack.ambient, stack.substrate, kappa);
        return {c.r_s, c.r_p};
    }

    auto index_above = [&](std::size_t j) { return j == 0 ? stack.ambient : layers[j - 1].index; };

    Coefficients r = interface_coefficients(layers.back().index, stack.substrate, kappa);
    for (std::size_t j = layers.size(); j-- > 0;) {
        const Complex c = cos_in_medium(layers[j].index, kappa);
        const Complex delta = 2.0 * pi * layers[j].index * layers[j].thickness_nm * c / ray.wavelength_nm;
        const Complex phase = std::exp(2.0 * kI * delta);
        const Coefficients top = interface_coefficients(index_above(j), layers[j].index, kappa);
        r.r_s = (top.r_s + r.r_s * phase) / (1.0 + top.r_s * r.r_s * phase);
        r.r_p = (top.r_p + r.r_p * phase) / (1.0 + top.r_p * r.r_p * phase);
    }
    return {r.r_s, r.r_p};
}

LayerStack quarter_wave_stack(Complex ambient, Complex high, Complex low, Complex substrate,
                              int layer_count, double design_wavelength_nm, double design_angle)
{
    if (layer_count < 0) {
        throw InputError("layer count must be non-negative");
    }
    check_angle(design_angle);
    const Complex kappa = ambient * std::sin(design_angle);
    LayerStack stack{ambient, {}, substrate};
    for (int i = 0; i < layer_count; ++i) {
        const Complex n = (i % 2 == 0) ? high : low;
        const double optical = (n * cos_in_medium(n, kappa)).real();
        stack.layers.push_back({n, design_wavelength_nm / (4.0 * optical)});
    }
    stack.validate();
    return stack;
}

}  // namespace polsim::thinfilm
