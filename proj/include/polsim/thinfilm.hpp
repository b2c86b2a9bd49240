// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "polsim/jones.hpp"

namespace polsim::thinfilm {

using Complex = std::complex<double>;
using jones::MirrorResponse;

// Refractive indices are N = n + i*k with k >= 0 absorbing (exp(-i w t)).

/// Planar boundary between an incident medium (n0) and a transmitting one (n).
struct Interface {
    Complex n0{1.0, 0.0};
    Complex n{1.5, 0.0};
};

struct Ray {
    double theta_i = 0.0;        ///< angle of incidence, radians
    double wavelength_nm = 780.0;
};

struct Layer {
    Complex index;
    double thickness_nm = 0.0;
};

/// Coating between an ambient medium and a substrate; layers are listed from
/// the ambient side. An empty list is a bare interface.
struct LayerStack {
    Complex ambient{1.0, 0.0};
    std::vector<Layer> layers;
    Complex substrate{1.5, 0.0};

    void validate() const;
};

/// Complex refraction angle from n0 sin(theta_i) = n sin(theta_t).
Complex snell(const Interface& iface, double theta_i);

/// Single-interface amplitude coefficients:
///   r_s = (n0 cos_i - n cos_t) / (n0 cos_i + n cos_t)
///   r_p = (n cos_i - n0 cos_t) / (n cos_i + n0 cos_t)
MirrorResponse fresnel(const Interface& iface, double theta_i);

/// Power transmitted through a single interface, Re(n cos_t)/Re(n0 cos_i) |t|^2,
/// for s and p. Used for energy-balance checks.
struct Transmittance {
    double s = 0.0;
    double p = 0.0;
};
Transmittance fresnel_transmittance(const Interface& iface, double theta_i);

/// Multilayer response by the characteristic-matrix method. r_p uses the same
/// sign convention as `fresnel`.
MirrorResponse stack_response(const LayerStack& stack, const Ray& ray);

/// Same contract as stack_response, computed by recursively folding single
/// interface coefficients from the substrate upward.
MirrorResponse stack_response_oracle(const LayerStack& stack, const Ray& ray);

/// Alternating high/low stack with each layer a quarter wave at the given
/// design wavelength and angle, starting with the high index on the ambient side.
LayerStack quarter_wave_stack(Complex ambient, Complex high, Complex low, Complex substrate,
                              int layer_count, double design_wavelength_nm, double design_angle);

/// Parses the stack description format:
///
///     # comment
///     ambient   1.0  0.0
///     substrate 1.52 0.0
///     2.10 0.0 98.2        <- index_real index_imag thickness_nm
///
/// Errors are ParseError with the offending line number.
LayerStack parse_stack(const std::string& text, const std::string& source_name = "<stack>");
LayerStack load_stack(const std::filesystem::path& path);
std::string format_stack(const LayerStack& stack);

}  // namespace polsim::thinfilm
