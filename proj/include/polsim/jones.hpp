// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace polsim::jones {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

/// PER values are clamped here so that perfect states stay finite in reports.
inline constexpr double kPerCap = 1e9;

/**
 * Jones vector of a fully polarized photon in the H/V basis.
 *
 * Amplitudes are stored as given; `normalized()` returns the unit-norm
 * representative. Global phase is carried but never observable through
 * `fidelity`.
 */
class PolarizationState {
public:
    PolarizationState(Complex h, Complex v);
    explicit PolarizationState(const Vector2& amplitudes);

    static PolarizationState horizontal();
    static PolarizationState vertical();
    static PolarizationState diagonal();      // |+> = (|H> + |V>)/sqrt(2)
    static PolarizationState antidiagonal();  // |-> = (|H> - |V>)/sqrt(2)
    /// Linear polarization at `angle` radians counterclockwise from H.
    static PolarizationState linear(double angle);

    Complex h() const { return amplitudes_(0); }
    Complex v() const { return amplitudes_(1); }
    const Vector2& amplitudes() const { return amplitudes_; }

    double norm() const { return amplitudes_.norm(); }
    double intensity() const { return amplitudes_.squaredNorm(); }
    bool is_normalized(double tolerance = 1e-9) const;
    /// Throws InputError for the zero vector.
    PolarizationState normalized() const;

private:
    Vector2 amplitudes_;
};

/// Complex reflection coefficients of a mirror in its own s/p frame.
struct MirrorResponse {
    Complex r_s{1.0, 0.0};
    Complex r_p{-1.0, 0.0};

    double power_s() const { return std::norm(r_s); }
    double power_p() const { return std::norm(r_p); }
    /// arg(r_s) - arg(r_p), wrapped to (-pi, pi].
    double phase_difference() const;

    /// Lossless mirror with exactly pi between s and p.
    static MirrorResponse ideal() { return {}; }
    /// Builds r_s = sqrt(Rs), r_p = sqrt(Rp) exp(-i dphi) so that
    /// phase_difference() == dphi.
    static MirrorResponse from_power_and_phase(double power_s, double power_p, double phase_difference);
};

/// 2x2 complex Jones matrix. Composition follows matrix order: (a * b)
/// applies b first.
class OpticalElement {
public:
    explicit OpticalElement(const Matrix2& matrix);

    static OpticalElement identity();

    const Matrix2& matrix() const { return matrix_; }
    OpticalElement operator*(const OpticalElement& rhs) const;
    /// Unnormalized output; intensity() of the result is the transmitted power.
    PolarizationState apply(const PolarizationState& state) const;
    bool is_unitary(double tolerance = 1e-12) const;
    OpticalElement adjoint() const;

private:
    Matrix2 matrix_;
};

/// Linear retarder with its fast axis at `angle` (counterclockwise from H)
/// and phase delay `retardance` of the slow axis, normalized to det = 1.
OpticalElement retarder(double angle, double retardance);
OpticalElement hwp(double angle);
OpticalElement qwp(double angle);
/// Rotates the polarization plane by `angle` (H goes to linear(angle)).
OpticalElement rotator(double angle);
/// Rank-1 projector onto linear(angle).
OpticalElement polarizer(double angle);
/// diag(r_s, r_p) in the mirror's s/p frame. Throws InputError for |r| > 1.
OpticalElement mirror_element(const MirrorResponse& response);

/// |<a|b>|^2. Both states must be normalized to within 1e-9.
double fidelity(const PolarizationState& a, const PolarizationState& b);

double per_to_fidelity(double per);
double fidelity_to_per(double fidelity);

/// I(reference) / I(reference + pi/2) behind an ideal polarizer, clamped to `cap`.
double measure_per(const PolarizationState& state, double reference_angle, double cap = kPerCap);

struct FiberCompensation {
    double q1 = 0.0;  ///< first QWP (applied last)
    double h = 0.0;
    double q2 = 0.0;  ///< second QWP (applied first, right after the channel)
    double residual = 0.0;
};

/// min over global phase c of || qwp(q1) hwp(h) qwp(q2) channel - c I ||_2.
double compensation_residual(const OpticalElement& channel, double q1, double h, double q2);

/// Finds plate angles in [-pi/2, pi/2) that undo a unitary channel. Throws
/// InputError for non-unitary input and NumericError when no seed converges.
FiberCompensation solve_fiber_compensation(const OpticalElement& channel);

}  // namespace polsim::jones
