// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/jones.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "polsim/error.hpp"

namespace polsim::jones {

namespace {

using std::numbers::pi;

constexpr Complex kI{0.0, 1.0};

void require_finite(double angle, const char* what)
{
    if (!std::isfinite(angle)) {
        throw InputError(std::string(what) + ": angle must be finite");
    }
}

Matrix2 rotation_matrix(double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Matrix2 m;
    m << c, -s, s, c;
    return m;
}

double wrap_half_open(double angle)
{
    // [-pi/2, pi/2)
    double r = std::fmod(angle + pi / 2, pi);
    if (r < 0) {
        r += pi;
    }
    r -= pi / 2;
    return r >= pi / 2 ? r - pi : r;
}

}  // namespace

// ---------------------------------------------------------------------------
// PolarizationState

PolarizationState::PolarizationState(Complex h, Complex v) : amplitudes_(h, v) {}

PolarizationState::PolarizationState(const Vector2& amplitudes) : amplitudes_(amplitudes) {}

PolarizationState PolarizationState::horizontal() { return {1.0, 0.0}; }

PolarizationState PolarizationState::vertical() { return {0.0, 1.0}; }

PolarizationState PolarizationState::diagonal()
{
    return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
}

PolarizationState PolarizationState::antidiagonal()
{
    return {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2};
}

PolarizationState PolarizationState::linear(double angle)
{
    require_finite(angle, "linear");
    return {std::cos(angle), std::sin(angle)};
}

bool PolarizationState::is_normalized(double tolerance) const
{
    return std::abs(intensity() - 1.0) <= tolerance;
}

PolarizationState PolarizationState::normalized() const
{
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InputError("cannot normalize a zero or non-finite Jones vector");
    }
    return PolarizationState(amplitudes_ / n);
}

// ---------------------------------------------------------------------------
// MirrorResponse

double MirrorResponse::phase_difference() const
{
    double d = std::arg(r_s) - std::arg(r_p);
    while (d <= -pi) {
        d += 2 * pi;
    }
    while (d > pi) {
        d -= 2 * pi;
    }
    return d;
}

MirrorResponse MirrorResponse::from_power_and_phase(double power_s, double power_p, double phase_difference)
{
    if (!(power_s >= 0.0) || !(power_p >= 0.0) || !std::isfinite(phase_difference)) {
        throw InputError("mirror response: powers must be non-negative and phase finite");
    }
    return {Complex(std::sqrt(power_s), 0.0), std::polar(std::sqrt(power_p), -phase_difference)};
}

// ---------------------------------------------------------------------------
// OpticalElement

OpticalElement::OpticalElement(const Matrix2& matrix) : matrix_(matrix) {}

OpticalElement OpticalElement::identity() { return OpticalElement(Matrix2::Identity()); }

OpticalElement OpticalElement::operator*(const OpticalElement& rhs) const
{
    return OpticalElement(matrix_ * rhs.matrix_);
}

PolarizationState OpticalElement::apply(const PolarizationState& state) const
{
    return PolarizationState(Vector2(matrix_ * state.amplitudes()));
}

bool OpticalElement::is_unitary(double tolerance) const
{
    const Matrix2 d = matrix_.adjoint() * matrix_ - Matrix2::Identity();
    return d.cwiseAbs().maxCoeff() <= tolerance;
}

OpticalElement OpticalElement::adjoint() const { return OpticalElement(matrix_.adjoint()); }

OpticalElement retarder(double angle, double retardance)
{
    require_finite(angle, "retarder");
    require_finite(retardance, "retarder retardance");
    Matrix2 d = Matrix2::Zero();
    d(0, 0) = std::exp(-kI * (retardance / 2));
    d(1, 1) = std::exp(kI * (retardance / 2));
    return OpticalElement(rotation_matrix(angle) * d * rotation_matrix(-angle));
}

OpticalElement hwp(double angle)
{
    require_finite(angle, "hwp");
    return retarder(angle, pi);
}

OpticalElement qwp(double angle)
{
    require_finite(angle, "qwp");
    return retarder(angle, pi / 2);
}

OpticalElement rotator(double angle)
{
    require_finite(angle, "rotator");
    return OpticalElement(rotation_matrix(angle));
}

OpticalElement polarizer(double angle)
{
    require_finite(angle, "polarizer");
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Matrix2 m;
    m << c * c, c * s, c * s, s * s;
    return OpticalElement(m);
}

OpticalElement mirror_element(const MirrorResponse& response)
{
    constexpr double slack = 1e-12;
    if (std::abs(response.r_s) > 1.0 + slack || std::abs(response.r_p) > 1.0 + slack) {
        throw InputError("mirror response must be passive (|r_s|, |r_p| <= 1)");
    }
    Matrix2 m = Matrix2::Zero();
    m(0, 0) = response.r_s;
    m(1, 1) = response.r_p;
    return OpticalElement(m);
}

// ---------------------------------------------------------------------------
// Metrics

double fidelity(const PolarizationState& a, const PolarizationState& b)
{
    if (!a.is_normalized() || !b.is_normalized()) {
        throw InputError("fidelity requires normalized states");
    }
    const double f = std::norm(a.amplitudes().dot(b.amplitudes()));
    return std::clamp(f, 0.0, 1.0);
}

double per_to_fidelity(double per)
{
    if (!(per > 0.0)) {
        throw InputError("PER must be positive");
    }
    if (std::isinf(per)) {
        return 1.0;
    }
    return per / (per + 1.0);
}

double fidelity_to_per(double fidelity)
{
    if (!(fidelity > 0.0) || !(fidelity < 1.0)) {
        throw InputError("fidelity must lie in (0, 1) to convert to a finite PER");
    }
    return fidelity / (1.0 - fidelity);
}

double measure_per(const PolarizationState& state, double reference_angle, double cap)
{
    require_finite(reference_angle, "measure_per");
    const double aligned = polarizer(reference_angle).apply(state).intensity();
    const double crossed = polarizer(reference_angle + pi / 2).apply(state).intensity();
    if (crossed * cap <= aligned) {
        return cap;
    }
    return aligned / crossed;
}

// ---------------------------------------------------------------------------
// Fiber compensation

namespace {

using Angles = Eigen::Vector3d;

Matrix2 plate_sequence(const Angles& x)
{
    return qwp(x(0)).matrix() * hwp(x(1)).matrix() * qwp(x(2)).matrix();
}

// The three Pauli components of W * U / sqrt(det U); zero iff W U is a phase.
Eigen::Vector3d su2_axis(const Matrix2& target, const Angles& x)
{
    const Matrix2 m = plate_sequence(x) * target;
    Matrix2 sx;
    Matrix2 sy;
    Matrix2 sz;
    sx << 0, 1, 1, 0;
    sy << 0, -kI, kI, 0;
    sz << 1, 0, 0, -1;
    return {(m * sx).trace().imag() / 2, (m * sy).trace().imag() / 2, (m * sz).trace().imag() / 2};
}

double operator_residual(const Matrix2& channel, const Angles& x)
{
    const Matrix2 m = plate_sequence(x) * channel;
    const Complex half_phase = std::sqrt(channel.determinant());
    double best = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
        const Matrix2 d = m - sign * half_phase * Matrix2::Identity();
        Eigen::JacobiSVD<Matrix2> svd(d);
        best = std::min(best, svd.singularValues()(0));
    }
    return best;
}

bool polish(const Matrix2& target, Angles& x)
{
    constexpr double step = 1e-7;
    double lambda = 1e-6;
    Eigen::Vector3d f = su2_axis(target, x);
    for (int iter = 0; iter < 60; ++iter) {
        if (f.norm() < 1e-14) {
            return true;
        }
        Eigen::Matrix3d jac;
        for (int k = 0; k < 3; ++k) {
            Angles hi = x;
            Angles lo = x;
            hi(k) += step;
            lo(k) -= step;
            jac.col(k) = (su2_axis(target, hi) - su2_axis(target, lo)) / (2 * step);
        }
        const Eigen::Matrix3d normal = jac.transpose() * jac;
        const Eigen::Vector3d grad = jac.transpose() * f;
        bool improved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const Eigen::Matrix3d damped = normal + lambda * Eigen::Matrix3d::Identity();
            const Angles candidate = x - damped.ldlt().solve(grad);
            const Eigen::Vector3d fc = su2_axis(target, candidate);
            if (fc.norm() < f.norm()) {
                x = candidate;
                f = fc;
                lambda = std::max(lambda / 10, 1e-12);
                improved = true;
                break;
            }
            lambda *= 10;
        }
        if (!improved) {
            break;
        }
    }
    return f.norm() < 1e-12;
}

}  // namespace

double compensation_residual(const OpticalElement& channel, double q1, double h, double q2)
{
    return operator_residual(channel.matrix(), Angles(q1, h, q2));
}

FiberCompensation solve_fiber_compensation(const OpticalElement& channel)
{
    if (!channel.matrix().allFinite() || !channel.is_unitary(1e-9)) {
        throw InputError("fiber compensation requires a unitary channel");
    }
    const Matrix2 target = channel.matrix() / std::sqrt(channel.matrix().determinant());

    // Coarse grid over the plate angles, ranked by distance to a pure phase.
    constexpr int grid = 8;
    std::vector<std::pair<double, Angles>> seeds;
    seeds.reserve(grid * grid * grid);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            for (int k = 0; k < grid; ++k) {
                const Angles x(-pi / 2 + pi * i / grid, -pi / 2 + pi * j / grid, -pi / 2 + pi * k / grid);
                seeds.emplace_back(su2_axis(target, x).norm(), x);
            }
        }
    }
    std::stable_sort(seeds.begin(), seeds.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    double best_residual = std::numeric_limits<double>::infinity();
    constexpr std::size_t max_attempts = 32;
    for (std::size_t n = 0; n < std::min(max_attempts, seeds.size()); ++n) {
        Angles x = seeds[n].second;
        polish(target, x);
        for (int k = 0; k < 3; ++k) {
            x(k) = wrap_half_open(x(k));
        }
        const double residual = operator_residual(channel.matrix(), x);
        best_residual = std::min(best_residual, residual);
        if (residual < 1e-9) {
            return {x(0), x(1), x(2), residual};
        }
    }
    throw NumericError("fiber compensation did not converge", best_residual);
}

}  // namespace polsim::jones
