// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors
//
// Reference computations used only by the tests. Each one is written
// independently of the library code it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

/// Normal-incidence reflectance of one quarter-wave layer n1 between n0 and ns.
inline double quarter_wave_reflectance(double n0, double n1, double ns)
{
    const double x = (n0 * ns - n1 * n1) / (n0 * ns + n1 * n1);
    return x * x;
}

/// Root of E - e sin E = M by plain bisection on [M - 1, M + 1] (e < 1).
inline double kepler_bisection(double m, double e)
{
    double lo = m - 1.0;
    double hi = m + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid - e * std::sin(mid) - m > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Correlation of a Werner state for linear analyzers.
inline double werner_correlation(double v, double phi1, double phi2)
{
    return v * std::cos(2.0 * (phi1 - phi2));
}

/// Haar-random 2x2 unitary from the QR of a complex Gaussian matrix.
inline Eigen::Matrix2cd random_unitary(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::Matrix2cd z;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            z(i, j) = {g(rng), g(rng)};
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) {
        q.col(k) *= r(k, k) / std::abs(r(k, k));
    }
    return q;
}

/// Operator 2-norm distance to the nearest multiple of the identity with
/// unit modulus, i.e. equality up to global phase.
inline double distance_up_to_phase(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b)
{
    const std::complex<double> overlap = (b.adjoint() * a).trace();
    const std::complex<double> phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
    return (a - phase * b).operatorNorm();
}

/// Kolmogorov survival function Q_KS(lambda).
inline double ks_q(double lambda)
{
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = sign * 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12 * std::abs(sum)) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS test of `sample` against the standard normal; returns the p-value.
inline double ks_normal_pvalue(std::vector<double> sample)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sample[i] / std::numbers::sqrt2);
        d = std::max({d, std::abs(cdf - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - cdf)});
    }
    const double sqrt_n = std::sqrt(n);
    return ks_q((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

inline Moments moments(const std::vector<double>& x)
{
    Moments m;
    for (double v : x) {
        m.mean += v;
    }
    m.mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m.mean) * (v - m.mean);
    }
    m.stddev = std::sqrt(ss / static_cast<double>(x.size() - 1));
    return m;
}

}  // namespace oracle
