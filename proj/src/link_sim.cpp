// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include "polsim/link_sim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/parallel.hpp"

namespace polsim::link {

namespace {

Eigen::Vector4cd phi_plus_vector()
{
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(0) = v(3) = 1.0 / std::numbers::sqrt2;
    return v;
}

Eigen::Vector2cd analyzer(double phi, int outcome)
{
    if (outcome > 0) {
        return {std::cos(phi), std::sin(phi)};
    }
    return {-std::sin(phi), std::cos(phi)};
}

}  // namespace

TwoQubitState::TwoQubitState(const Matrix4& rho) : rho_(rho)
{
    if (!rho.allFinite()) {
        throw InputError("density matrix has non-finite entries");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InputError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-12) {
        throw InputError("density matrix trace is not 1");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix4> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10) {
        throw InputError("density matrix is not positive semidefinite");
    }
}

TwoQubitState TwoQubitState::phi_plus()
{
    const auto v = phi_plus_vector();
    return TwoQubitState(v * v.adjoint());
}

TwoQubitState TwoQubitState::maximally_mixed()
{
    return TwoQubitState(Matrix4::Identity() / 4.0);
}

TwoQubitState TwoQubitState::werner(double visibility)
{
    if (!(visibility >= -1.0 / 3.0 - 1e-15 && visibility <= 1.0 + 1e-15)) {
        throw InputError("Werner visibility must lie in [-1/3, 1]");
    }
    const auto v = phi_plus_vector();
    return TwoQubitState(visibility * (v * v.adjoint()) + (1.0 - visibility) * Matrix4::Identity() / 4.0);
}

TwoQubitState TwoQubitState::product(const jones::PolarizationState& first, const jones::PolarizationState& second)
{
    const auto a = first.normalized().amplitudes();
    const auto b = second.normalized().amplitudes();
    Eigen::Vector4cd v;
    v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return TwoQubitState(v * v.adjoint());
}

double TwoQubitState::fidelity_to_phi_plus() const
{
    const auto v = phi_plus_vector();
    return (v.adjoint() * rho_ * v)(0).real();
}

double visibility_for_fidelity(double fidelity)
{
    return (4.0 * fidelity - 1.0) / 3.0;
}

TwoQubitState make_source(double fidelity)
{
    if (!(fidelity >= 0.25 && fidelity <= 1.0)) {
        throw InputError("source fidelity must lie in [0.25, 1]");
    }
    return TwoQubitState::werner(visibility_for_fidelity(fidelity));
}

void SourceModel::validate() const
{
    const double f = state.fidelity_to_phi_plus();
    if (!(f >= 0.25 - 1e-12 && f <= 1.0 + 1e-12)) {
        throw InputError("source fidelity must lie in [0.25, 1]");
    }
    if (!(pair_rate_hz >= 0.0) || !std::isfinite(pair_rate_hz)) {
        throw InputError("pair rate must be finite and non-negative");
    }
}

double ChannelModel::transmission() const
{
    return std::pow(10.0, -loss_db / 10.0);
}

void ChannelModel::validate() const
{
    if (!(loss_db >= 0.0) || !std::isfinite(loss_db)) {
        throw InputError("channel loss must be finite and >= 0 dB");
    }
    if (!(depolarization >= 0.0 && depolarization <= 1.0)) {
        throw InputError("depolarization probability must lie in [0, 1]");
    }
    if (!rotation.matrix().allFinite() || rotation.matrix().squaredNorm() == 0.0) {
        throw InputError("channel rotation must be a finite, non-zero Jones matrix");
    }
}

void DetectionModel::validate() const
{
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw InputError("detector efficiency must lie in (0, 1]");
    }
    if (!(dark_rate_hz >= 0.0) || !std::isfinite(dark_rate_hz)) {
        throw InputError("dark count rate must be finite and >= 0");
    }
    if (!(window_s > 0.0) || !std::isfinite(window_s)) {
        throw InputError("coincidence window must be > 0");
    }
    if (!(integration_s > 0.0) || !std::isfinite(integration_s)) {
        throw InputError("integration time must be > 0");
    }
}

TwoQubitState apply_channel(const TwoQubitState& state, const ChannelModel& channel)
{
    channel.validate();
    Matrix4 u = Matrix4::Zero();
    const auto& j = channel.rotation.matrix();
    u.block<2, 2>(0, 0) = j(0, 0) * Eigen::Matrix2cd::Identity();
    u.block<2, 2>(0, 2) = j(0, 1) * Eigen::Matrix2cd::Identity();
    u.block<2, 2>(2, 0) = j(1, 0) * Eigen::Matrix2cd::Identity();
    u.block<2, 2>(2, 2) = j(1, 1) * Eigen::Matrix2cd::Identity();
    Matrix4 rho = u * state.rho() * u.adjoint();
    const double norm = rho.trace().real();
    if (!(norm > 0.0)) {
        throw NumericError("channel extinguishes the state");
    }
    rho /= norm;

    // Depolarize qubit 1: rho -> (1 - p) rho + p I/2 (x) Tr_1(rho).
    const double p = channel.depolarization;
    if (p > 0.0) {
        const Eigen::Matrix2cd reduced = rho.block<2, 2>(0, 0) + rho.block<2, 2>(2, 2);
        Matrix4 mixed = Matrix4::Zero();
        mixed.block<2, 2>(0, 0) = reduced / 2.0;
        mixed.block<2, 2>(2, 2) = reduced / 2.0;
        rho = (1.0 - p) * rho + p * mixed;
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return TwoQubitState(rho);
}

std::array<Setting, 4> standard_settings()
{
    constexpr double pi = std::numbers::pi;
    return {{{0.0, pi / 8.0}, {0.0, 3.0 * pi / 8.0}, {pi / 4.0, pi / 8.0}, {pi / 4.0, 3.0 * pi / 8.0}}};
}

double joint_probability(const TwoQubitState& state, double phi1, int a, double phi2, int b)
{
    const auto x = analyzer(phi1, a);
    const auto y = analyzer(phi2, b);
    Eigen::Vector4cd v;
    v << x(0) * y(0), x(0) * y(1), x(1) * y(0), x(1) * y(1);
    return (v.adjoint() * state.rho() * v)(0).real();
}

double correlation(const TwoQubitState& state, double phi1, double phi2)
{
    return joint_probability(state, phi1, +1, phi2, +1) + joint_probability(state, phi1, -1, phi2, -1) -
           joint_probability(state, phi1, +1, phi2, -1) - joint_probability(state, phi1, -1, phi2, +1);
}

double chsh_analytic(const TwoQubitState& state, std::span<const Setting, 4> s)
{
    return std::abs(correlation(state, s[0].phi1, s[0].phi2) - correlation(state, s[1].phi1, s[1].phi2) +
                    correlation(state, s[2].phi1, s[2].phi2) + correlation(state, s[3].phi1, s[3].phi2));
}

// ---------------------------------------------------------------------------

std::vector<OffsetCell> offset_scan(std::span<const double> ground_offsets_deg,
                                    std::span<const double> sat_offsets_deg, const antenna::AntennaModel& model,
                                    const jones::MirrorResponse& coating, const jones::PolarizationState& input,
                                    std::span<const Geometry> geometry,
                                    const compensation::CompensationConfig& config, int jobs)
{
    if (ground_offsets_deg.empty() || sat_offsets_deg.empty()) {
        throw InputError("offset grids must not be empty");
    }
    if (geometry.empty()) {
        throw InputError("offset scan needs at least one geometry sample");
    }
    config.validate();
    std::vector<OffsetCell> cells(ground_offsets_deg.size() * sat_offsets_deg.size());
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        const double g = ground_offsets_deg[i / sat_offsets_deg.size()];
        const double s = sat_offsets_deg[i % sat_offsets_deg.size()];
        double sum = 0.0;
        for (const auto& geo : geometry) {
            const double hwp = compensation::compensation_angle(geo.theta_deg, geo.phi_deg, geo.beta_deg + s,
                                                                config.zero_point_deg, config.sign) +
                               g;
            sum += compensation::compensated_fidelity(model, coating, input, geo.theta_deg, geo.phi_deg,
                                                      geo.beta_deg, hwp);
        }
        cells[i] = {g, s, sum / static_cast<double>(geometry.size())};
    });
    return cells;
}

OffsetCell offset_peak(std::span<const OffsetCell> cells)
{
    if (cells.empty()) {
        throw InputError("offset scan is empty");
    }
    const OffsetCell* best = &cells.front();
    for (const auto& c : cells) {
        if (c.fidelity > best->fidelity) {
            best = &c;
        }
    }
    return *best;
}

std::string offset_scan_csv(std::span<const OffsetCell> cells)
{
    using text::format_double;
    std::ostringstream os;
    os << "ground_offset_deg,sat_offset_deg,fidelity\n";
    for (const auto& c : cells) {
        os << format_double(c.ground_offset_deg) << ',' << format_double(c.sat_offset_deg) << ','
           << format_double(c.fidelity) << '\n';
    }
    return os.str();
}

std::vector<OffsetCell> parse_offset_scan_csv(const std::string& text, const std::string& source)
{
    const auto table = text::parse_csv(text, source);
    const char* names[] = {"ground_offset_deg", "sat_offset_deg", "fidelity"};
    std::size_t idx[3];
    for (int k = 0; k < 3; ++k) {
        idx[k] = table.column(names[k]);
        if (idx[k] == std::string::npos) {
            throw ParseError(source, 1, 0, std::string("missing column ") + names[k]);
        }
    }
    std::vector<OffsetCell> cells;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto num = [&](int k) { return text::parse_double({row[idx[k]], idx[k] + 1}, source, table.row_lines[r]); };
        cells.push_back({num(0), num(1), num(2)});
    }
    return cells;
}

}  // namespace polsim::link
