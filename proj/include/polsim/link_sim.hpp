// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polsim/antenna.hpp"
#include "polsim/compensation.hpp"
#include "polsim/jones.hpp"

namespace polsim::link {

using Matrix4 = Eigen::Matrix4cd;

/// Density matrix in the {HH, HV, VH, VV} basis. The first qubit is the
/// photon sent up to the satellite, the second stays on the ground.
class TwoQubitState {
public:
    /// Throws InputError unless rho is Hermitian, unit-trace and PSD.
    explicit TwoQubitState(const Matrix4& rho);

    static TwoQubitState phi_plus();
    static TwoQubitState maximally_mixed();
    /// V |Phi+><Phi+| + (1 - V) I/4, V in [-1/3, 1].
    static TwoQubitState werner(double visibility);
    static TwoQubitState product(const jones::PolarizationState& first, const jones::PolarizationState& second);

    const Matrix4& rho() const { return rho_; }
    double fidelity_to_phi_plus() const;

private:
    Matrix4 rho_;
};

/// V = (4F - 1) / 3.
double visibility_for_fidelity(double fidelity);

/// Werner state with <Phi+|rho|Phi+> = fidelity, fidelity in [0.25, 1].
TwoQubitState make_source(double fidelity);

struct SourceModel {
    TwoQubitState state = TwoQubitState::phi_plus();
    double pair_rate_hz = 1e6;

    void validate() const;
};

/// Acts on the first (uplinked) qubit only.
struct ChannelModel {
    double loss_db = 0.0;
    jones::OpticalElement rotation = jones::OpticalElement::identity();
    double depolarization = 0.0;

    double transmission() const;
    void validate() const;
};

/// Efficiency, dark rate and window are typical hardware values; 265 s per
/// setting is half of a 530 s passage.
struct DetectionModel {
    double efficiency = 0.3;
    double dark_rate_hz = 100.0;
    double window_s = 2.5e-9;
    double integration_s = 265.0;

    void validate() const;
};

/// Unitary rotation followed by single-qubit depolarization of qubit 1.
TwoQubitState apply_channel(const TwoQubitState& state, const ChannelModel& channel);

struct Setting {
    double phi1 = 0.0;  ///< satellite analyzer, radians
    double phi2 = 0.0;  ///< ground analyzer, radians
};

/// (0, pi/8), (0, 3pi/8), (pi/4, pi/8), (pi/4, 3pi/8).
std::array<Setting, 4> standard_settings();

/// Probability of outcomes (a, b), +1 for the analyzer angle and -1 for the
/// perpendicular one.
double joint_probability(const TwoQubitState& state, double phi1, int a, double phi2, int b);

/// E = P(++) + P(--) - P(+-) - P(-+).
double correlation(const TwoQubitState& state, double phi1, double phi2);

/// |E(s0) - E(s1) + E(s2) + E(s3)| for settings ordered (phi1,phi2),
/// (phi1,phi2'), (phi1',phi2), (phi1',phi2').
double chsh_analytic(const TwoQubitState& state, std::span<const Setting, 4> settings);

/// Coincidences in the canonical order C(phi1,phi2), C(phi1+,phi2+),
/// C(phi1,phi2+), C(phi1+,phi2) where + denotes the perpendicular angle.
template <typename T>
struct Quad {
    T pp{};
    T mm{};
    T pm{};
    T mp{};

    T total() const { return pp + mm + pm + mp; }
};

using CountQuad = Quad<std::uint64_t>;
using ExpectedQuad = Quad<double>;

/// Mean counts over det.integration_s: true pairs (rate x transmission x
/// efficiency^2 x outcome probability) plus accidentals between unpaired
/// singles and dark counts falling in one window.
ExpectedQuad expected_counts(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                             const Setting& setting);

/// Poisson draw of each count from a Philox stream keyed by `seed`. The
/// stream id is `stream`; run_bell_test uses the setting index.
CountQuad simulate_coincidences(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                                const Setting& setting, std::uint64_t seed, std::uint64_t stream = 0);

struct Correlation {
    double value = 0.0;
    double sigma = 0.0;
};

/// E from counts with first-order Poisson propagation,
/// var(E) = 4 (pp+mm)(pm+mp) / N^3. Throws NumericError when N = 0.
Correlation estimate_correlation(const CountQuad& counts);
Correlation estimate_correlation(const ExpectedQuad& counts);

struct ChshResult {
    std::array<Setting, 4> settings{};
    std::array<CountQuad, 4> counts{};
    std::array<Correlation, 4> correlations{};
    double s = 0.0;
    double sigma_s = 0.0;
    std::uint64_t total_coincidences = 0;
};

ChshResult estimate_chsh(std::span<const Setting, 4> settings, std::span<const CountQuad, 4> counts);

/// S from expected (mean) counts, i.e. the value the estimator converges to.
double expected_chsh(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                     std::span<const Setting, 4> settings);
double expected_total(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                      std::span<const Setting, 4> settings);

/// Simulates all four settings (stream = setting index) and estimates S.
ChshResult run_bell_test(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                         std::span<const Setting, 4> settings, std::uint64_t seed);

/// Standard deviation of S over parametric Poisson resamples of the observed
/// counts; an alternative to propagation when counts are small.
double bootstrap_sigma_s(const ChshResult& result, int resamples, std::uint64_t seed);

struct Calibration {
    ChannelModel channel;
    double expected_s = 0.0;
    double expected_total = 0.0;
};

/// Solves the loss for `target_total` coincidences over the four settings,
/// then the depolarization for an expected S of `target_s`. Throws
/// NumericError when the target S exceeds what the source and accidentals allow.
Calibration calibrate_channel(const SourceModel& source, const DetectionModel& det,
                              std::span<const Setting, 4> settings, double target_s, double target_total);

/// `setting_phi1_rad,setting_phi2_rad,c_pp,c_mm,c_pm,c_mp`
std::string counts_csv(const ChshResult& result);
/// Reads the four settings back from a counts file.
ChshResult parse_counts_csv(const std::string& text, const std::string& source = "<counts>");

// ---------------------------------------------------------------------------
// Offset scan

struct Geometry {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double beta_deg = 0.0;
};

struct OffsetCell {
    double ground_offset_deg = 0.0;
    double sat_offset_deg = 0.0;
    double fidelity = 0.0;
};

/**
 * Compensated uplink fidelity with deliberate offsets. A ground offset g is
 * added to the HWP angle; a satellite offset s is added to the satellite
 * angle fed to the compensation law. With ideal optics the fidelity is
 * cos^2(2g + s). Each cell averages over `geometry`.
 */
std::vector<OffsetCell> offset_scan(std::span<const double> ground_offsets_deg,
                                    std::span<const double> sat_offsets_deg, const antenna::AntennaModel& model,
                                    const jones::MirrorResponse& coating, const jones::PolarizationState& input,
                                    std::span<const Geometry> geometry,
                                    const compensation::CompensationConfig& config = {}, int jobs = 1);

/// Highest-fidelity cell; ties go to the first in scan order.
OffsetCell offset_peak(std::span<const OffsetCell> cells);

/// `ground_offset_deg,sat_offset_deg,fidelity`
std::string offset_scan_csv(std::span<const OffsetCell> cells);
std::vector<OffsetCell> parse_offset_scan_csv(const std::string& text, const std::string& source = "<offset-scan>");

}  // namespace polsim::link
