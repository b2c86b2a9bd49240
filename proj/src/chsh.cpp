// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The polsim Authors

#include <cmath>
#include <sstream>

#include <boost/random/poisson_distribution.hpp>

#include "polsim/csv.hpp"
#include "polsim/error.hpp"
#include "polsim/link_sim.hpp"
#include "polsim/philox.hpp"

namespace polsim::link {

namespace {

std::uint64_t poisson(Philox4x32& engine, double mean)
{
    if (!(mean > 0.0)) {
        return 0;
    }
    boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
    return dist(engine);
}

/// Marginal probability that the analyzer of `qubit` (0 or 1) reports
/// `outcome` for angle `phi`.
double marginal(const TwoQubitState& state, int qubit, double phi, int outcome)
{
    return qubit == 0 ? joint_probability(state, phi, outcome, 0.0, +1) + joint_probability(state, phi, outcome, 0.0, -1)
                      : joint_probability(state, 0.0, +1, phi, outcome) + joint_probability(state, 0.0, -1, phi, outcome);
}

template <typename T>
Correlation correlation_from(const Quad<T>& c)
{
    const double a = static_cast<double>(c.pp) + static_cast<double>(c.mm);
    const double b = static_cast<double>(c.pm) + static_cast<double>(c.mp);
    const double n = a + b;
    if (!(n > 0.0)) {
        throw NumericError("no coincidences at this setting; correlation is undefined");
    }
    return {(a - b) / n, std::sqrt(4.0 * a * b / (n * n * n))};
}

template <typename F>
double bisect(F&& f, double lo, double hi, int iterations = 200)
{
    // f(lo) and f(hi) bracket a root; f is monotone.
    const bool rising = f(hi) > f(lo);
    for (int i = 0; i < iterations && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0.0) == rising) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ExpectedQuad expected_counts(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                             const Setting& setting)
{
    source.validate();
    det.validate();
    const auto state = apply_channel(source.state, channel);
    const double eta = det.efficiency;
    const double rate1 = source.pair_rate_hz * channel.transmission() * eta;  // detected uplink photons
    const double rate2 = source.pair_rate_hz * eta;                          // detected ground photons
    const double pair_rate = rate1 * eta;

    auto outcome = [&](int a, int b) {
        const double p = joint_probability(state, setting.phi1, a, setting.phi2, b);
        // Singles whose partner went undetected, plus dark counts, pair up
        // by chance within one window.
        const double unpaired1 = rate1 * (1.0 - eta) * marginal(state, 0, setting.phi1, a) + det.dark_rate_hz;
        const double unpaired2 =
            rate2 * (1.0 - channel.transmission() * eta) * marginal(state, 1, setting.phi2, b) + det.dark_rate_hz;
        return (pair_rate * p + unpaired1 * unpaired2 * det.window_s) * det.integration_s;
    };
    return {outcome(+1, +1), outcome(-1, -1), outcome(+1, -1), outcome(-1, +1)};
}

CountQuad simulate_coincidences(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                                const Setting& setting, std::uint64_t seed, std::uint64_t stream)
{
    const auto mean = expected_counts(source, channel, det, setting);
    Philox4x32 engine(seed, stream);
    CountQuad c;
    c.pp = poisson(engine, mean.pp);
    c.mm = poisson(engine, mean.mm);
    c.pm = poisson(engine, mean.pm);
    c.mp = poisson(engine, mean.mp);
    return c;
}

Correlation estimate_correlation(const CountQuad& counts)
{
    return correlation_from(counts);
}

Correlation estimate_correlation(const ExpectedQuad& counts)
{
    return correlation_from(counts);
}

ChshResult estimate_chsh(std::span<const Setting, 4> settings, std::span<const CountQuad, 4> counts)
{
    ChshResult r;
    double var = 0.0;
    for (int k = 0; k < 4; ++k) {
        r.settings[k] = settings[k];
        r.counts[k] = counts[k];
        try {
            r.correlations[k] = estimate_correlation(counts[k]);
        } catch (const NumericError&) {
            throw NumericError("setting " + std::to_string(k + 1) +
                               " recorded zero coincidences; check loss, efficiency and integration time");
        }
        var += r.correlations[k].sigma * r.correlations[k].sigma;
        r.total_coincidences += counts[k].total();
    }
    const auto& e = r.correlations;
    r.s = std::abs(e[0].value - e[1].value + e[2].value + e[3].value);
    r.sigma_s = std::sqrt(var);
    return r;
}

double expected_chsh(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                     std::span<const Setting, 4> settings)
{
    double e[4];
    for (int k = 0; k < 4; ++k) {
        e[k] = estimate_correlation(expected_counts(source, channel, det, settings[k])).value;
    }
    return std::abs(e[0] - e[1] + e[2] + e[3]);
}

double expected_total(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                      std::span<const Setting, 4> settings)
{
    double total = 0.0;
    for (const auto& s : settings) {
        total += expected_counts(source, channel, det, s).total();
    }
    return total;
}

ChshResult run_bell_test(const SourceModel& source, const ChannelModel& channel, const DetectionModel& det,
                         std::span<const Setting, 4> settings, std::uint64_t seed)
{
    std::array<CountQuad, 4> counts;
    for (std::size_t k = 0; k < 4; ++k) {
        counts[k] = simulate_coincidences(source, channel, det, settings[k], seed, k);
    }
    return estimate_chsh(settings, counts);
}

double bootstrap_sigma_s(const ChshResult& result, int resamples, std::uint64_t seed)
{
    if (resamples < 2) {
        throw InputError("bootstrap needs at least two resamples");
    }
    double sum = 0.0;
    double sum2 = 0.0;
    int used = 0;
    for (int r = 0; r < resamples; ++r) {
        Philox4x32 engine(seed, static_cast<std::uint64_t>(r));
        std::array<CountQuad, 4> counts;
        bool empty = false;
        for (int k = 0; k < 4; ++k) {
            const auto& c = result.counts[k];
            counts[k] = {poisson(engine, static_cast<double>(c.pp)), poisson(engine, static_cast<double>(c.mm)),
                         poisson(engine, static_cast<double>(c.pm)), poisson(engine, static_cast<double>(c.mp))};
            empty = empty || counts[k].total() == 0;
        }
        if (empty) {
            continue;
        }
        const double s = estimate_chsh(result.settings, counts).s;
        sum += s;
        sum2 += s * s;
        ++used;
    }
    if (used < 2) {
        throw NumericError("bootstrap produced fewer than two usable resamples");
    }
    const double mean = sum / used;
    return std::sqrt(std::max(0.0, (sum2 - used * mean * mean) / (used - 1)));
}

Calibration calibrate_channel(const SourceModel& source, const DetectionModel& det,
                              std::span<const Setting, 4> settings, double target_s, double target_total)
{
    if (!(target_total > 0.0) || !(target_s > 0.0)) {
        throw InputError("calibration targets must be positive");
    }
    Calibration cal;
    auto total_at = [&](double loss) {
        ChannelModel ch;
        ch.loss_db = loss;
        return expected_total(source, ch, det, settings) - target_total;
    };
    constexpr double kMaxLoss = 120.0;
    if (total_at(0.0) < 0.0) {
        throw NumericError("target coincidences exceed the lossless expectation", total_at(0.0));
    }
    if (total_at(kMaxLoss) > 0.0) {
        throw NumericError("target coincidences are below the accidental floor", total_at(kMaxLoss));
    }
    cal.channel.loss_db = bisect(total_at, 0.0, kMaxLoss);

    auto s_at = [&](double p) {
        ChannelModel ch = cal.channel;
        ch.depolarization = p;
        return expected_chsh(source, ch, det, settings) - target_s;
    };
    if (s_at(0.0) < 0.0) {
        throw NumericError("target S exceeds what the source and accidentals allow", s_at(0.0));
    }
    if (s_at(1.0) > 0.0) {
        throw NumericError("target S is below the fully depolarized value", s_at(1.0));
    }
    cal.channel.depolarization = bisect(s_at, 0.0, 1.0);
    cal.expected_s = expected_chsh(source, cal.channel, det, settings);
    cal.expected_total = expected_total(source, cal.channel, det, settings);
    return cal;
}

std::string counts_csv(const ChshResult& result)
{
    using text::format_double;
    std::ostringstream os;
    os << "setting_phi1_rad,setting_phi2_rad,c_pp,c_mm,c_pm,c_mp\n";
    for (int k = 0; k < 4; ++k) {
        const auto& c = result.counts[k];
        os << format_double(result.settings[k].phi1) << ',' << format_double(result.settings[k].phi2) << ',' << c.pp
           << ',' << c.mm << ',' << c.pm << ',' << c.mp << '\n';
    }
    return os.str();
}

ChshResult parse_counts_csv(const std::string& text, const std::string& source)
{
    const auto table = text::parse_csv(text, source);
    const char* names[] = {"setting_phi1_rad", "setting_phi2_rad", "c_pp", "c_mm", "c_pm", "c_mp"};
    std::size_t idx[6];
    for (int k = 0; k < 6; ++k) {
        idx[k] = table.column(names[k]);
        if (idx[k] == std::string::npos) {
            throw ParseError(source, 1, 0, std::string("missing column ") + names[k]);
        }
    }
    if (table.rows.size() != 4) {
        throw ParseError(source, table.row_lines.empty() ? 1 : table.row_lines.back(), 0,
                         "expected 4 settings, found " + std::to_string(table.rows.size()));
    }
    std::array<Setting, 4> settings;
    std::array<CountQuad, 4> counts;
    for (std::size_t r = 0; r < 4; ++r) {
        const auto& row = table.rows[r];
        const auto line = table.row_lines[r];
        auto count = [&](int k) {
            const auto v = text::parse_int({row[idx[k]], idx[k] + 1}, source, line);
            if (v < 0) {
                throw ParseError(source, line, idx[k] + 1, "coincidence count must be non-negative");
            }
            return static_cast<std::uint64_t>(v);
        };
        settings[r] = {text::parse_double({row[idx[0]], idx[0] + 1}, source, line),
                       text::parse_double({row[idx[1]], idx[1] + 1}, source, line)};
        counts[r] = {count(2), count(3), count(4), count(5)};
    }
    return estimate_chsh(settings, counts);
}

}  // namespace polsim::link
