// Copyright 2026 The Homodyne Noise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "homodyne/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "homodyne/direct.hpp"
#include "homodyne/errors.hpp"
#include "homodyne/estimators.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/sampling.hpp"
#include "homodyne/text.hpp"

namespace homodyne {

namespace {

constexpr std::size_t kMaxBatches = 32;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Quantity { Intensity, RealField, ComplexAmplitude, Phase };

Quantity quantity_of(const Observable& obs) {
    if (std::holds_alternative<Intensity>(obs)) return Quantity::Intensity;
    if (std::holds_alternative<RealField>(obs)) return Quantity::RealField;
    if (std::holds_alternative<ComplexAmplitude>(obs)) return Quantity::ComplexAmplitude;
    if (std::holds_alternative<Phase>(obs)) return Quantity::Phase;
    fail(ErrorKind::Capability, "noise comparison is defined for intensity, real_field, complex_amplitude and phase, not " +
                                    observable_name(obs));
}

const Coherent& require_coherent_phase(const StateSpec& state) {
    const auto* c = std::get_if<Coherent>(&state);
    if (!c) {
        fail(ErrorKind::AsymptoticDomain, "phase closed forms exist only for bright coherent states, not " +
                                              describe(state) + "; use the empirical comparison");
    }
    return *c;
}

double phase_nbar(const StateSpec& state, double eta) {
    check_efficiency(eta);
    const double nbar = std::norm(require_coherent_phase(state).beta);
    if (nbar <= 0.0) fail(ErrorKind::AsymptoticDomain, "phase closed forms need nbar > 0");
    return nbar;
}

// Moments entering the closed forms.
struct Moments {
    double nbar = 0.0;
    double n2 = 0.0;        // <n^2>
    double abs_a_sq = 0.0;  // |<a>|^2
    double squeeze = 0.0;   // |<a^2> - <a>^2|
    double var_x = 0.0;     // quadrature variance at phase 0
};

Moments moments_of(const StateSpec& state) {
    Moments m;
    m.nbar = mean_photon(state);
    m.n2 = support_moment(state, 2, 2).real() + m.nbar;
    const cdouble a = support_moment(state, 0, 1);
    m.abs_a_sq = std::norm(a);
    m.squeeze = std::abs(support_moment(state, 0, 2) - a * a);
    m.var_x = quadrature_variance(state);
    return m;
}

// Coherent state of mean photon number nbar, without rounding through sqrt(nbar).
Moments coherent_moments(double nbar) {
    Moments m;
    m.nbar = nbar;
    m.n2 = nbar * nbar + nbar;
    m.abs_a_sq = nbar;
    m.var_x = kVacuumQuadratureVariance;
    return m;
}

double tomographic_variance(Quantity q, const Moments& m, double eta) {
    switch (q) {
        case Quantity::Intensity:
            return (m.n2 - m.nbar * m.nbar) + 0.5 * m.n2 + m.nbar * (2.0 / eta - 1.5) + 0.5 / (eta * eta);
        case Quantity::RealField: return m.var_x + 0.5 * m.nbar + (2.0 - eta) / (4.0 * eta);
        case Quantity::ComplexAmplitude: return 0.5 * (1.0 / eta + 2.0 * m.nbar - m.abs_a_sq + m.squeeze);
        case Quantity::Phase: return kPi * kPi / 12.0;
    }
    return kNaN;
}

double direct_variance(Quantity q, const Moments& m, double eta) {
    switch (q) {
        case Quantity::Intensity: return (m.n2 - m.nbar * m.nbar) + m.nbar * (1.0 / eta - 1.0);
        case Quantity::RealField: return m.var_x + inefficiency_noise_variance(eta);
        case Quantity::ComplexAmplitude: return 0.5 * (m.nbar + 1.0 / eta - m.abs_a_sq + m.squeeze);
        case Quantity::Phase: return 1.0 / (2.0 * eta * m.nbar);
    }
    return kNaN;
}

double added_noise(Quantity q, const Moments& m, double eta) {
    switch (q) {
        case Quantity::Intensity: return 0.5 * (m.n2 + m.nbar * (2.0 / eta - 1.0) + 1.0 / (eta * eta));
        case Quantity::RealField: return 0.5 * (m.nbar + 0.5 / eta);
        case Quantity::ComplexAmplitude: return 0.5 * m.nbar;
        case Quantity::Phase: return kPi * kPi / 12.0 - 1.0 / (2.0 * eta * m.nbar);
    }
    return kNaN;
}

double variance_ratio_db(double tomo, double direct) {
    if (direct <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(tomo / direct);
}

double variance_ratio_linear(double tomo, double direct) {
    if (direct <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(tomo / direct);
}

// Value over the whole record and the standard error from its spread over batches.
struct BatchStat {
    double value = 0.0;
    double std_error = kNaN;
};

BatchStat batch_stat(double whole, const std::vector<double>& per_batch) {
    BatchStat s;
    s.value = whole;
    if (per_batch.size() < 2) return s;
    RunningMoments spread;
    for (double v : per_batch) spread.push(v);
    s.std_error = std::sqrt(spread.sample_variance() / static_cast<double>(per_batch.size()));
    return s;
}

template <typename Acc>
std::vector<Acc> group_blocks(const std::vector<Acc>& blocks) {
    const std::size_t batches = std::min(kMaxBatches, blocks.size());
    std::vector<Acc> out(batches);
    for (std::size_t j = 0; j < batches; ++j) {
        const std::size_t lo = j * blocks.size() / batches;
        const std::size_t hi = (j + 1) * blocks.size() / batches;
        for (std::size_t b = lo; b < hi; ++b) out[j].merge(blocks[b]);
    }
    return out;
}

double noise_plus(const RunningMoments2& m) {
    const double diff = m.var_a() - m.var_b();
    return 0.5 * (m.var_a() + m.var_b() + std::sqrt(diff * diff + 4.0 * m.cov_ab() * m.cov_ab()));
}

// Eigenvalue splitting as a complex number; its modulus is noise_plus - noise_minus.
cdouble splitting(const RunningMoments2& m) { return {m.var_a() - m.var_b(), 2.0 * m.cov_ab()}; }

// Larger covariance eigenvalue over the whole record. The sampling noise of the
// splitting, estimated from the batches, is removed from its squared modulus;
// otherwise a degenerate pair reads high by about one standard error.
BatchStat noise_plus_stat(const RunningMoments2& whole, const std::vector<RunningMoments2>& batches) {
    std::vector<double> per_batch;
    RunningMoments re, im;
    for (const auto& b : batches) {
        per_batch.push_back(noise_plus(b));
        re.push(splitting(b).real());
        im.push(splitting(b).imag());
    }
    BatchStat s = batch_stat(noise_plus(whole), per_batch);
    if (batches.size() < 2) return s;
    const double noise_power = (re.sample_variance() + im.sample_variance()) / static_cast<double>(batches.size());
    const double split = std::sqrt(std::max(0.0, std::norm(splitting(whole)) - noise_power));
    s.value = 0.5 * (whole.var_a() + whole.var_b() + split);
    return s;
}

BatchStat tomographic_side(Quantity q, const Observable& obs, const Dataset& data) {
    if (q == Quantity::ComplexAmplitude) {
        const auto blocks = complex_kernel_block_moments(data, obs);
        RunningMoments2 whole;
        for (const auto& b : blocks) whole.merge(b);
        return noise_plus_stat(whole, group_blocks(blocks));
    }
    const auto blocks = kernel_block_moments(data, obs);
    RunningMoments whole;
    for (const auto& b : blocks) whole.merge(b);
    std::vector<double> per_batch;
    for (const auto& b : group_blocks(blocks)) per_batch.push_back(b.variance());
    return batch_stat(whole.variance(), per_batch);
}

template <typename Fn>
BatchStat batched_variance(std::size_t n, Fn value_at) {
    const std::size_t batches = std::min(kMaxBatches, std::max<std::size_t>(1, n / kKernelBlock));
    RunningMoments whole;
    std::vector<double> per_batch;
    for (std::size_t j = 0; j < batches; ++j) {
        RunningMoments acc;
        for (std::size_t i = j * n / batches; i < (j + 1) * n / batches; ++i) acc.push(value_at(i));
        per_batch.push_back(acc.variance());
        whole.merge(acc);
    }
    return batch_stat(whole.variance(), per_batch);
}

BatchStat heterodyne_noise_plus(const HeterodyneRecord& rec) {
    const std::size_t n = rec.n();
    const std::size_t batches = std::min(kMaxBatches, std::max<std::size_t>(1, n / kKernelBlock));
    RunningMoments2 whole;
    std::vector<RunningMoments2> per_batch(batches);
    for (std::size_t j = 0; j < batches; ++j) {
        for (std::size_t i = j * n / batches; i < (j + 1) * n / batches; ++i) {
            per_batch[j].push(rec.alphas[i].real(), rec.alphas[i].imag());
        }
        whole.merge(per_batch[j]);
    }
    return noise_plus_stat(whole, per_batch);
}

BatchStat direct_side(Quantity q, const StateSpec& state, double eta, std::size_t n, std::uint64_t seed) {
    switch (q) {
        case Quantity::Intensity: {
            const PhotocountRecord rec = simulate_photocount(state, eta, n, seed);
            return batched_variance(n, [&](std::size_t i) { return static_cast<double>(rec.counts[i]) / eta; });
        }
        case Quantity::RealField: {
            const Dataset rec = sample_fixed_phase(state, eta, 0.0, n, seed);
            return batched_variance(n, [&](std::size_t i) { return rec.x[i]; });
        }
        case Quantity::ComplexAmplitude:
        case Quantity::Phase: {
            if (!std::holds_alternative<Coherent>(state)) {
                fail(ErrorKind::Capability, "heterodyne comparison is simulated for coherent states only, not " +
                                                describe(state) + "; use the analytic comparison");
            }
            const HeterodyneRecord rec = simulate_heterodyne(state, eta, n, seed);
            if (q == Quantity::ComplexAmplitude) return heterodyne_noise_plus(rec);
            return batched_variance(n, [&](std::size_t i) { return std::arg(rec.alphas[i]); });
        }
    }
    return {};
}

}  // namespace

std::string_view to_string(NoiseSource source) {
    switch (source) {
        case NoiseSource::Analytic: return "analytic";
        case NoiseSource::AnalyticAsymptotic: return "analytic_asymptotic";
        case NoiseSource::Empirical: return "empirical";
    }
    return "unknown";
}

double tomographic_variance_analytic(const Observable& obs, const StateSpec& state, double eta) {
    check_efficiency(eta);
    const Quantity q = quantity_of(obs);
    if (q == Quantity::Phase) phase_nbar(state, eta);
    return tomographic_variance(q, moments_of(state), eta);
}

double direct_variance_analytic(const Observable& obs, const StateSpec& state, double eta) {
    check_efficiency(eta);
    const Quantity q = quantity_of(obs);
    if (q == Quantity::Phase) phase_nbar(state, eta);
    return direct_variance(q, moments_of(state), eta);
}

double added_noise_analytic(const Observable& obs, const StateSpec& state, double eta) {
    check_efficiency(eta);
    const Quantity q = quantity_of(obs);
    if (q == Quantity::Phase) phase_nbar(state, eta);
    const double added = added_noise(q, moments_of(state), eta);
    if (q == Quantity::Phase && added <= 0.0) {
        fail(ErrorKind::AsymptoticDomain, "phase closed form is not positive at eta*nbar=" +
                                              text::format_double(eta * mean_photon(state)) +
                                              "; use the empirical comparison");
    }
    return added;
}

double noise_ratio_coherent(const Observable& obs, double nbar, double eta) {
    check_efficiency(eta);
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) fail(ErrorKind::Domain, "nbar must be finite and >= 0");
    const double s = eta * nbar;
    switch (quantity_of(obs)) {
        case Quantity::Intensity:
            if (nbar == 0.0) fail(ErrorKind::Domain, "intensity noise ratio needs nbar > 0");
            return std::sqrt(2.0 + 0.5 * (s + 1.0 / s));
        case Quantity::RealField: return std::sqrt(2.0 * (1.0 + s));
        case Quantity::ComplexAmplitude: return std::sqrt(1.0 + s);
        case Quantity::Phase:
            if (nbar == 0.0) fail(ErrorKind::Domain, "phase noise ratio needs nbar > 0");
            return kPi * std::sqrt(s / 6.0);
    }
    return kNaN;
}

NoiseComparison analytic_comparison(const Observable& obs, const StateSpec& state, double eta) {
    const Quantity q = quantity_of(obs);
    NoiseComparison c;
    c.observable = observable_name(obs);
    c.state_tag = describe(state);
    c.eta = eta;
    c.nbar = mean_photon(state);
    c.tomographic_variance = tomographic_variance_analytic(obs, state, eta);
    c.direct_variance = direct_variance_analytic(obs, state, eta);
    c.added_noise = added_noise_analytic(obs, state, eta);
    c.ratio_linear = variance_ratio_linear(c.tomographic_variance, c.direct_variance);
    c.ratio_db = variance_ratio_db(c.tomographic_variance, c.direct_variance);
    c.source = (q == Quantity::Phase && c.nbar < kPhaseAsymptoticNbar) ? NoiseSource::AnalyticAsymptotic
                                                                       : NoiseSource::Analytic;
    return c;
}

NoiseComparison empirical_comparison(const Observable& obs, const StateSpec& state, double eta, std::size_t n,
                                     std::uint64_t seed) {
    const Quantity q = quantity_of(obs);
    validate(state);
    check_efficiency(eta);
    if ((q == Quantity::ComplexAmplitude || q == Quantity::Phase) && !std::holds_alternative<Coherent>(state)) {
        fail(ErrorKind::Capability, "empirical " + observable_name(obs) +
                                        " comparison needs simulated heterodyne data, available for coherent states "
                                        "only; got " + describe(state));
    }
    const Dataset data = sample_homodyne(state, eta, n, seed);
    const BatchStat tomo = tomographic_side(q, obs, data);
    const BatchStat direct = direct_side(q, state, eta, n, derive_seed(seed, 1));

    NoiseComparison c;
    c.observable = observable_name(obs);
    c.state_tag = describe(state);
    c.eta = eta;
    c.nbar = mean_photon(state);
    c.tomographic_variance = tomo.value;
    c.direct_variance = direct.value;
    c.added_noise = tomo.value - direct.value;
    c.ratio_linear = variance_ratio_linear(tomo.value, direct.value);
    c.ratio_db = variance_ratio_db(tomo.value, direct.value);
    c.source = NoiseSource::Empirical;
    c.n = n;
    c.seed = seed;
    c.tomographic_stderr = tomo.std_error;
    c.direct_stderr = direct.std_error;
    c.added_noise_stderr = std::hypot(tomo.std_error, direct.std_error);
    const double rel_t = tomo.std_error / tomo.value;
    const double rel_d = direct.std_error / direct.value;
    c.ratio_stderr = 0.5 * c.ratio_linear * std::hypot(rel_t, rel_d);
    return c;
}

std::vector<NoiseComparison> sweep(const std::vector<Observable>& observables, const std::vector<double>& nbar_grid,
                                   const std::vector<double>& eta_list, const SweepMode& mode) {
    if (observables.empty() || nbar_grid.empty() || eta_list.empty()) {
        fail(ErrorKind::Argument, "sweep needs nonempty observable, nbar and eta lists");
    }
    for (double nbar : nbar_grid) {
        if (!(nbar >= 0.0) || !std::isfinite(nbar)) fail(ErrorKind::Domain, "sweep nbar must be finite and >= 0");
    }
    for (double eta : eta_list) check_efficiency(eta);
    if (mode.empirical && mode.n < 1) fail(ErrorKind::Argument, "empirical sweep needs n >= 1");

    std::vector<NoiseComparison> rows;
    rows.reserve(observables.size() * nbar_grid.size() * eta_list.size());
    for (const Observable& obs : observables) {
        const Quantity q = quantity_of(obs);
        for (double eta : eta_list) {
            for (double nbar : nbar_grid) {
                const StateSpec state = Coherent{cdouble(std::sqrt(nbar), 0.0)};
                NoiseComparison row;
                if (mode.empirical) {
                    row = empirical_comparison(obs, state, eta, mode.n, derive_seed(mode.seed, rows.size()));
                } else {
                    row.observable = observable_name(obs);
                    row.state_tag = describe(state);
                    row.eta = eta;
                    row.nbar = nbar;
                    row.ratio_linear = noise_ratio_coherent(obs, nbar, eta);
                    row.ratio_db = 20.0 * std::log10(row.ratio_linear);
                    const Moments m = coherent_moments(nbar);
                    row.tomographic_variance = tomographic_variance(q, m, eta);
                    row.direct_variance = direct_variance(q, m, eta);
                    // The phase difference is reported even where the asymptotic form goes negative.
                    row.added_noise = added_noise(q, m, eta);
                    row.source = (q == Quantity::Phase && nbar < kPhaseAsymptoticNbar)
                                     ? NoiseSource::AnalyticAsymptotic
                                     : NoiseSource::Analytic;
                }
                row.nbar = nbar;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<NoiseComparison>& rows, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.observable << ',' << text::format_double(r.eta) << ',' << text::format_double(r.nbar) << ','
            << text::format_double(r.tomographic_variance) << ',' << text::format_double(r.direct_variance) << ','
            << text::format_double(r.added_noise) << ',' << text::format_double(r.ratio_linear) << ','
            << text::format_double(r.ratio_db) << ',' << to_string(r.source) << ',';
        if (r.source == NoiseSource::Empirical) out << r.n << ',' << r.seed;
        else out << ',';
        out << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing sweep CSV");
}

nlohmann::json to_json(const NoiseComparison& c) {
    nlohmann::json j = {
        {"observable", c.observable},
        {"state", nlohmann::json::parse(c.state_tag, nullptr, false)},
        {"eta", c.eta},
        {"nbar", c.nbar},
        {"tomographic_variance", c.tomographic_variance},
        {"direct_variance", c.direct_variance},
        {"added_noise", c.added_noise},
        {"ratio_linear", c.ratio_linear},
        {"ratio_db", c.ratio_db},
        {"source", to_string(c.source)},
    };
    if (j["state"].is_discarded()) j["state"] = c.state_tag;
    if (c.source == NoiseSource::Empirical) {
        j["n"] = c.n;
        j["seed"] = c.seed;
        j["tomographic_stderr"] = c.tomographic_stderr;
        j["direct_stderr"] = c.direct_stderr;
        j["added_noise_stderr"] = c.added_noise_stderr;
        j["ratio_stderr"] = c.ratio_stderr;
    }
    if (c.source == NoiseSource::AnalyticAsymptotic) j["note"] = "asymptotic regime not reached (nbar < 10)";
    return j;
}

}  // namespace homodyne
