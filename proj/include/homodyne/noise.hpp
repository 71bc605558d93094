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

// Added noise of homodyne tomography relative to direct detection.
//
// Ratios are reported two ways: ratio_linear = sqrt(tomographic / direct)
// and ratio_db = 10 log10(tomographic / direct), i.e. dB of the variance
// ratio (20 log10 of the linear ratio).
//
// The phase closed forms (tomographic variance pi^2/12, heterodyne variance
// 1/(2 eta nbar)) hold only for bright coherent states; outputs with
// nbar < kPhaseAsymptoticNbar are marked asymptotic.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "homodyne/kernels.hpp"
#include "homodyne/state.hpp"

namespace homodyne {

inline constexpr double kPhaseAsymptoticNbar = 10.0;

enum class NoiseSource {
    Analytic,
    AnalyticAsymptotic,
    Empirical,
};

std::string_view to_string(NoiseSource source);

struct NoiseComparison {
    std::string observable;
    std::string state_tag;
    double eta = 1.0;
    double nbar = 0.0;
    double tomographic_variance = 0.0;
    double direct_variance = 0.0;
    double added_noise = 0.0;
    double ratio_linear = 0.0;
    double ratio_db = 0.0;
    NoiseSource source = NoiseSource::Analytic;
    // Empirical rows only.
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double tomographic_stderr = 0.0;
    double direct_stderr = 0.0;
    double added_noise_stderr = 0.0;
    double ratio_stderr = 0.0;
};

/// Tomographic kernel variance. ComplexAmplitude reports the larger noise.
double tomographic_variance_analytic(const Observable& obs, const StateSpec& state, double eta);

/// Variance of the direct measurement (photon counting, fixed-phase homodyne
/// at phi = 0, heterodyne).
double direct_variance_analytic(const Observable& obs, const StateSpec& state, double eta);

double added_noise_analytic(const Observable& obs, const StateSpec& state, double eta);

/// Closed-form ratio for coherent states of mean photon number nbar.
double noise_ratio_coherent(const Observable& obs, double nbar, double eta);

/// Fully analytic comparison; Phase requires a coherent state.
NoiseComparison analytic_comparison(const Observable& obs, const StateSpec& state, double eta);

/// Monte-Carlo comparison. The tomographic side uses sample_homodyne with
/// `seed`; the direct side uses a seed derived from it. Error bars come from
/// the spread over contiguous batches of the records.
NoiseComparison empirical_comparison(const Observable& obs, const StateSpec& state, double eta, std::size_t n,
                                     std::uint64_t seed);

struct SweepMode {
    bool empirical = false;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// One row per (observable, eta, nbar) on coherent states with real
/// amplitude sqrt(nbar), ordered by observable (as given), then eta, then nbar.
/// Empirical row i uses seed derive_seed(mode.seed, i).
std::vector<NoiseComparison> sweep(const std::vector<Observable>& observables, const std::vector<double>& nbar_grid,
                                   const std::vector<double>& eta_list, const SweepMode& mode);

inline constexpr std::string_view kSweepCsvHeader =
    "observable,eta,nbar,tomo_var,direct_var,added_noise,ratio_linear,ratio_db,source,n,seed";

void write_sweep_csv(const std::vector<NoiseComparison>& rows, std::ostream& out);

nlohmann::json to_json(const NoiseComparison& c);

}  // namespace homodyne
