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

// Direct measurements that tomography is compared against: photon counting
// with Bernoulli losses, fixed-phase homodyne (see sample_fixed_phase), and
// heterodyne detection of coherent states.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "homodyne/state.hpp"

namespace homodyne {

struct PhotocountRecord {
    std::vector<std::uint64_t> counts;
    double eta = 1.0;
    std::string state_tag;
    std::uint64_t seed = 0;

    std::size_t n() const noexcept { return counts.size(); }
};

struct HeterodyneRecord {
    std::vector<cdouble> alphas;
    double eta = 1.0;
    std::string state_tag;
    std::uint64_t seed = 0;

    std::size_t n() const noexcept { return alphas.size(); }
};

/// Draws the photon number from photon_distribution, then keeps each photon
/// with probability eta.
PhotocountRecord simulate_photocount(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed);

/// <dn^2> + nbar (1/eta - 1)
double intensity_variance_direct(const StateSpec& state, double eta);

/// <dx^2> + (1 - eta) / (4 eta), quadrature taken at phase 0.
double quadrature_variance_direct(const StateSpec& state, double eta);

/// Quadrature variance at phase 0 of the lossless state.
double quadrature_variance(const StateSpec& state);

/// alpha = beta + complex Gaussian noise of variance 1/(2 eta) per quadrature.
/// Coherent states only; other states throw Capability.
HeterodyneRecord simulate_heterodyne(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed);

/// (noise_plus, noise_minus) = 1/2 [nbar + 1/eta - |<a>|^2 +- |<a^2> - <a>^2|]
std::pair<double, double> amplitude_noise_direct(const StateSpec& state, double eta);

/// Sample variance of arg(alpha) on (-pi, pi].
double heterodyne_phase_variance(const HeterodyneRecord& record);

/// Sample variance of counts / eta, the direct intensity estimator.
double photocount_intensity_variance(const PhotocountRecord& record);

/// Eigenvalues (plus, minus) of the sample covariance of (Re alpha, Im alpha).
std::pair<double, double> heterodyne_noise(const HeterodyneRecord& record);

void write_photocount_csv(const PhotocountRecord& record, std::ostream& out);
PhotocountRecord read_photocount_csv(std::istream& in);
void write_heterodyne_csv(const HeterodyneRecord& record, std::ostream& out);
HeterodyneRecord read_heterodyne_csv(std::istream& in);

}  // namespace homodyne
