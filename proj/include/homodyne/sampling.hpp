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

// Synthetic homodyne tomography records.
//
// A record is a list of (x, phi) events with phi uniform in [0, pi). Coherent
// states are drawn from their Gaussian quadrature law; every other state is
// drawn by inverse CDF on a grid of kGridNodes nodes over [-L, L] with
// L = 3 + 2 sqrt(dim). Inefficiency is added afterwards as Gaussian noise.
//
// RNG identity: samples are produced in blocks of kSampleBlock events; block b
// uses std::mt19937_64 seeded with seed_seq{seed_lo, seed_hi, stream, b_lo, b_hi}.
// Within a block each event consumes, in order: phi (top 53 bits of one draw),
// then the quadrature draw(s). The same (state, eta, n, seed) therefore yields
// the same record on any thread count.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "homodyne/state.hpp"

namespace homodyne {

inline constexpr int kGridNodes = 4096;

struct QuadratureSample {
    double x = 0.0;    ///< rescaled homodyne outcome, quadrature units
    double phi = 0.0;  ///< local-oscillator phase in [0, pi)
};

/// Structure-of-arrays record; x[i] and phi[i] form event i.
struct Dataset {
    std::vector<double> x;
    std::vector<double> phi;
    double eta = 1.0;
    std::string state_tag;
    std::uint64_t seed = 0;
    /// Set for fixed-phase (direct homodyne) records.
    std::optional<double> fixed_phase;

    std::size_t n() const noexcept { return x.size(); }
    QuadratureSample operator[](std::size_t i) const { return {x[i], phi[i]}; }
};

/// Throws Validation/Argument if the record breaks its invariants.
void validate(const Dataset& data);

Dataset sample_homodyne(const StateSpec& state, double eta, std::size_t n, std::uint64_t seed);

/// Direct homodyne detection at one fixed local-oscillator phase.
Dataset sample_fixed_phase(const StateSpec& state, double eta, double phi, std::size_t n, std::uint64_t seed);

/// Inverse-CDF sampler for the unit-efficiency quadrature law of any state.
class GridQuadratureSampler {
public:
    explicit GridQuadratureSampler(const StateSpec& state);

    /// x with p_1(x; phi) density, from a uniform u in [0, 1).
    double draw(double phi, double u) const;

    double half_width() const noexcept { return half_width_; }
    double grid_mass() const noexcept { return mass_; }

private:
    double cdf_at(std::size_t node, const std::vector<cdouble>& phases) const;

    double half_width_ = 0.0;
    double step_ = 0.0;
    double mass_ = 0.0;
    int harmonics_ = 0;
    // cumulative_[d * kGridNodes + j] = int_{-L}^{x_j} g_d, with
    // p_1(x; phi) = g_0(x) + 2 sum_{d >= 1} Re(e^{i d phi} g_d(x))
    std::vector<cdouble> cumulative_;
};

void write_dataset_csv(const Dataset& data, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);

nlohmann::json dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const nlohmann::json& j);

}  // namespace homodyne
