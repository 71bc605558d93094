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

#pragma once

#include <vector>

#include "homodyne/state.hpp"

namespace homodyne {

/// Quadrature density of one state at a fixed local-oscillator phase.
///
/// The number-basis representation is rotated by phi once at construction so
/// that each evaluation costs O(dim) for pure states and O(dim^2) for mixed
/// ones.
class QuadratureDensity {
public:
    QuadratureDensity(const StateSpec& state, double phi);

    /// p_1(x; phi).
    double at_unit_efficiency(double x) const;

    /// p_eta(x; phi): p_1 convolved with N(0, (1 - eta) / (4 eta)).
    double operator()(double x, double eta) const;

    int dim() const noexcept { return dim_; }

    /// Half-width beyond which p_1 carries negligible mass.
    double support_half_width() const noexcept;

private:
    enum class Form { Pure, Diagonal, Dense };

    Form form_;
    int dim_;
    std::vector<cdouble> amplitudes_;  // Pure: c_n e^{-i n phi}
    std::vector<double> weights_;      // Diagonal: rho_nn
    std::vector<cdouble> rotated_;     // Dense: rho_nm e^{i (m - n) phi}
    mutable std::vector<double> psi_;
};

}  // namespace homodyne
