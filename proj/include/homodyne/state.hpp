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

// Single-mode states of the radiation field and their exact statistics.
//
// Quadrature convention: x = (a + a^dag) / 2, so the vacuum has quadrature
// variance 1/4. Detector inefficiency eta smears every quadrature outcome
// with an independent zero-mean Gaussian of variance (1 - eta) / (4 eta);
// that is the only place eta enters the homodyne statistics.

#pragma once

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace homodyne {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kVacuumQuadratureVariance = 0.25;

/// Variance of the Gaussian that models detection with efficiency eta.
double inefficiency_noise_variance(double eta);

/// Throws Domain unless 0 < eta <= 1.
void check_efficiency(double eta);

/// Dense Hermitian matrix in the number basis |0>..|dim-1>, row-major.
class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(int dim, std::vector<cdouble> entries);

    int dim() const noexcept { return dim_; }
    const cdouble& operator()(int row, int col) const { return entries_[index(row, col)]; }
    std::span<const cdouble> entries() const noexcept { return entries_; }

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(col);
    }

    int dim_ = 0;
    std::vector<cdouble> entries_;
};

struct Coherent {
    cdouble beta;
};

struct Fock {
    int n = 0;
};

struct Mixed {
    DensityMatrix rho;
};

using StateSpec = std::variant<Coherent, Fock, Mixed>;

enum class PositivityCheck {
    Basic,   ///< Hermiticity, unit trace, nonnegative diagonal
    Strict,  ///< additionally every eigenvalue >= -1e-10
};

/// Throws Validation if the state is not a normalizable density operator.
void validate(const StateSpec& state, PositivityCheck check = PositivityCheck::Basic);

/// Builds a validated mixed state.
Mixed make_mixed(DensityMatrix rho, PositivityCheck check = PositivityCheck::Basic);

/// Number-basis truncation that keeps the neglected photon-number mass below 1e-10.
int default_truncation(const StateSpec& state);

/// Truncation for amplitude expansions (wavefunctions). Coherent states need a
/// longer tail here because the discarded probability enters the quadrature
/// density through its square root.
int amplitude_truncation(const StateSpec& state);

struct PhotonDistribution {
    std::vector<double> probabilities;  ///< rho_00 .. rho_{dim-1,dim-1}
    double tail_mass = 0.0;             ///< 1 - sum(probabilities), clamped at 0
};

PhotonDistribution photon_distribution(const StateSpec& state, int dim);

/// Tr[rho a^dag^n a^m]. Mixed states require n + m < dim (Truncation error).
cdouble normal_moment(const StateSpec& state, int n, int m);

/// Tr[rho a^dag^n a^m] without the n + m < dim guard. A Mixed rho has no
/// support above dim - 1, so the truncated sum is still exact.
cdouble support_moment(const StateSpec& state, int n, int m);

double mean_photon(const StateSpec& state);

/// Normalized oscillator eigenfunctions psi_0..psi_{out.size()-1} at x for the
/// variance-1/4 convention, evaluated with the three-term recurrence.
void hermite_functions(double x, std::span<double> out);

/// Homodyne outcome density p_eta(x; phi).
double quadrature_pdf(const StateSpec& state, double phi, double eta, double x);

/// Number-basis amplitudes of a coherent state, truncated to dim entries.
std::vector<cdouble> coherent_amplitudes(cdouble beta, int dim);

/// Explicit density matrix in a truncated basis (Coherent and Fock expanded).
DensityMatrix to_density_matrix(const StateSpec& state, int dim);

std::string describe(const StateSpec& state);

nlohmann::json to_json(const StateSpec& state);
StateSpec state_from_json(const nlohmann::json& j);

}  // namespace homodyne
