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

#include "homodyne/quadrature_density.hpp"

#include <algorithm>
#include <cmath>

#include "homodyne/errors.hpp"

namespace homodyne {

namespace {

// Convolution with the inefficiency Gaussian is done on a standard-normal
// variable z in [-kZMax, kZMax]; exp(-kZMax^2 / 2) ~ 3e-18.
constexpr double kZMax = 9.0;

}  // namespace

QuadratureDensity::QuadratureDensity(const StateSpec& state, double phi) {
    validate(state);
    dim_ = amplitude_truncation(state);
    if (const auto* c = std::get_if<Coherent>(&state)) {
        form_ = Form::Pure;
        amplitudes_ = coherent_amplitudes(c->beta, dim_);
        for (int n = 0; n < dim_; ++n) amplitudes_[n] *= std::polar(1.0, -n * phi);
    } else if (const auto* f = std::get_if<Fock>(&state)) {
        form_ = Form::Diagonal;
        weights_.assign(static_cast<std::size_t>(dim_), 0.0);
        weights_[f->n] = 1.0;
    } else {
        const auto& rho = std::get<Mixed>(state).rho;
        form_ = Form::Dense;
        rotated_.resize(static_cast<std::size_t>(dim_) * dim_);
        for (int n = 0; n < dim_; ++n)
            for (int m = 0; m < dim_; ++m) rotated_[n * dim_ + m] = rho(n, m) * std::polar(1.0, (m - n) * phi);
    }
    psi_.resize(static_cast<std::size_t>(dim_));
}

double QuadratureDensity::support_half_width() const noexcept { return 3.0 + 2.0 * std::sqrt(static_cast<double>(dim_)); }

double QuadratureDensity::at_unit_efficiency(double x) const {
    hermite_functions(x, psi_);
    switch (form_) {
        case Form::Pure: {
            cdouble amp = 0.0;
            for (int n = 0; n < dim_; ++n) amp += amplitudes_[n] * psi_[n];
            return std::norm(amp);
        }
        case Form::Diagonal: {
            double p = 0.0;
            for (int n = 0; n < dim_; ++n) p += weights_[n] * psi_[n] * psi_[n];
            return p;
        }
        case Form::Dense: {
            double p = 0.0;
            for (int n = 0; n < dim_; ++n) {
                cdouble row = 0.0;
                for (int m = 0; m < dim_; ++m) row += rotated_[n * dim_ + m] * psi_[m];
                p += psi_[n] * row.real();
            }
            return std::max(0.0, p);
        }
    }
    return 0.0;
}

double QuadratureDensity::operator()(double x, double eta) const {
    check_efficiency(eta);
    if (eta == 1.0) return at_unit_efficiency(x);
    const double s = std::sqrt(inefficiency_noise_variance(eta));
    // Trapezoid in z: smallest length scale of p_1 is ~ pi / (4 sqrt(dim)).
    const double h_state = 0.2 / std::sqrt(static_cast<double>(dim_));
    const double h = std::min(0.1, h_state / s);
    const double half = support_half_width();
    const double z_lo = std::max(-kZMax, (x - half) / s);
    const double z_hi = std::min(kZMax, (x + half) / s);
    if (z_lo >= z_hi) return 0.0;
    const int steps = std::max(2, static_cast<int>(std::ceil((z_hi - z_lo) / h)));
    const double dz = (z_hi - z_lo) / steps;
    double acc = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double z = z_lo + k * dz;
        const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
        acc += w * std::exp(-0.5 * z * z) * at_unit_efficiency(x - s * z);
    }
    return acc * dz / std::sqrt(2.0 * kPi);
}

}  // namespace homodyne
