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

// Tomographic kernels R_eta[A](x, phi): state-independent functions whose
// average over homodyne data taken at efficiency eta equals <A>.
//
// For a normally ordered monomial a^dag^n a^m
//
//   R_eta = e^{i(m-n)phi} H_{n+m}(sqrt(2 eta) x) / ((2 eta)^{(n+m)/2} C(n+m, n))
//
// and any polynomial in a, a^dag follows by linearity.

#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>

#include "json.hpp"

namespace homodyne {

using cdouble = std::complex<double>;

/// Largest Hermite order evaluated in double precision.
inline constexpr int kMaxHermiteOrder = 40;
/// Largest n+m for the square-kernel expansion (it needs order 2(n+m)).
inline constexpr int kMaxSquareOrder = 20;

struct Intensity {};
struct RealField {};
struct ComplexAmplitude {};
struct Phase {};

struct Monomial {
    int n = 0;  ///< power of a^dag
    int m = 0;  ///< power of a
};

/// Normally ordered polynomial sum_{n,m} c_nm a^dag^n a^m.
struct Polynomial {
    std::map<std::pair<int, int>, cdouble> coeffs;
};

using Observable = std::variant<Intensity, RealField, ComplexAmplitude, Phase, Monomial, Polynomial>;

/// Physicists' Hermite polynomial H_s(y), s <= kMaxHermiteOrder.
double hermite(int s, double y);

cdouble kernel_monomial(int n, int m, double eta, double x, double phi);

struct KernelValue {
    cdouble value;
    bool degenerate = false;  ///< Phase kernel at x == 0; value is phi
};

KernelValue kernel_observable(const Observable& obs, double eta, double x, double phi);

cdouble kernel_polynomial(const Polynomial& poly, double eta, double x, double phi);

/// R_eta[a^dag^n a^m]^2 expanded over diagonal kernels R_eta[a^dag^k a^k].
cdouble square_kernel_monomial(int n, int m, double eta, double x, double phi);

/// Throws Order if the observable needs Hermite orders above the cap.
void check_observable(const Observable& obs);

/// Intensity, RealField, Phase, diagonal monomials and Hermitian polynomials.
bool is_real_valued(const Observable& obs);

std::string observable_name(const Observable& obs);

nlohmann::json to_json(const Observable& obs);
Observable observable_from_json(const nlohmann::json& j);

/// Kernel values for a block of samples, written to re (and im when non-null).
/// Uses the active SIMD backend. Returns the count of degenerate Phase samples.
std::size_t kernel_batch(const Observable& obs, double eta, std::span<const double> x, std::span<const double> phi,
                         std::span<double> re, std::span<double> im);

}  // namespace homodyne
