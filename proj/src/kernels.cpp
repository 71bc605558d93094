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

#include "homodyne/kernels.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "homodyne/errors.hpp"
#include "homodyne/simd.hpp"
#include "homodyne/state.hpp"

namespace homodyne {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kHermitianCoeffTol = 1e-12;

void check_order(int n, int m, int cap) {
    if (n < 0 || m < 0) fail(ErrorKind::Order, "monomial powers must be nonnegative");
    if (n + m > cap) {
        fail(ErrorKind::Order, "order n+m=" + std::to_string(n + m) + " exceeds cap " + std::to_string(cap));
    }
}

// Exact in double for the orders used here (<= 40 choose 20).
double binomial(int s, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (s - k + i) / i;
    return std::round(r);
}

#if defined(__x86_64__) && defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;  // IEEE quad on aarch64
#endif

// sqrt to full Wide precision: long double estimate refined by two Newton steps.
Wide wide_sqrt(Wide a) {
    if (a <= 0) return 0;
    Wide r = std::sqrt(static_cast<long double>(a));
    r = (r + a / r) / 2;
    r = (r + a / r) / 2;
    return r;
}

// coef[s][k] = 1 / (2^k k!^2 (s-k)!) for s <= kMaxSquareOrder.
const std::vector<std::vector<Wide>>& square_coefficients() {
    static const std::vector<std::vector<Wide>> table = [] {
        std::vector<std::vector<Wide>> t(kMaxSquareOrder + 1);
        for (int s = 0; s <= kMaxSquareOrder; ++s) {
            for (int k = 0; k <= s; ++k) {
                Wide d = 1;
                for (int j = 1; j <= k; ++j) d *= Wide(2) * j * j;
                for (int j = 2; j <= s - k; ++j) d *= j;
                t[s].push_back(Wide(1) / d);
            }
        }
        return t;
    }();
    return table;
}

// Normalization 1 / ((2 eta)^{s/2} C(s, n)) of the monomial kernel.
double monomial_norm(int n, int m, double eta) {
    const int s = n + m;
    return 1.0 / (std::pow(2.0 * eta, 0.5 * s) * binomial(s, n));
}

double phase_kernel_value(double x, double phi, bool& degenerate) {
    degenerate = x == 0.0;
    double w = x < 0.0 ? phi - kPi : phi;
    // reduce into (-pi, pi]
    while (w <= -kPi) w += 2.0 * kPi;
    while (w > kPi) w -= 2.0 * kPi;
    return w;
}

}  // namespace

double hermite(int s, double y) {
    if (s < 0 || s > kMaxHermiteOrder) {
        fail(ErrorKind::Order, "Hermite order " + std::to_string(s) + " outside [0, " +
                                   std::to_string(kMaxHermiteOrder) + "]");
    }
    if (s == 0) return 1.0;
    double h0 = 1.0;
    double h1 = 2.0 * y;
    for (int k = 1; k < s; ++k) {
        const double h2 = 2.0 * y * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

cdouble kernel_monomial(int n, int m, double eta, double x, double phi) {
    check_order(n, m, kMaxHermiteOrder);
    check_efficiency(eta);
    const double radial = hermite(n + m, std::sqrt(2.0 * eta) * x) * monomial_norm(n, m, eta);
    if (n == m) return radial;
    return std::polar(radial, (m - n) * phi);
}

cdouble kernel_polynomial(const Polynomial& poly, double eta, double x, double phi) {
    cdouble acc = 0.0;
    for (const auto& [nm, c] : poly.coeffs) acc += c * kernel_monomial(nm.first, nm.second, eta, x, phi);
    return acc;
}

KernelValue kernel_observable(const Observable& obs, double eta, double x, double phi) {
    check_efficiency(eta);
    return std::visit(overloaded{
                          [&](const Intensity&) { return KernelValue{2.0 * x * x - 0.5 / eta}; },
                          [&](const RealField&) { return KernelValue{2.0 * x * std::cos(phi)}; },
                          [&](const ComplexAmplitude&) { return KernelValue{std::polar(2.0 * x, phi)}; },
                          [&](const Phase&) {
                              KernelValue v;
                              v.value = phase_kernel_value(x, phi, v.degenerate);
                              return v;
                          },
                          [&](const Monomial& mono) { return KernelValue{kernel_monomial(mono.n, mono.m, eta, x, phi)}; },
                          [&](const Polynomial& poly) { return KernelValue{kernel_polynomial(poly, eta, x, phi)}; },
                      },
                      obs);
}

cdouble square_kernel_monomial(int n, int m, double eta, double x, double phi) {
    check_order(n, m, kMaxSquareOrder);
    check_efficiency(eta);
    const int s = n + m;
    // sum_k (2k)! eta^k / (k!^4 (s-k)!) R_eta[a^dag^k a^k] with the k-th kernel
    // written out: sum_k H_2k(y) / (2^k k!^2 (s-k)!). The terms cancel by up to
    // ~1e9 near zeros of the result, so the sum runs in quad precision.
    const Wide y = wide_sqrt(Wide(2) * Wide(eta)) * Wide(x);
    const auto& coef = square_coefficients()[s];
    Wide h_even = 1;           // H_{2k}
    Wide h_odd = Wide(2) * y;  // H_{2k+1}
    Wide acc = 0;
    for (int k = 0; k <= s; ++k) {
        acc += h_even * coef[k];
        const Wide h_even_next = Wide(2) * y * h_odd - Wide(2 * (2 * k + 1)) * h_even;
        const Wide h_odd_next = Wide(2) * y * h_even_next - Wide(2 * (2 * k + 2)) * h_odd;
        h_even = h_even_next;
        h_odd = h_odd_next;
    }
    Wide scale = 1;
    for (int j = 2; j <= n; ++j) scale *= Wide(j) * j;
    for (int j = 2; j <= m; ++j) scale *= Wide(j) * j;
    for (int j = 0; j < s; ++j) scale /= Wide(eta);
    const double value = static_cast<double>(acc * scale);
    if (n == m) return value;
    return std::polar(value, 2.0 * (m - n) * phi);
}

void check_observable(const Observable& obs) {
    if (const auto* mono = std::get_if<Monomial>(&obs)) check_order(mono->n, mono->m, kMaxHermiteOrder);
    if (const auto* poly = std::get_if<Polynomial>(&obs)) {
        if (poly->coeffs.empty()) fail(ErrorKind::Config, "polynomial observable needs at least one term");
        for (const auto& [nm, c] : poly->coeffs) check_order(nm.first, nm.second, kMaxHermiteOrder);
    }
}

bool is_real_valued(const Observable& obs) {
    return std::visit(overloaded{
                          [](const Intensity&) { return true; },
                          [](const RealField&) { return true; },
                          [](const ComplexAmplitude&) { return false; },
                          [](const Phase&) { return true; },
                          [](const Monomial& mono) { return mono.n == mono.m; },
                          [](const Polynomial& poly) {
                              for (const auto& [nm, c] : poly.coeffs) {
                                  const auto it = poly.coeffs.find({nm.second, nm.first});
                                  const cdouble partner = it == poly.coeffs.end() ? cdouble{} : it->second;
                                  if (std::abs(c - std::conj(partner)) > kHermitianCoeffTol) return false;
                              }
                              return true;
                          },
                      },
                      obs);
}

std::string observable_name(const Observable& obs) {
    return std::visit(overloaded{
                          [](const Intensity&) -> std::string { return "intensity"; },
                          [](const RealField&) -> std::string { return "real_field"; },
                          [](const ComplexAmplitude&) -> std::string { return "complex_amplitude"; },
                          [](const Phase&) -> std::string { return "phase"; },
                          [](const Monomial& mono) -> std::string {
                              return "monomial(" + std::to_string(mono.n) + "," + std::to_string(mono.m) + ")";
                          },
                          [](const Polynomial&) -> std::string { return "polynomial"; },
                      },
                      obs);
}

nlohmann::json to_json(const Observable& obs) {
    if (const auto* mono = std::get_if<Monomial>(&obs)) {
        return {{"observable", "monomial"}, {"n", mono->n}, {"m", mono->m}};
    }
    if (const auto* poly = std::get_if<Polynomial>(&obs)) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [nm, c] : poly->coeffs) {
            terms.push_back({{"n", nm.first}, {"m", nm.second}, {"c", {c.real(), c.imag()}}});
        }
        return {{"observable", "polynomial"}, {"terms", terms}};
    }
    return {{"observable", observable_name(obs)}};
}

Observable observable_from_json(const nlohmann::json& j) {
    if (j.is_string()) return observable_from_json(nlohmann::json{{"observable", j}});
    if (!j.is_object() || !j.contains("observable") || !j["observable"].is_string()) {
        fail(ErrorKind::Config, "observable must be an object with a string \"observable\"");
    }
    const std::string kind = j["observable"].get<std::string>();
    auto get_int = [&](const nlohmann::json& o, const char* key) {
        if (!o.contains(key) || !o[key].is_number_integer()) {
            fail(ErrorKind::Config, std::string("observable needs integer \"") + key + "\"");
        }
        return o[key].get<int>();
    };
    Observable obs;
    if (kind == "intensity") {
        obs = Intensity{};
    } else if (kind == "real_field") {
        obs = RealField{};
    } else if (kind == "complex_amplitude") {
        obs = ComplexAmplitude{};
    } else if (kind == "phase") {
        obs = Phase{};
    } else if (kind == "monomial") {
        obs = Monomial{get_int(j, "n"), get_int(j, "m")};
    } else if (kind == "polynomial") {
        if (!j.contains("terms") || !j["terms"].is_array()) fail(ErrorKind::Config, "polynomial needs array \"terms\"");
        Polynomial poly;
        for (const auto& t : j["terms"]) {
            if (!t.contains("c")) fail(ErrorKind::Config, "polynomial term needs \"c\"");
            const auto& c = t["c"];
            cdouble coef;
            if (c.is_number()) {
                coef = c.get<double>();
            } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
                coef = {c[0].get<double>(), c[1].get<double>()};
            } else {
                fail(ErrorKind::Config, "polynomial coefficient must be [re, im]");
            }
            poly.coeffs[{get_int(t, "n"), get_int(t, "m")}] += coef;
        }
        obs = std::move(poly);
    } else {
        fail(ErrorKind::Config, "unknown observable \"" + kind + "\"");
    }
    check_observable(obs);
    return obs;
}

std::size_t kernel_batch(const Observable& obs, double eta, std::span<const double> x, std::span<const double> phi,
                         std::span<double> re, std::span<double> im) {
    check_efficiency(eta);
    const std::size_t len = x.size();
    if (phi.size() != len || re.size() != len || (!im.empty() && im.size() != len)) {
        fail(ErrorKind::Argument, "kernel_batch spans must have equal length");
    }
    const bool want_im = !im.empty();
    auto zero_im = [&] {
        if (want_im) std::fill(im.begin(), im.end(), 0.0);
    };

    // Adds c * e^{i d phi} * radial into (re, im).
    auto accumulate_term = [&](cdouble c, int d, std::span<const double> radial) {
        for (std::size_t i = 0; i < len; ++i) {
            const cdouble v = c * (d == 0 ? cdouble(1.0) : std::polar(1.0, d * phi[i])) * radial[i];
            re[i] += v.real();
            if (want_im) im[i] += v.imag();
        }
    };

    return std::visit(
        overloaded{
            [&](const Intensity&) -> std::size_t {
                simd::intensity_kernel(0.5 / eta, x, re);
                zero_im();
                return 0;
            },
            [&](const RealField&) -> std::size_t {
                for (std::size_t i = 0; i < len; ++i) re[i] = 2.0 * x[i] * std::cos(phi[i]);
                zero_im();
                return 0;
            },
            [&](const ComplexAmplitude&) -> std::size_t {
                for (std::size_t i = 0; i < len; ++i) {
                    re[i] = 2.0 * x[i] * std::cos(phi[i]);
                    if (want_im) im[i] = 2.0 * x[i] * std::sin(phi[i]);
                }
                return 0;
            },
            [&](const Phase&) -> std::size_t {
                zero_im();
                return simd::phase_kernel(x, phi, re);
            },
            [&](const Monomial& mono) -> std::size_t {
                check_order(mono.n, mono.m, kMaxHermiteOrder);
                simd::hermite_kernel(mono.n + mono.m, std::sqrt(2.0 * eta), monomial_norm(mono.n, mono.m, eta), x, re);
                const int d = mono.m - mono.n;
                if (d == 0) {
                    zero_im();
                } else {
                    for (std::size_t i = 0; i < len; ++i) {
                        const double r = re[i];
                        re[i] = r * std::cos(d * phi[i]);
                        if (want_im) im[i] = r * std::sin(d * phi[i]);
                    }
                }
                return 0;
            },
            [&](const Polynomial& poly) -> std::size_t {
                std::fill(re.begin(), re.end(), 0.0);
                zero_im();
                std::vector<double> radial(len);
                for (const auto& [nm, c] : poly.coeffs) {
                    check_order(nm.first, nm.second, kMaxHermiteOrder);
                    simd::hermite_kernel(nm.first + nm.second, std::sqrt(2.0 * eta), monomial_norm(nm.first, nm.second, eta),
                                         x, radial);
                    accumulate_term(c, nm.second - nm.first, radial);
                }
                return 0;
            },
        },
        obs);
}

}  // namespace homodyne
