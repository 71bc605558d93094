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

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "homodyne/errors.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/sampling.hpp"

using namespace homodyne;
using homodyne::testing::error_kind_of;

namespace {

double rel_err(cdouble got, cdouble want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST(hermite, low_orders) {
    EXPECT_EQ(hermite(0, 3.7), 1.0);
    EXPECT_EQ(hermite(2, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(hermite(4, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(hermite(4, 0.5), oracle::hermite_explicit(4, 0.5));
}

TEST(hermite, agrees_with_explicit_sum) {
    for (int s = 0; s <= 20; ++s) {
        for (double y : {-2.3, -0.4, 0.0, 0.9, 3.1}) {
            const double want = oracle::hermite_explicit(s, y);
            EXPECT_NEAR(hermite(s, y), want, 1e-10 * std::max(1.0, std::abs(want))) << s << " " << y;
        }
    }
}

TEST(hermite, order_cap) {
    EXPECT_NO_THROW(hermite(kMaxHermiteOrder, 1.0));
    EXPECT_EQ(error_kind_of([] { hermite(kMaxHermiteOrder + 1, 1.0); }), ErrorKind::Order);
    EXPECT_EQ(error_kind_of([] { hermite(-1, 1.0); }), ErrorKind::Order);
}

TEST(kernel_monomial, table_entries) {
    for (double eta : {1.0, 0.6}) {
        for (double x : {-1.2, 0.3, 2.0}) {
            for (double phi : {0.0, 0.7, 2.9}) {
                EXPECT_NEAR(std::abs(kernel_monomial(0, 0, eta, x, phi) - 1.0), 0.0, 1e-15);
                EXPECT_NEAR(std::abs(kernel_monomial(0, 1, eta, x, phi) - std::polar(2.0 * x, phi)), 0.0, 1e-13);
                EXPECT_NEAR(std::abs(kernel_monomial(1, 1, eta, x, phi) - (2.0 * x * x - 0.5 / eta)), 0.0, 1e-13);
            }
        }
    }
}

TEST(kernel_monomial, conjugation_symmetry) {
    for (int n = 0; n <= 8; ++n) {
        for (int m = 0; m <= 8; ++m) {
            for (double x : {-2.0, -0.1, 0.8, 3.3}) {
                const cdouble a = kernel_monomial(n, m, 0.7, x, 1.1);
                const cdouble b = kernel_monomial(m, n, 0.7, x, 1.1);
                EXPECT_LE(rel_err(a, std::conj(b)), 1e-14);
            }
        }
    }
}

TEST(kernel_monomial, errors) {
    EXPECT_EQ(error_kind_of([] { kernel_monomial(21, 20, 1.0, 0.0, 0.0); }), ErrorKind::Order);
    EXPECT_EQ(error_kind_of([] { kernel_monomial(-1, 0, 1.0, 0.0, 0.0); }), ErrorKind::Order);
    EXPECT_EQ(error_kind_of([] { kernel_monomial(1, 0, 0.0, 0.0, 0.0); }), ErrorKind::Domain);
}

TEST(kernel_observable, examples) {
    EXPECT_DOUBLE_EQ(kernel_observable(Intensity{}, 1.0, 1.0, 0.4).value.real(), 1.5);
    const KernelValue p = kernel_observable(Phase{}, 1.0, -1.0, 0.3);
    EXPECT_NEAR(p.value.real(), 0.3 - kPi, 1e-15);
    EXPECT_FALSE(p.degenerate);
    EXPECT_NEAR(kernel_observable(RealField{}, 1.0, 0.7, kPi / 2).value.real(), 0.0, 1e-15);
    const cdouble c = kernel_observable(ComplexAmplitude{}, 0.5, 0.8, 1.2).value;
    EXPECT_NEAR(std::abs(c - std::polar(1.6, 1.2)), 0.0, 1e-15);
}

TEST(kernel_observable, phase_branch_and_degeneracy) {
    const KernelValue pos = kernel_observable(Phase{}, 1.0, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(pos.value.real(), 1.0);
    const KernelValue zero = kernel_observable(Phase{}, 1.0, 0.0, 0.25);
    EXPECT_TRUE(zero.degenerate);
    EXPECT_DOUBLE_EQ(zero.value.real(), 0.25);
    // x < 0 at phi = 0 lands on the closed end of (-pi, pi]
    EXPECT_DOUBLE_EQ(kernel_observable(Phase{}, 1.0, -1.0, 0.0).value.real(), kPi);
    for (int i = 0; i < 100; ++i) {
        const double phi = kPi * i / 100.0;
        for (double x : {-1.0, 1.0}) {
            const double w = kernel_observable(Phase{}, 1.0, x, phi).value.real();
            EXPECT_GT(w, -kPi);
            EXPECT_LE(w, kPi);
            EXPECT_NEAR(std::remainder(w - std::arg(std::polar(x, phi)), 2.0 * kPi), 0.0, 1e-12);
        }
    }
}

TEST(kernel_observable, monomials_dispatch) {
    const cdouble got = kernel_observable(Monomial{2, 3}, 0.8, 0.6, 0.9).value;
    EXPECT_EQ(got, kernel_monomial(2, 3, 0.8, 0.6, 0.9));
}

TEST(kernel_polynomial, examples) {
    Polynomial number;
    number.coeffs[{1, 1}] = 1.0;
    Polynomial field;
    field.coeffs[{0, 1}] = 0.5;
    field.coeffs[{1, 0}] = 0.5;
    Polynomial quartic;
    quartic.coeffs[{2, 2}] = 1.0;
    for (double x : {-0.5, 0.0, 1.3}) {
        for (double phi : {0.0, 1.0}) {
            EXPECT_NEAR(std::abs(kernel_polynomial(number, 0.7, x, phi) -
                                 kernel_observable(Intensity{}, 0.7, x, phi).value),
                        0.0, 1e-13);
            EXPECT_NEAR(std::abs(kernel_polynomial(field, 0.7, x, phi) - 2.0 * x * std::cos(phi)), 0.0, 1e-13);
        }
    }
    EXPECT_DOUBLE_EQ(kernel_polynomial(quartic, 1.0, 0.0, 0.0).real(), 0.5);
    EXPECT_DOUBLE_EQ(kernel_polynomial(quartic, 1.0, 0.0, 0.0).real(), oracle::hermite_explicit(4, 0.0) / 24.0);
}

TEST(kernel_polynomial, hermitian_detection) {
    Polynomial h;
    h.coeffs[{0, 1}] = cdouble(0.5, 0.2);
    h.coeffs[{1, 0}] = cdouble(0.5, -0.2);
    EXPECT_TRUE(is_real_valued(h));
    h.coeffs[{1, 0}] = cdouble(0.5, 0.2);
    EXPECT_FALSE(is_real_valued(h));
    EXPECT_TRUE(is_real_valued(Monomial{3, 3}));
    EXPECT_FALSE(is_real_valued(Monomial{1, 3}));
    EXPECT_FALSE(is_real_valued(ComplexAmplitude{}));
}

TEST(square_kernel, examples) {
    EXPECT_NEAR(std::abs(square_kernel_monomial(0, 0, 0.6, 1.3, 0.2) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(square_kernel_monomial(1, 1, 1.0, 1.0, 0.0).real(), 2.25, 1e-13);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -5.0 + 10.0 * i / 1000.0;
        // direct square of the explicit (0,2) kernel: H_2(sqrt2 x) e^{2 i phi} / 2
        const cdouble k = (4.0 * 2.0 * x * x - 2.0) / 2.0 * std::polar(1.0, 2.0 * 0.4);
        worst = std::max(worst, rel_err(square_kernel_monomial(0, 2, 1.0, x, 0.4), k * k));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(square_kernel, equals_squared_kernel) {
    double worst = 0.0;
    for (double eta : {1.0, 0.7, 0.5}) {
        for (int s = 0; s <= 10; ++s) {
            for (int n = 0; n <= s; ++n) {
                const int m = s - n;
                for (int i = 0; i < 200; ++i) {
                    const double x = -5.0 + 10.0 * i / 199.0;
                    const cdouble k = kernel_monomial(n, m, eta, x, kPi / 3);
                    const cdouble sq = square_kernel_monomial(n, m, eta, x, kPi / 3);
                    worst = std::max(worst, std::abs(sq - k * k) / std::abs(k * k));
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(square_kernel, order_cap) {
    EXPECT_NO_THROW(square_kernel_monomial(10, 10, 1.0, 0.5, 0.0));
    EXPECT_EQ(error_kind_of([] { square_kernel_monomial(11, 10, 1.0, 0.5, 0.0); }), ErrorKind::Order);
}

TEST(observable_json, schema_round_trip) {
    Polynomial poly;
    poly.coeffs[{0, 1}] = cdouble(0.5, 0.25);
    poly.coeffs[{3, 3}] = 2.0;
    const std::vector<Observable> all = {Intensity{}, RealField{}, ComplexAmplitude{}, Phase{}, Monomial{1, 2}, poly};
    for (const auto& o : all) {
        const nlohmann::json j = to_json(o);
        EXPECT_EQ(to_json(observable_from_json(j)), j);
        EXPECT_EQ(observable_name(observable_from_json(j)), observable_name(o));
    }
    EXPECT_EQ(to_json(Intensity{}), nlohmann::json::parse(R"({"observable":"intensity"})"));
    EXPECT_EQ(to_json(Monomial{1, 2}), nlohmann::json::parse(R"({"observable":"monomial","n":1,"m":2})"));
    EXPECT_EQ(observable_name(observable_from_json("real_field")), "real_field");
}

TEST(observable_json, rejects_bad_input) {
    using nlohmann::json;
    EXPECT_EQ(error_kind_of([] { observable_from_json(json::parse(R"({"observable":"momentum"})")); }),
              ErrorKind::Config);
    EXPECT_EQ(error_kind_of([] { observable_from_json(json::parse(R"({"observable":"monomial","n":1})")); }),
              ErrorKind::Config);
    EXPECT_EQ(error_kind_of([] { observable_from_json(json::parse(R"({"observable":"polynomial","terms":[]})")); }),
              ErrorKind::Config);
    EXPECT_EQ(error_kind_of([] { observable_from_json(json::parse(R"({"observable":"monomial","n":30,"m":11})")); }),
              ErrorKind::Order);
}

TEST(kernel_batch, matches_scalar_path) {
    Polynomial poly;
    poly.coeffs[{0, 2}] = cdouble(0.3, -0.1);
    poly.coeffs[{2, 0}] = cdouble(0.3, 0.1);
    poly.coeffs[{1, 1}] = 1.5;
    poly.coeffs[{0, 1}] = cdouble(0.0, 2.0);
    const std::vector<Observable> all = {Intensity{}, RealField{}, ComplexAmplitude{}, Phase{},
                                         Monomial{0, 0}, Monomial{2, 5}, Monomial{4, 4}, poly};
    std::vector<double> x, phi;
    for (int i = 0; i < 1037; ++i) {
        x.push_back(-4.0 + 8.0 * ((i * 7919) % 1037) / 1037.0);
        phi.push_back(kPi * ((i * 104729) % 1037) / 1037.0);
    }
    x[5] = 0.0;
    for (const auto& o : all) {
        std::vector<double> re(x.size()), im(x.size());
        const std::size_t degenerate = kernel_batch(o, 0.75, x, phi, re, im);
        EXPECT_EQ(degenerate, std::holds_alternative<Phase>(o) ? 1u : 0u);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const cdouble want = kernel_observable(o, 0.75, x[i], phi[i]).value;
            EXPECT_LE(rel_err(cdouble(re[i], im[i]), want), 1e-12) << observable_name(o) << " i=" << i;
        }
    }
    std::vector<double> short_out(3);
    EXPECT_EQ(error_kind_of([&] { kernel_batch(Intensity{}, 1.0, x, phi, short_out, {}); }), ErrorKind::Argument);
}

// Averaging the kernel over homodyne data recovers the normal-ordered moment.
TEST(kernel_monomial, unbiased_over_simulated_data) {
    const std::vector<StateSpec> states = {Coherent{cdouble(0.8, 0.5)}, Fock{2}};
    std::uint64_t index = 0;
    for (const auto& state : states) {
        for (double eta : {1.0, 0.8, 0.6}) {
            const Dataset data = sample_homodyne(state, eta, 200000, derive_seed(41, index++));
            for (int n = 0; n <= 4; ++n) {
                for (int m = 0; n + m <= 4; ++m) {
                    double sr = 0, si = 0, qr = 0, qi = 0;
                    for (std::size_t i = 0; i < data.n(); ++i) {
                        const cdouble k = kernel_monomial(n, m, eta, data.x[i], data.phi[i]);
                        sr += k.real();
                        si += k.imag();
                        qr += k.real() * k.real();
                        qi += k.imag() * k.imag();
                    }
                    const double N = static_cast<double>(data.n());
                    const double mr = sr / N, mi = si / N;
                    const double er = std::sqrt((qr / N - mr * mr) / N), ei = std::sqrt((qi / N - mi * mi) / N);
                    const cdouble want = normal_moment(state, n, m);
                    EXPECT_LE(std::abs(mr - want.real()), 4.0 * er + 1e-12)
                        << describe(state) << " eta=" << eta << " (" << n << "," << m << ")";
                    EXPECT_LE(std::abs(mi - want.imag()), 4.0 * ei + 1e-12)
                        << describe(state) << " eta=" << eta << " (" << n << "," << m << ")";
                }
            }
        }
    }
}

// The eta dependence of the kernel undoes the detector smearing.
TEST(kernel_monomial, efficiency_covariance) {
    const StateSpec state = Coherent{cdouble(1.2, 0.0)};
    auto mean_and_err = [&](double eta, std::uint64_t seed) {
        const Dataset data = sample_homodyne(state, eta, 200000, seed);
        double s = 0, q = 0;
        for (std::size_t i = 0; i < data.n(); ++i) {
            const double k = kernel_monomial(2, 2, eta, data.x[i], data.phi[i]).real();
            s += k;
            q += k * k;
        }
        const double N = static_cast<double>(data.n());
        return std::pair{s / N, std::sqrt((q / N - s * s / N / N) / N)};
    };
    const auto [m1, e1] = mean_and_err(1.0, 3);
    const auto [m2, e2] = mean_and_err(0.65, 4);
    EXPECT_LE(std::abs(m1 - m2), 4.0 * std::hypot(e1, e2));
}
