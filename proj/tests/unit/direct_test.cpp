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

#include "homodyne/direct.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "homodyne/errors.hpp"

using namespace homodyne;
using homodyne::testing::error_kind_of;
using homodyne::testing::to_state;

namespace {

struct Stats {
    double mean = 0.0;
    double var = 0.0;
};

template <typename T, typename F>
Stats stats(const std::vector<T>& v, F&& f) {
    double s = 0.0, q = 0.0;
    for (const T& x : v) {
        const double y = f(x);
        s += y;
        q += y * y;
    }
    const double n = static_cast<double>(v.size());
    return {s / n, (q - s * s / n) / (n - 1)};
}

std::vector<double> poisson_pmf(double mean, int size) {
    std::vector<double> p(size);
    for (int k = 0; k < size; ++k) p[k] = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    return p;
}

double total_variation(const PhotocountRecord& r, const std::vector<double>& pmf) {
    std::vector<double> emp(pmf.size(), 0.0);
    double beyond = 0.0;
    for (auto m : r.counts) {
        if (m < emp.size()) {
            emp[m] += 1.0 / r.n();
        } else {
            beyond += 1.0 / r.n();
        }
    }
    double tv = beyond;
    for (std::size_t k = 0; k < pmf.size(); ++k) tv += std::abs(emp[k] - pmf[k]);
    return 0.5 * tv;
}

}  // namespace

TEST(simulate_photocount, fock_at_unit_efficiency) {
    const PhotocountRecord r = simulate_photocount(Fock{3}, 1.0, 1000, 1);
    ASSERT_EQ(r.n(), 1000u);
    for (auto m : r.counts) EXPECT_EQ(m, 3u);
}

TEST(simulate_photocount, single_photon_thinning) {
    const PhotocountRecord r = simulate_photocount(Fock{1}, 0.5, 1000000, 2);
    double ones = 0.0;
    for (auto m : r.counts) {
        ASSERT_LE(m, 1u);
        ones += static_cast<double>(m);
    }
    EXPECT_NEAR(ones / r.n(), 0.5, 0.002);
}

TEST(simulate_photocount, thinned_poisson_moments) {
    const PhotocountRecord r = simulate_photocount(Coherent{2.0}, 0.7, 1000000, 3);
    const Stats s = stats(r.counts, [](std::uint64_t m) { return static_cast<double>(m); });
    EXPECT_NEAR(s.mean, 2.8, 0.028);
    EXPECT_NEAR(s.var, 2.8, 0.028);
}

TEST(simulate_photocount, deterministic) {
    const auto a = simulate_photocount(Coherent{1.0}, 0.6, 70000, 4);
    const auto b = simulate_photocount(Coherent{1.0}, 0.6, 70000, 4);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(error_kind_of([] { simulate_photocount(Fock{1}, 1.0, 0, 0); }), ErrorKind::Argument);
    EXPECT_EQ(error_kind_of([] { simulate_photocount(Fock{1}, 0.0, 5, 0); }), ErrorKind::Domain);
}

TEST(simulate_photocount, empirical_pmf_matches_bernoulli_convolution) {
    for (double nbar : {0.5, 2.0, 6.0}) {
        for (double eta : {1.0, 0.6}) {
            const auto r = simulate_photocount(Coherent{std::sqrt(nbar)}, eta, 1000000, 5);
            // thinning a Poisson law gives Poisson(eta nbar)
            EXPECT_LT(total_variation(r, poisson_pmf(eta * nbar, 60)), 0.005) << nbar << " " << eta;
        }
    }
    for (int n = 0; n <= 5; ++n) {
        std::vector<double> p(n + 1, 0.0);
        p[n] = 1.0;
        const auto r = simulate_photocount(Fock{n}, 0.7, 1000000, 6);
        EXPECT_LT(total_variation(r, oracle::thinned_pmf(p, 0.7)), 0.005) << n;
    }
}

TEST(simulate_photocount, mixed_state_pmf) {
    std::mt19937_64 rng(7);
    const oracle::Mat rho = oracle::random_density(6, rng);
    std::vector<double> p(6);
    for (int k = 0; k < 6; ++k) p[k] = rho(k, k).real();
    const auto r = simulate_photocount(to_state(rho), 0.8, 1000000, 8);
    EXPECT_LT(total_variation(r, oracle::thinned_pmf(p, 0.8)), 0.005);
}

TEST(simulate_photocount, rescaled_counts_trace_photon_number) {
    for (const StateSpec& s : {StateSpec{Coherent{cdouble(1.0, 1.5)}}, StateSpec{Fock{4}}}) {
        const auto r = simulate_photocount(s, 0.55, 500000, 9);
        const Stats st = stats(r.counts, [&](std::uint64_t m) { return m / 0.55; });
        EXPECT_LE(std::abs(st.mean - mean_photon(s)), 4.0 * std::sqrt(st.var / r.n())) << describe(s);
    }
}

TEST(intensity_variance_direct, examples) {
    EXPECT_NEAR(intensity_variance_direct(Coherent{2.0}, 1.0), 4.0, 1e-12);
    EXPECT_NEAR(intensity_variance_direct(Coherent{2.0}, 0.5), 8.0, 1e-12);
    EXPECT_NEAR(intensity_variance_direct(Fock{2}, 0.5), 2.0, 1e-12);
}

TEST(intensity_variance_direct, agrees_with_simulation) {
    const auto r = simulate_photocount(Fock{3}, 0.4, 1000000, 10);
    const double want = intensity_variance_direct(Fock{3}, 0.4);
    EXPECT_NEAR(photocount_intensity_variance(r), want, 0.02 * want);
}

TEST(quadrature_variance_direct, examples) {
    EXPECT_NEAR(quadrature_variance_direct(Coherent{cdouble(1.0, 2.0)}, 1.0), 0.25, 1e-12);
    EXPECT_NEAR(quadrature_variance_direct(Coherent{3.0}, 0.5), 0.5, 1e-12);
    EXPECT_NEAR(quadrature_variance_direct(Fock{1}, 1.0), 0.75, 1e-12);
}

TEST(quadrature_variance, matches_ladder_oracle) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
        const oracle::Mat rho = oracle::random_density(7, rng);
        const int d = 7;
        const oracle::Mat a = oracle::ladder(d + 3);
        oracle::Mat big = oracle::Mat::Zero(d + 3, d + 3);
        big.topLeftCorner(d, d) = rho;
        const oracle::Mat x = 0.5 * (a + a.adjoint());
        const double mean = (big * x).trace().real();
        const double second = (big * x * x).trace().real();
        EXPECT_NEAR(quadrature_variance(to_state(rho)), second - mean * mean, 1e-12);
    }
    for (int n = 0; n < 6; ++n) EXPECT_NEAR(quadrature_variance(Fock{n}), (2 * n + 1) / 4.0, 1e-12);
}

TEST(simulate_heterodyne, coherent_moments) {
    const HeterodyneRecord r = simulate_heterodyne(Coherent{cdouble(1.0, 1.0)}, 1.0, 1000000, 12);
    const Stats re = stats(r.alphas, [](cdouble a) { return a.real(); });
    const Stats im = stats(r.alphas, [](cdouble a) { return a.imag(); });
    EXPECT_LE(std::abs(re.mean - 1.0), 4.0 * std::sqrt(re.var / r.n()));
    EXPECT_LE(std::abs(im.mean - 1.0), 4.0 * std::sqrt(im.var / r.n()));
    const Stats abs2 = stats(r.alphas, [](cdouble a) { return std::norm(a); });
    EXPECT_NEAR(abs2.mean - 2.0, 1.0, 0.01);
}

TEST(simulate_heterodyne, quadrature_variance_follows_efficiency) {
    const HeterodyneRecord r = simulate_heterodyne(Coherent{0.0}, 0.5, 1000000, 13);
    EXPECT_NEAR(stats(r.alphas, [](cdouble a) { return a.real(); }).var, 1.0, 0.01);
    EXPECT_NEAR(stats(r.alphas, [](cdouble a) { return a.imag(); }).var, 1.0, 0.01);
}

TEST(simulate_heterodyne, covariance_is_isotropic) {
    const HeterodyneRecord r = simulate_heterodyne(Coherent{cdouble(2.0, -1.0)}, 0.7, 1000000, 14);
    double mr = 0, mi = 0;
    for (const auto& a : r.alphas) {
        mr += a.real() / r.n();
        mi += a.imag() / r.n();
    }
    double c = 0, c2 = 0;
    for (const auto& a : r.alphas) {
        const double p = (a.real() - mr) * (a.imag() - mi);
        c += p / r.n();
        c2 += p * p / r.n();
    }
    EXPECT_LE(std::abs(c), 4.0 * std::sqrt((c2 - c * c) / r.n()));
}

TEST(simulate_heterodyne, coherent_only) {
    EXPECT_EQ(error_kind_of([] { simulate_heterodyne(Fock{1}, 1.0, 10, 0); }), ErrorKind::Capability);
    const auto a = simulate_heterodyne(Coherent{1.0}, 1.0, 1000, 3);
    const auto b = simulate_heterodyne(Coherent{1.0}, 1.0, 1000, 3);
    EXPECT_EQ(a.alphas, b.alphas);
}

TEST(amplitude_noise_direct, examples) {
    auto expect_pair = [](std::pair<double, double> got, double plus, double minus) {
        EXPECT_NEAR(got.first, plus, 1e-12);
        EXPECT_NEAR(got.second, minus, 1e-12);
    };
    expect_pair(amplitude_noise_direct(Coherent{cdouble(0.6, 2.0)}, 1.0), 0.5, 0.5);
    expect_pair(amplitude_noise_direct(Coherent{1.0}, 0.25), 2.0, 2.0);
    expect_pair(amplitude_noise_direct(Fock{2}, 1.0), 1.5, 1.5);
}

TEST(amplitude_noise_direct, agrees_with_heterodyne_record) {
    const auto r = simulate_heterodyne(Coherent{cdouble(-1.0, 0.5)}, 0.8, 1000000, 15);
    const auto [plus, minus] = heterodyne_noise(r);
    const auto [want_plus, want_minus] = amplitude_noise_direct(Coherent{cdouble(-1.0, 0.5)}, 0.8);
    EXPECT_NEAR(plus, want_plus, 0.01 * want_plus);
    EXPECT_NEAR(minus, want_minus, 0.01 * want_minus);
    EXPECT_GE(plus, minus);
}

TEST(heterodyne_phase_variance, vacuum_is_uniform) {
    const auto r = simulate_heterodyne(Coherent{0.0}, 1.0, 1000000, 16);
    EXPECT_NEAR(heterodyne_phase_variance(r), kPi * kPi / 3.0, 0.02 * kPi * kPi / 3.0);
}

TEST(heterodyne_phase_variance, bright_state_asymptote) {
    const auto r = simulate_heterodyne(Coherent{5.0}, 1.0, 1000000, 17);
    EXPECT_NEAR(heterodyne_phase_variance(r), 0.02, 0.03 * 0.02);
}

// At eta = 0.5 the next-order correction to 1/(2 eta nbar) is about 4%, so the
// comparison uses the exact phase marginal of the displaced Gaussian.
TEST(heterodyne_phase_variance, matches_exact_phase_marginal) {
    for (double eta : {1.0, 0.5}) {
        const auto r = simulate_heterodyne(Coherent{5.0}, eta, 1000000, 18);
        const double sigma2 = 0.5 / eta;
        const double want = oracle::simpson(
            [&](double t) { return t * t * oracle::displaced_gaussian_phase_density(5.0, sigma2, t); }, -kPi, kPi,
            20000);
        EXPECT_NEAR(heterodyne_phase_variance(r), want, 0.01 * want) << "eta=" << eta;
    }
}

TEST(record_statistics, empty_records) {
    EXPECT_EQ(error_kind_of([] { heterodyne_phase_variance(HeterodyneRecord{}); }), ErrorKind::Argument);
    EXPECT_EQ(error_kind_of([] { photocount_intensity_variance(PhotocountRecord{}); }), ErrorKind::Argument);
    EXPECT_EQ(error_kind_of([] { heterodyne_noise(HeterodyneRecord{}); }), ErrorKind::Argument);
}

TEST(record_csv, photocount_round_trip) {
    const auto r = simulate_photocount(Coherent{1.5}, 0.9, 500, 19);
    std::stringstream ss;
    write_photocount_csv(r, ss);
    EXPECT_NE(ss.str().find("\nm\n"), std::string::npos);
    EXPECT_EQ(ss.str().rfind("# state=", 0), 0u);
    const auto back = read_photocount_csv(ss);
    EXPECT_EQ(back.counts, r.counts);
    EXPECT_EQ(back.eta, r.eta);
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(back.state_tag, r.state_tag);
}

TEST(record_csv, heterodyne_round_trip) {
    const auto r = simulate_heterodyne(Coherent{cdouble(0.1, -0.2)}, 0.3, 500, 20);
    std::stringstream ss;
    write_heterodyne_csv(r, ss);
    EXPECT_NE(ss.str().find("\nre,im\n"), std::string::npos);
    const auto back = read_heterodyne_csv(ss);
    EXPECT_EQ(back.alphas, r.alphas);
    EXPECT_EQ(back.eta, r.eta);
}

TEST(record_csv, read_errors) {
    std::istringstream bad_count("# state=x eta=1 seed=0 n=1\nm\n-1\n");
    EXPECT_EQ(error_kind_of([&] { read_photocount_csv(bad_count); }), ErrorKind::Io);
    std::istringstream no_meta("re,im\n1,2\n");
    EXPECT_EQ(error_kind_of([&] { read_heterodyne_csv(no_meta); }), ErrorKind::Io);
    std::istringstream nan_row("# state=x eta=1 seed=0 n=1\nre,im\nnan,0\n");
    EXPECT_EQ(error_kind_of([&] { read_heterodyne_csv(nan_row); }), ErrorKind::Validation);
}
