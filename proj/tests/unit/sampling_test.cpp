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

#include "homodyne/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "homodyne/errors.hpp"
#include "homodyne/parallel.hpp"

using namespace homodyne;
using homodyne::testing::error_kind_of;
using homodyne::testing::to_state;

namespace {

double variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

class ThreadsEnv {
public:
    ThreadsEnv() {
        if (const char* v = std::getenv("HOMODYNE_THREADS")) saved_ = v;
    }
    ~ThreadsEnv() {
        if (saved_.empty()) {
            unsetenv("HOMODYNE_THREADS");
        } else {
            setenv("HOMODYNE_THREADS", saved_.c_str(), 1);
        }
    }
    void set(const char* v) { setenv("HOMODYNE_THREADS", v, 1); }

private:
    std::string saved_;
};

}  // namespace

TEST(sample_homodyne, deterministic_for_fixed_seed) {
    const StateSpec states[] = {Coherent{cdouble(1.0, 0.5)}, Fock{2}};
    for (const auto& s : states) {
        const Dataset a = sample_homodyne(s, 0.8, 5000, 17);
        const Dataset b = sample_homodyne(s, 0.8, 5000, 17);
        const Dataset c = sample_homodyne(s, 0.8, 5000, 18);
        EXPECT_EQ(a.x, b.x);
        EXPECT_EQ(a.phi, b.phi);
        EXPECT_NE(a.x, c.x);
        EXPECT_EQ(a.seed, 17u);
        EXPECT_EQ(a.state_tag, describe(s));
        EXPECT_FALSE(a.fixed_phase.has_value());
    }
}

TEST(sample_homodyne, independent_of_thread_count) {
    ThreadsEnv env;
    const std::size_t n = 3 * kSampleBlock + 17;
    env.set("1");
    const Dataset one = sample_homodyne(Fock{1}, 0.9, n, 5);
    env.set("7");
    const Dataset many = sample_homodyne(Fock{1}, 0.9, n, 5);
    EXPECT_EQ(one.x, many.x);
    EXPECT_EQ(one.phi, many.phi);
    // a prefix of a longer run is the shorter run
    const Dataset longer = sample_homodyne(Fock{1}, 0.9, n + kSampleBlock, 5);
    EXPECT_TRUE(std::equal(one.x.begin(), one.x.end(), longer.x.begin()));
}

TEST(sample_homodyne, vacuum_variance) {
    const Dataset d = sample_homodyne(Coherent{0.0}, 1.0, 1000000, 1);
    EXPECT_NEAR(variance(d.x), 0.25, 0.001);
    const Dataset f = sample_homodyne(Fock{0}, 1.0, 1000000, 2);
    EXPECT_NEAR(variance(f.x), 0.25, 0.001);
}

TEST(sample_homodyne, coherent_variance_at_fixed_phase_bin) {
    const Dataset d = sample_homodyne(Coherent{2.0}, 0.5, 2000000, 3);
    std::vector<double> near_zero;
    for (std::size_t i = 0; i < d.n(); ++i)
        if (d.phi[i] < 0.1) near_zero.push_back(d.x[i]);
    ASSERT_GT(near_zero.size(), 50000u);
    EXPECT_NEAR(variance(near_zero), 0.5, 0.01);
}

TEST(sample_homodyne, fock_one_histogram) {
    const Dataset d = sample_homodyne(Fock{1}, 1.0, 1000000, 4);
    const double lo = -2.5, width = 0.05;
    const int bins = 100;
    std::vector<double> counts(bins, 0.0);
    for (double x : d.x) {
        const int b = static_cast<int>(std::floor((x - lo) / width));
        if (b >= 0 && b < bins) counts[b] += 1.0;
    }
    auto psi1_sq = [](double x) { return 4.0 * x * x * std::sqrt(2.0 / kPi) * std::exp(-2.0 * x * x); };
    double sup = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = lo + b * width;
        const double want = oracle::simpson(psi1_sq, a, a + width, 20) / width;
        sup = std::max(sup, std::abs(counts[b] / (d.n() * width) - want));
    }
    EXPECT_LT(sup, 0.01);
}

TEST(sample_homodyne, efficiency_smearing_matches_pdf) {
    const Dataset d = sample_homodyne(Fock{2}, 0.6, 1000000, 8);
    const double lo = -3.0, width = 0.1;
    const int bins = 60;
    std::vector<double> counts(bins, 0.0);
    for (double x : d.x) {
        const int b = static_cast<int>(std::floor((x - lo) / width));
        if (b >= 0 && b < bins) counts[b] += 1.0;
    }
    double sup = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = lo + b * width;
        const double want =
            oracle::simpson([](double x) { return quadrature_pdf(Fock{2}, 0.0, 0.6, x); }, a, a + width, 10) / width;
        sup = std::max(sup, std::abs(counts[b] / (d.n() * width) - want));
    }
    EXPECT_LT(sup, 0.01);
}

TEST(sample_homodyne, phase_is_uniform) {
    const std::size_t n = 100000;
    double mean_ks = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset d = sample_homodyne(Fock{3}, 1.0, n, seed);
        for (double p : d.phi) {
            ASSERT_GE(p, 0.0);
            ASSERT_LT(p, kPi);
        }
        mean_ks += oracle::ks_uniform(d.phi, kPi) / 10.0;
    }
    EXPECT_LT(mean_ks, 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST(sample_homodyne, field_kernel_mean_law) {
    std::mt19937_64 rng(21);
    const std::vector<StateSpec> states = {Coherent{cdouble(1.3, -0.4)}, to_state(oracle::random_density(5, rng))};
    for (const auto& s : states) {
        const Dataset d = sample_homodyne(s, 0.9, 400000, 22);
        double sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < d.n(); ++i) {
            const double w = 2.0 * d.x[i] * std::cos(d.phi[i]);
            sum += w;
            sq += w * w;
        }
        const double N = static_cast<double>(d.n());
        const double mean = sum / N;
        const double err = std::sqrt((sq / N - mean * mean) / N);
        EXPECT_LE(std::abs(mean - normal_moment(s, 0, 1).real()), 4.0 * err) << describe(s);
    }
}

TEST(sample_fixed_phase, pins_the_phase) {
    const Dataset d = sample_fixed_phase(Coherent{cdouble(0.0, 1.0)}, 1.0, kPi / 2, 200000, 9);
    for (double p : d.phi) ASSERT_EQ(p, kPi / 2);
    ASSERT_TRUE(d.fixed_phase.has_value());
    double mean = 0.0;
    for (double x : d.x) mean += x / d.n();
    EXPECT_NEAR(mean, 1.0, 4.0 * 0.5 / std::sqrt(200000.0));
    EXPECT_NEAR(variance(d.x), 0.25, 0.004);
    EXPECT_EQ(error_kind_of([] { sample_fixed_phase(Fock{0}, 1.0, NAN, 10, 0); }), ErrorKind::Domain);
}

TEST(grid_sampler, inverse_cdf_is_monotone_and_bounded) {
    const GridQuadratureSampler g(Fock{4});
    EXPECT_NEAR(g.half_width(), 3.0 + 2.0 * std::sqrt(5.0), 1e-12);
    EXPECT_GT(g.grid_mass(), 1.0 - 1e-6);
    double prev = -1e9;
    for (int i = 0; i < 1000; ++i) {
        const double x = g.draw(0.7, i / 1000.0);
        EXPECT_GE(x, prev);
        EXPECT_GE(x, -g.half_width());
        EXPECT_LE(x, g.half_width());
        prev = x;
    }
    EXPECT_NEAR(g.draw(0.7, 0.5), 0.0, 1e-3);
}

TEST(sample_homodyne, argument_errors) {
    EXPECT_EQ(error_kind_of([] { sample_homodyne(Fock{0}, 1.0, 0, 0); }), ErrorKind::Argument);
    EXPECT_EQ(error_kind_of([] { sample_homodyne(Fock{0}, 1.5, 10, 0); }), ErrorKind::Domain);
    EXPECT_EQ(error_kind_of([] { sample_homodyne(Mixed{DensityMatrix(1, {cdouble(0.5)})}, 1.0, 10, 0); }),
              ErrorKind::Validation);
}

TEST(dataset, validate_checks_invariants) {
    Dataset d = sample_homodyne(Fock{0}, 1.0, 10, 0);
    EXPECT_NO_THROW(validate(d));
    Dataset bad_phase = d;
    bad_phase.phi[3] = kPi;
    EXPECT_EQ(error_kind_of([&] { validate(bad_phase); }), ErrorKind::Validation);
    Dataset bad_len = d;
    bad_len.phi.pop_back();
    EXPECT_EQ(error_kind_of([&] { validate(bad_len); }), ErrorKind::Validation);
    Dataset empty;
    EXPECT_EQ(error_kind_of([&] { validate(empty); }), ErrorKind::Argument);
    Dataset nan_x = d;
    nan_x.x[0] = NAN;
    EXPECT_EQ(error_kind_of([&] { validate(nan_x); }), ErrorKind::Validation);
}

TEST(dataset, csv_round_trip_is_exact) {
    const Dataset d = sample_homodyne(Coherent{cdouble(0.3, 2.0)}, 0.7, 1234, 99);
    std::stringstream ss;
    write_dataset_csv(d, ss);
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("# state=", 0), 0u);
    EXPECT_NE(text.find("\nx,phi\n"), std::string::npos);
    const Dataset back = read_dataset_csv(ss);
    EXPECT_EQ(back.x, d.x);
    EXPECT_EQ(back.phi, d.phi);
    EXPECT_EQ(back.eta, d.eta);
    EXPECT_EQ(back.seed, d.seed);
    EXPECT_EQ(back.state_tag, d.state_tag);

    const Dataset fixed = sample_fixed_phase(Fock{1}, 1.0, 0.25, 10, 3);
    std::stringstream fs;
    write_dataset_csv(fixed, fs);
    const Dataset fixed_back = read_dataset_csv(fs);
    ASSERT_TRUE(fixed_back.fixed_phase.has_value());
    EXPECT_EQ(*fixed_back.fixed_phase, 0.25);
}

TEST(dataset, csv_read_errors) {
    std::istringstream wrong_header("# state=x eta=1 seed=0 n=1\nx,theta\n0.1,0.2\n");
    EXPECT_EQ(error_kind_of([&] { read_dataset_csv(wrong_header); }), ErrorKind::Io);
    std::istringstream missing_meta("x,phi\n0.1,0.2\n");
    EXPECT_EQ(error_kind_of([&] { read_dataset_csv(missing_meta); }), ErrorKind::Io);
    std::istringstream wrong_n("# state=x eta=1 seed=0 n=2\nx,phi\n0.1,0.2\n");
    EXPECT_EQ(error_kind_of([&] { read_dataset_csv(wrong_n); }), ErrorKind::Io);
    std::istringstream garbage("# state=x eta=1 seed=0 n=1\nx,phi\n0.1,zero\n");
    EXPECT_EQ(error_kind_of([&] { read_dataset_csv(garbage); }), ErrorKind::Io);
}

TEST(dataset, json_round_trip) {
    const Dataset d = sample_homodyne(Fock{2}, 0.5, 50, 4);
    const nlohmann::json j = dataset_to_json(d);
    EXPECT_EQ(j["n"], 50);
    EXPECT_EQ(j["state"], to_json(StateSpec{Fock{2}}));
    const Dataset back = dataset_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.x, d.x);
    EXPECT_EQ(back.phi, d.phi);
    EXPECT_EQ(back.state_tag, d.state_tag);
    EXPECT_EQ(error_kind_of([] { dataset_from_json(nlohmann::json::parse(R"({"eta":1})")); }), ErrorKind::Io);
}
