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

#include <cstddef>
#include <span>
#include <vector>

#include "homodyne/kernels.hpp"
#include "homodyne/sampling.hpp"

namespace homodyne {

/// Streaming count / mean / sum of squared deviations. Merging two
/// accumulators over disjoint ranges gives the sequential result.
class RunningMoments {
public:
    void push(double v);
    void merge(const RunningMoments& other);
    void merge_block(std::size_t count, double mean, double m2);

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double m2() const noexcept { return m2_; }
    /// Population variance (divides by n).
    double variance() const noexcept { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
    /// Sample variance (divides by n - 1).
    double sample_variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Bivariate version tracking the covariance of (a, b).
class RunningMoments2 {
public:
    void push(double a, double b);
    void merge(const RunningMoments2& other);

    std::size_t count() const noexcept { return n_; }
    double mean_a() const noexcept { return mean_a_; }
    double mean_b() const noexcept { return mean_b_; }
    /// Population (co)variances.
    double var_a() const noexcept { return n_ ? m2_a_ / static_cast<double>(n_) : 0.0; }
    double var_b() const noexcept { return n_ ? m2_b_ / static_cast<double>(n_) : 0.0; }
    double cov_ab() const noexcept { return n_ ? c_ab_ / static_cast<double>(n_) : 0.0; }

    void merge_raw(std::size_t count, double mean_a, double mean_b, double m2_a, double m2_b, double c_ab);

private:
    std::size_t n_ = 0;
    double mean_a_ = 0.0, mean_b_ = 0.0;
    double m2_a_ = 0.0, m2_b_ = 0.0, c_ab_ = 0.0;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
    std::size_t n = 0;
};

/// Complex kernel average with the two noises, i.e. the eigenvalues of the
/// covariance matrix of (Re w, Im w).
struct ComplexEstimate {
    cdouble value;
    double noise_plus = 0.0;
    double noise_minus = 0.0;
    std::size_t n = 0;
};

/// Events per kernel-evaluation block.
inline constexpr std::size_t kKernelBlock = 4096;

/// Moments of each consecutive block of kKernelBlock events, in index order.
std::vector<RunningMoments> kernel_block_moments(const Dataset& data, const Observable& obs,
                                                 std::size_t* degenerate = nullptr);
std::vector<RunningMoments2> complex_kernel_block_moments(const Dataset& data, const Observable& obs);

/// Kernel values of a dataset in one pass over SIMD-sized blocks.
RunningMoments kernel_moments(const Dataset& data, const Observable& obs, std::size_t* degenerate = nullptr);
RunningMoments2 complex_kernel_moments(const Dataset& data, const Observable& obs);

Estimate estimate_mean(const Dataset& data, const Observable& obs);

ComplexEstimate estimate_complex(const Dataset& data, const Observable& obs = ComplexAmplitude{});

/// Mean of the squared kernel minus the squared mean.
double empirical_kernel_variance(const Dataset& data, const Observable& obs);

/// Normalized histogram of the phase kernel over (-pi, pi]: entry b is the
/// fraction of events in bin b; bins are uniform, bin 0 starts at -pi.
struct PhaseHistogram {
    std::vector<double> mass;
    std::size_t n = 0;
    double bin_width() const noexcept;
    double bin_center(std::size_t b) const noexcept;
    /// mass / width
    double density(std::size_t b) const noexcept;
};

PhaseHistogram phase_kernel_distribution(const Dataset& data, std::size_t bins);

/// Closed form for a coherent state |beta| with zero mean phase under the
/// convention x = (a + a^dag)/2 with efficiency smearing:
/// p(w) = (1 + erf(sqrt(2 eta) |beta| cos w)) / (2 pi).
double coherent_phase_kernel_density(double abs_beta, double eta, double w);

nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const ComplexEstimate& e);

}  // namespace homodyne
