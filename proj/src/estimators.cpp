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

#include "homodyne/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "homodyne/errors.hpp"
#include "homodyne/parallel.hpp"
#include "homodyne/simd.hpp"
#include "homodyne/state.hpp"

namespace homodyne {

namespace {

std::size_t block_count(std::size_t n) { return (n + kKernelBlock - 1) / kKernelBlock; }

void require_nonempty(const Dataset& data) {
    if (data.n() == 0) fail(ErrorKind::Argument, "dataset is empty");
    if (data.x.size() != data.phi.size()) fail(ErrorKind::Validation, "dataset x and phi lengths differ");
}

}  // namespace

void RunningMoments::push(double v) {
    ++n_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (v - mean_);
}

void RunningMoments::merge_block(std::size_t count, double mean, double m2) {
    if (count == 0) return;
    if (n_ == 0) {
        n_ = count;
        mean_ = mean;
        m2_ = m2;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(count);
    const double total = na + nb;
    const double delta = mean - mean_;
    mean_ += delta * nb / total;
    m2_ += m2 + delta * delta * na * nb / total;
    n_ += count;
}

void RunningMoments::merge(const RunningMoments& other) { merge_block(other.n_, other.mean_, other.m2_); }

void RunningMoments2::push(double a, double b) {
    ++n_;
    const double n = static_cast<double>(n_);
    const double da = a - mean_a_;
    const double db = b - mean_b_;
    mean_a_ += da / n;
    mean_b_ += db / n;
    m2_a_ += da * (a - mean_a_);
    m2_b_ += db * (b - mean_b_);
    c_ab_ += da * (b - mean_b_);
}

void RunningMoments2::merge_raw(std::size_t count, double mean_a, double mean_b, double m2_a, double m2_b,
                                double c_ab) {
    if (count == 0) return;
    if (n_ == 0) {
        n_ = count;
        mean_a_ = mean_a;
        mean_b_ = mean_b;
        m2_a_ = m2_a;
        m2_b_ = m2_b;
        c_ab_ = c_ab;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(count);
    const double total = na + nb;
    const double da = mean_a - mean_a_;
    const double db = mean_b - mean_b_;
    const double w = na * nb / total;
    mean_a_ += da * nb / total;
    mean_b_ += db * nb / total;
    m2_a_ += m2_a + da * da * w;
    m2_b_ += m2_b + db * db * w;
    c_ab_ += c_ab + da * db * w;
    n_ += count;
}

void RunningMoments2::merge(const RunningMoments2& other) {
    merge_raw(other.n_, other.mean_a_, other.mean_b_, other.m2_a_, other.m2_b_, other.c_ab_);
}

std::vector<RunningMoments> kernel_block_moments(const Dataset& data, const Observable& obs,
                                                 std::size_t* degenerate) {
    require_nonempty(data);
    check_observable(obs);
    const std::size_t n = data.n();
    const std::size_t blocks = block_count(n);
    std::vector<RunningMoments> partial(blocks);
    std::vector<std::size_t> partial_degenerate(blocks, 0);
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t begin = b * kKernelBlock;
        const std::size_t len = std::min(kKernelBlock, n - begin);
        std::vector<double> w(len);
        partial_degenerate[b] = kernel_batch(obs, data.eta, std::span(data.x).subspan(begin, len),
                                             std::span(data.phi).subspan(begin, len), w, {});
        const simd::BlockMoments m = simd::block_moments(w);
        partial[b].merge_block(m.count, m.mean, m.m2);
    });
    if (degenerate) {
        *degenerate = 0;
        for (std::size_t d : partial_degenerate) *degenerate += d;
    }
    return partial;
}

std::vector<RunningMoments2> complex_kernel_block_moments(const Dataset& data, const Observable& obs) {
    require_nonempty(data);
    check_observable(obs);
    const std::size_t n = data.n();
    const std::size_t blocks = block_count(n);
    std::vector<RunningMoments2> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t begin = b * kKernelBlock;
        const std::size_t len = std::min(kKernelBlock, n - begin);
        std::vector<double> re(len), im(len);
        kernel_batch(obs, data.eta, std::span(data.x).subspan(begin, len), std::span(data.phi).subspan(begin, len), re,
                     im);
        const simd::BlockMoments2 m = simd::block_moments2(re, im);
        partial[b].merge_raw(m.count, m.mean_a, m.mean_b, m.m2_a, m.m2_b, m.c_ab);
    });
    return partial;
}

RunningMoments kernel_moments(const Dataset& data, const Observable& obs, std::size_t* degenerate) {
    RunningMoments acc;
    for (const auto& m : kernel_block_moments(data, obs, degenerate)) acc.merge(m);
    return acc;
}

RunningMoments2 complex_kernel_moments(const Dataset& data, const Observable& obs) {
    RunningMoments2 acc;
    for (const auto& m : complex_kernel_block_moments(data, obs)) acc.merge(m);
    return acc;
}

Estimate estimate_mean(const Dataset& data, const Observable& obs) {
    require_nonempty(data);
    if (!is_real_valued(obs)) {
        fail(ErrorKind::Type, "observable " + observable_name(obs) + " has a complex kernel; use estimate_complex");
    }
    const RunningMoments m = kernel_moments(data, obs);
    Estimate e;
    e.value = m.mean();
    e.n = m.count();
    e.std_error = std::sqrt(m.sample_variance() / static_cast<double>(m.count()));
    return e;
}

ComplexEstimate estimate_complex(const Dataset& data, const Observable& obs) {
    require_nonempty(data);
    const RunningMoments2 m = complex_kernel_moments(data, obs);
    const double trace = m.var_a() + m.var_b();
    const double diff = m.var_a() - m.var_b();
    const double spread = std::sqrt(diff * diff + 4.0 * m.cov_ab() * m.cov_ab());
    ComplexEstimate e;
    e.value = {m.mean_a(), m.mean_b()};
    e.noise_plus = 0.5 * (trace + spread);
    e.noise_minus = std::max(0.0, 0.5 * (trace - spread));
    e.n = m.count();
    return e;
}

double empirical_kernel_variance(const Dataset& data, const Observable& obs) {
    require_nonempty(data);
    if (!is_real_valued(obs)) {
        fail(ErrorKind::Type, "observable " + observable_name(obs) + " has a complex kernel; use estimate_complex");
    }
    return kernel_moments(data, obs).variance();
}

double PhaseHistogram::bin_width() const noexcept { return mass.empty() ? 0.0 : 2.0 * kPi / mass.size(); }

double PhaseHistogram::bin_center(std::size_t b) const noexcept { return -kPi + (b + 0.5) * bin_width(); }

double PhaseHistogram::density(std::size_t b) const noexcept { return mass[b] / bin_width(); }

PhaseHistogram phase_kernel_distribution(const Dataset& data, std::size_t bins) {
    require_nonempty(data);
    if (bins < 8) fail(ErrorKind::Argument, "phase histogram needs at least 8 bins");
    const std::size_t n = data.n();
    std::vector<std::size_t> counts(bins, 0);
    std::vector<double> w(kKernelBlock);
    const double width = 2.0 * kPi / static_cast<double>(bins);
    for (std::size_t begin = 0; begin < n; begin += kKernelBlock) {
        const std::size_t len = std::min(kKernelBlock, n - begin);
        std::span<double> out(w.data(), len);
        simd::phase_kernel(std::span(data.x).subspan(begin, len), std::span(data.phi).subspan(begin, len), out);
        for (double v : out) {
            const auto b = static_cast<std::size_t>(std::floor((v + kPi) / width));
            ++counts[std::min(b, bins - 1)];
        }
    }
    PhaseHistogram h;
    h.n = n;
    h.mass.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) h.mass[b] = static_cast<double>(counts[b]) / static_cast<double>(n);
    return h;
}

double coherent_phase_kernel_density(double abs_beta, double eta, double w) {
    check_efficiency(eta);
    return (1.0 + std::erf(std::sqrt(2.0 * eta) * abs_beta * std::cos(w))) / (2.0 * kPi);
}

nlohmann::json to_json(const Estimate& e) { return {{"value", e.value}, {"stderr", e.std_error}, {"n", e.n}}; }

nlohmann::json to_json(const ComplexEstimate& e) {
    return {{"value", {e.value.real(), e.value.imag()}},
            {"noise_plus", e.noise_plus},
            {"noise_minus", e.noise_minus},
            {"n", e.n}};
}

}  // namespace homodyne
