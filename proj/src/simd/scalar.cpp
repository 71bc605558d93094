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

// Scalar reference kernels. The vector backends are tested against these.

#include <cmath>

#include "homodyne/simd.hpp"

namespace homodyne::simd::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;

void hermite_kernel_scalar(int order, double scale, double norm, const double* x, double* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        const double y = scale * x[i];
        double h0 = 1.0;
        if (order == 0) {
            out[i] = norm;
            continue;
        }
        double h1 = 2.0 * y;
        for (int k = 1; k < order; ++k) {
            const double h2 = 2.0 * y * h1 - 2.0 * k * h0;
            h0 = h1;
            h1 = h2;
        }
        out[i] = norm * h1;
    }
}

void intensity_kernel_scalar(double offset, const double* x, double* out, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] = 2.0 * x[i] * x[i] - offset;
}

std::size_t phase_kernel_scalar(const double* x, const double* phi, double* out, std::size_t len) {
    std::size_t degenerate = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (x[i] < 0.0) {
            const double w = phi[i] - kPi;
            out[i] = w <= -kPi ? kPi : w;
        } else {
            degenerate += x[i] == 0.0;
            out[i] = phi[i];
        }
    }
    return degenerate;
}

void hermite_function_table_scalar(int rows, const double* x, double* out, std::size_t len) {
    if (rows <= 0) return;
    const double c0 = std::pow(2.0 / kPi, 0.25);
    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t i = 0; i < len; ++i) out[i] = c0 * std::exp(-x[i] * x[i]);
    if (rows == 1) return;
    for (std::size_t i = 0; i < len; ++i) out[len + i] = 2.0 * x[i] * out[i];
    for (int k = 1; k + 1 < rows; ++k) {
        const double a = std::sqrt(2.0 / (k + 1.0)) * sqrt2;
        const double b = std::sqrt(k / (k + 1.0));
        const double* pk = out + static_cast<std::size_t>(k) * len;
        const double* pkm1 = pk - len;
        double* pkp1 = out + static_cast<std::size_t>(k + 1) * len;
        for (std::size_t i = 0; i < len; ++i) pkp1[i] = a * x[i] * pk[i] - b * pkm1[i];
    }
}

BlockMoments block_moments_scalar(const double* v, std::size_t len) {
    BlockMoments r;
    r.count = len;
    if (len == 0) return r;
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) sum += v[i];
    r.mean = sum / static_cast<double>(len);
    double m2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double d = v[i] - r.mean;
        m2 += d * d;
    }
    r.m2 = m2;
    return r;
}

BlockMoments2 block_moments2_scalar(const double* a, const double* b, std::size_t len) {
    BlockMoments2 r;
    r.count = len;
    if (len == 0) return r;
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        sa += a[i];
        sb += b[i];
    }
    r.mean_a = sa / static_cast<double>(len);
    r.mean_b = sb / static_cast<double>(len);
    double maa = 0.0, mbb = 0.0, mab = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double da = a[i] - r.mean_a;
        const double db = b[i] - r.mean_b;
        maa += da * da;
        mbb += db * db;
        mab += da * db;
    }
    r.m2_a = maa;
    r.m2_b = mbb;
    r.c_ab = mab;
    return r;
}

}  // namespace

const KernelOps kScalarOps = {
    hermite_kernel_scalar,         intensity_kernel_scalar, phase_kernel_scalar,
    hermite_function_table_scalar, block_moments_scalar,    block_moments2_scalar,
};

}  // namespace homodyne::simd::detail
