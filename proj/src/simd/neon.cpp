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

// AArch64 NEON kernels, two doubles per register. Advanced SIMD is mandatory
// on AArch64, so no runtime probe is needed beyond the compile-time gate.

#include "homodyne/simd.hpp"

#if defined(HOMODYNE_HAVE_NEON)

#include <arm_neon.h>

#include <cmath>

namespace homodyne::simd::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kLanes = 2;

void hermite_kernel_neon(int order, double scale, double norm, const double* x, double* out, std::size_t len) {
    if (order == 0) {
        for (std::size_t i = 0; i < len; ++i) out[i] = norm;
        return;
    }
    const float64x2_t vscale2 = vdupq_n_f64(2.0 * scale);
    const float64x2_t vnorm = vdupq_n_f64(norm);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const float64x2_t y2 = vmulq_f64(vscale2, vld1q_f64(x + i));
        float64x2_t h0 = vdupq_n_f64(1.0);
        float64x2_t h1 = y2;
        for (int k = 1; k < order; ++k) {
            // y2 * h1 - 2k * h0
            const float64x2_t h2 = vfmsq_f64(vmulq_f64(y2, h1), vdupq_n_f64(2.0 * k), h0);
            h0 = h1;
            h1 = h2;
        }
        vst1q_f64(out + i, vmulq_f64(vnorm, h1));
    }
    if (i < len) kScalarOps.hermite_kernel(order, scale, norm, x + i, out + i, len - i);
}

void intensity_kernel_neon(double offset, const double* x, double* out, std::size_t len) {
    const float64x2_t two = vdupq_n_f64(2.0);
    const float64x2_t voff = vdupq_n_f64(offset);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const float64x2_t v = vld1q_f64(x + i);
        vst1q_f64(out + i, vsubq_f64(vmulq_f64(vmulq_f64(two, v), v), voff));
    }
    if (i < len) kScalarOps.intensity_kernel(offset, x + i, out + i, len - i);
}

std::size_t phase_kernel_neon(const double* x, const double* phi, double* out, std::size_t len) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t pi = vdupq_n_f64(kPi);
    const float64x2_t neg_pi = vdupq_n_f64(-kPi);
    std::size_t degenerate = 0;
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const float64x2_t vx = vld1q_f64(x + i);
        const float64x2_t vphi = vld1q_f64(phi + i);
        const uint64x2_t negative = vcltq_f64(vx, zero);
        const float64x2_t shifted = vsubq_f64(vphi, pi);
        const float64x2_t wrapped = vbslq_f64(vcleq_f64(shifted, neg_pi), pi, shifted);
        vst1q_f64(out + i, vbslq_f64(negative, wrapped, vphi));
        const uint64x2_t zeros = vceqq_f64(vx, zero);
        degenerate += (vgetq_lane_u64(zeros, 0) ? 1u : 0u) + (vgetq_lane_u64(zeros, 1) ? 1u : 0u);
    }
    if (i < len) degenerate += kScalarOps.phase_kernel(x + i, phi + i, out + i, len - i);
    return degenerate;
}

void hermite_function_table_neon(int rows, const double* x, double* out, std::size_t len) {
    if (rows <= 0) return;
    const double c0 = std::pow(2.0 / kPi, 0.25);
    for (std::size_t i = 0; i < len; ++i) out[i] = c0 * std::exp(-x[i] * x[i]);
    if (rows == 1) return;
    for (std::size_t i = 0; i < len; ++i) out[len + i] = 2.0 * x[i] * out[i];
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 1; k + 1 < rows; ++k) {
        const double a = std::sqrt(2.0 / (k + 1.0)) * sqrt2;
        const double b = std::sqrt(k / (k + 1.0));
        const float64x2_t va = vdupq_n_f64(a);
        const float64x2_t vb = vdupq_n_f64(b);
        const double* pk = out + static_cast<std::size_t>(k) * len;
        const double* pkm1 = pk - len;
        double* pkp1 = out + static_cast<std::size_t>(k + 1) * len;
        std::size_t j = 0;
        for (; j + kLanes <= len; j += kLanes) {
            const float64x2_t ax = vmulq_f64(va, vld1q_f64(x + j));
            vst1q_f64(pkp1 + j, vfmsq_f64(vmulq_f64(ax, vld1q_f64(pk + j)), vb, vld1q_f64(pkm1 + j)));
        }
        for (; j < len; ++j) pkp1[j] = a * x[j] * pk[j] - b * pkm1[j];
    }
}

BlockMoments block_moments_neon(const double* v, std::size_t len) {
    BlockMoments r;
    r.count = len;
    if (len == 0) return r;
    float64x2_t s = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) s = vaddq_f64(s, vld1q_f64(v + i));
    double sum = vaddvq_f64(s);
    for (; i < len; ++i) sum += v[i];
    r.mean = sum / static_cast<double>(len);
    const float64x2_t vmean = vdupq_n_f64(r.mean);
    float64x2_t q = vdupq_n_f64(0.0);
    i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const float64x2_t d = vsubq_f64(vld1q_f64(v + i), vmean);
        q = vfmaq_f64(q, d, d);
    }
    double m2 = vaddvq_f64(q);
    for (; i < len; ++i) {
        const double d = v[i] - r.mean;
        m2 += d * d;
    }
    r.m2 = m2;
    return r;
}

BlockMoments2 block_moments2_neon(const double* a, const double* b, std::size_t len) {
    BlockMoments2 r;
    r.count = len;
    if (len == 0) return r;
    float64x2_t sa = vdupq_n_f64(0.0);
    float64x2_t sb = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        sa = vaddq_f64(sa, vld1q_f64(a + i));
        sb = vaddq_f64(sb, vld1q_f64(b + i));
    }
    double suma = vaddvq_f64(sa), sumb = vaddvq_f64(sb);
    for (; i < len; ++i) {
        suma += a[i];
        sumb += b[i];
    }
    r.mean_a = suma / static_cast<double>(len);
    r.mean_b = sumb / static_cast<double>(len);
    const float64x2_t ma = vdupq_n_f64(r.mean_a);
    const float64x2_t mb = vdupq_n_f64(r.mean_b);
    float64x2_t qaa = vdupq_n_f64(0.0), qbb = vdupq_n_f64(0.0), qab = vdupq_n_f64(0.0);
    i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const float64x2_t da = vsubq_f64(vld1q_f64(a + i), ma);
        const float64x2_t db = vsubq_f64(vld1q_f64(b + i), mb);
        qaa = vfmaq_f64(qaa, da, da);
        qbb = vfmaq_f64(qbb, db, db);
        qab = vfmaq_f64(qab, da, db);
    }
    double maa = vaddvq_f64(qaa), mbb = vaddvq_f64(qbb), mab = vaddvq_f64(qab);
    for (; i < len; ++i) {
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

const KernelOps kNeonOps = {
    hermite_kernel_neon,         intensity_kernel_neon, phase_kernel_neon,
    hermite_function_table_neon, block_moments_neon,    block_moments2_neon,
};

}  // namespace homodyne::simd::detail

#endif  // HOMODYNE_HAVE_NEON
