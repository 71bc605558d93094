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

// AVX2 + FMA kernels, four doubles per register. This translation unit is
// built with -mavx2 -mfma and must only be entered after a CPUID check.

#include "homodyne/simd.hpp"

#if defined(HOMODYNE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace homodyne::simd::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void hermite_kernel_avx2(int order, double scale, double norm, const double* x, double* out, std::size_t len) {
    if (order == 0) {
        for (std::size_t i = 0; i < len; ++i) out[i] = norm;
        return;
    }
    const __m256d vscale2 = _mm256_set1_pd(2.0 * scale);
    const __m256d vnorm = _mm256_set1_pd(norm);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const __m256d y2 = _mm256_mul_pd(vscale2, _mm256_loadu_pd(x + i));
        __m256d h0 = _mm256_set1_pd(1.0);
        __m256d h1 = y2;
        for (int k = 1; k < order; ++k) {
            const __m256d h2 = _mm256_fmsub_pd(y2, h1, _mm256_mul_pd(_mm256_set1_pd(2.0 * k), h0));
            h0 = h1;
            h1 = h2;
        }
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vnorm, h1));
    }
    if (i < len) kScalarOps.hermite_kernel(order, scale, norm, x + i, out + i, len - i);
}

void intensity_kernel_avx2(double offset, const double* x, double* out, std::size_t len) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d voff = _mm256_set1_pd(offset);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_fmsub_pd(_mm256_mul_pd(two, v), v, voff));
    }
    if (i < len) kScalarOps.intensity_kernel(offset, x + i, out + i, len - i);
}

std::size_t phase_kernel_avx2(const double* x, const double* phi, double* out, std::size_t len) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d pi = _mm256_set1_pd(kPi);
    const __m256d neg_pi = _mm256_set1_pd(-kPi);
    std::size_t degenerate = 0;
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vphi = _mm256_loadu_pd(phi + i);
        const __m256d negative = _mm256_cmp_pd(vx, zero, _CMP_LT_OQ);
        const __m256d shifted = _mm256_sub_pd(vphi, pi);
        // phi == 0 with x < 0 lands on -pi, which belongs to +pi in (-pi, pi]
        const __m256d wrapped = _mm256_blendv_pd(shifted, pi, _mm256_cmp_pd(shifted, neg_pi, _CMP_LE_OQ));
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(vphi, wrapped, negative));
        const int zmask = _mm256_movemask_pd(_mm256_cmp_pd(vx, zero, _CMP_EQ_OQ));
        degenerate += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(zmask)));
    }
    if (i < len) degenerate += kScalarOps.phase_kernel(x + i, phi + i, out + i, len - i);
    return degenerate;
}

void hermite_function_table_avx2(int rows, const double* x, double* out, std::size_t len) {
    if (rows <= 0) return;
    const double c0 = std::pow(2.0 / kPi, 0.25);
    for (std::size_t i = 0; i < len; ++i) out[i] = c0 * std::exp(-x[i] * x[i]);
    if (rows == 1) return;
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        _mm256_storeu_pd(out + len + i, _mm256_mul_pd(_mm256_mul_pd(two, _mm256_loadu_pd(x + i)), _mm256_loadu_pd(out + i)));
    }
    for (; i < len; ++i) out[len + i] = 2.0 * x[i] * out[i];
    const double sqrt2 = std::sqrt(2.0);
    for (int k = 1; k + 1 < rows; ++k) {
        const double a = std::sqrt(2.0 / (k + 1.0)) * sqrt2;
        const double b = std::sqrt(k / (k + 1.0));
        const __m256d va = _mm256_set1_pd(a);
        const __m256d vb = _mm256_set1_pd(b);
        const double* pk = out + static_cast<std::size_t>(k) * len;
        const double* pkm1 = pk - len;
        double* pkp1 = out + static_cast<std::size_t>(k + 1) * len;
        std::size_t j = 0;
        for (; j + kLanes <= len; j += kLanes) {
            const __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + j));
            const __m256d r = _mm256_fmsub_pd(ax, _mm256_loadu_pd(pk + j), _mm256_mul_pd(vb, _mm256_loadu_pd(pkm1 + j)));
            _mm256_storeu_pd(pkp1 + j, r);
        }
        for (; j < len; ++j) pkp1[j] = a * x[j] * pk[j] - b * pkm1[j];
    }
}

BlockMoments block_moments_avx2(const double* v, std::size_t len) {
    BlockMoments r;
    r.count = len;
    if (len == 0) return r;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= len; i += 2 * kLanes) {
        s0 = _mm256_add_pd(s0, _mm256_loadu_pd(v + i));
        s1 = _mm256_add_pd(s1, _mm256_loadu_pd(v + i + kLanes));
    }
    double sum = hsum(_mm256_add_pd(s0, s1));
    for (; i < len; ++i) sum += v[i];
    r.mean = sum / static_cast<double>(len);

    const __m256d vmean = _mm256_set1_pd(r.mean);
    __m256d q0 = _mm256_setzero_pd();
    __m256d q1 = _mm256_setzero_pd();
    i = 0;
    for (; i + 2 * kLanes <= len; i += 2 * kLanes) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(v + i), vmean);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(v + i + kLanes), vmean);
        q0 = _mm256_fmadd_pd(d0, d0, q0);
        q1 = _mm256_fmadd_pd(d1, d1, q1);
    }
    double m2 = hsum(_mm256_add_pd(q0, q1));
    for (; i < len; ++i) {
        const double d = v[i] - r.mean;
        m2 += d * d;
    }
    r.m2 = m2;
    return r;
}

BlockMoments2 block_moments2_avx2(const double* a, const double* b, std::size_t len) {
    BlockMoments2 r;
    r.count = len;
    if (len == 0) return r;
    __m256d sa = _mm256_setzero_pd();
    __m256d sb = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        sa = _mm256_add_pd(sa, _mm256_loadu_pd(a + i));
        sb = _mm256_add_pd(sb, _mm256_loadu_pd(b + i));
    }
    double suma = hsum(sa);
    double sumb = hsum(sb);
    for (; i < len; ++i) {
        suma += a[i];
        sumb += b[i];
    }
    r.mean_a = suma / static_cast<double>(len);
    r.mean_b = sumb / static_cast<double>(len);

    const __m256d ma = _mm256_set1_pd(r.mean_a);
    const __m256d mb = _mm256_set1_pd(r.mean_b);
    __m256d qaa = _mm256_setzero_pd();
    __m256d qbb = _mm256_setzero_pd();
    __m256d qab = _mm256_setzero_pd();
    i = 0;
    for (; i + kLanes <= len; i += kLanes) {
        const __m256d da = _mm256_sub_pd(_mm256_loadu_pd(a + i), ma);
        const __m256d db = _mm256_sub_pd(_mm256_loadu_pd(b + i), mb);
        qaa = _mm256_fmadd_pd(da, da, qaa);
        qbb = _mm256_fmadd_pd(db, db, qbb);
        qab = _mm256_fmadd_pd(da, db, qab);
    }
    double maa = hsum(qaa), mbb = hsum(qbb), mab = hsum(qab);
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

const KernelOps kAvx2Ops = {
    hermite_kernel_avx2,         intensity_kernel_avx2, phase_kernel_avx2,
    hermite_function_table_avx2, block_moments_avx2,    block_moments2_avx2,
};

}  // namespace homodyne::simd::detail

#endif  // HOMODYNE_HAVE_AVX2
