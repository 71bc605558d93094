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

// Batched arithmetic kernels used by the estimators and the samplers.
//
// Every kernel has a scalar reference implementation. AVX2+FMA (x86-64) and
// NEON (AArch64) variants are compiled when the toolchain targets them and are
// selected at runtime. HOMODYNE_SIMD=scalar|avx2|neon forces a backend.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace homodyne::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view name(Backend backend);

/// True when the variant was compiled in and the CPU supports it.
bool available(Backend backend);

Backend active_backend();

/// Overrides the runtime choice. Throws Capability if the backend is unavailable.
void set_backend(Backend backend);

/// Count, mean and sum of squared deviations of one block.
struct BlockMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
};

/// Joint moments of paired values (a_i, b_i).
struct BlockMoments2 {
    std::size_t count = 0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double m2_a = 0.0;
    double m2_b = 0.0;
    double c_ab = 0.0;
};

/// Function table of one backend. Raw pointers keep the table trivially
/// copyable; the span wrappers below are the public surface.
struct KernelOps {
    // out[i] = norm * H_order(scale * x[i]), physicists' Hermite polynomial
    void (*hermite_kernel)(int order, double scale, double norm, const double* x, double* out, std::size_t len);
    // out[i] = 2 x[i]^2 - offset
    void (*intensity_kernel)(double offset, const double* x, double* out, std::size_t len);
    // out[i] = arg(x e^{i phi}) in (-pi, pi] for phi in [0, pi); x == 0 gives phi
    std::size_t (*phase_kernel)(const double* x, const double* phi, double* out, std::size_t len);
    // out[n * len + i] = psi_n(x[i]) for n < rows (variance-1/4 oscillator)
    void (*hermite_function_table)(int rows, const double* x, double* out, std::size_t len);
    BlockMoments (*block_moments)(const double* v, std::size_t len);
    BlockMoments2 (*block_moments2)(const double* a, const double* b, std::size_t len);
};

const KernelOps& ops(Backend backend);
const KernelOps& active_ops();

void hermite_kernel(int order, double scale, double norm, std::span<const double> x, std::span<double> out);
void intensity_kernel(double offset, std::span<const double> x, std::span<double> out);
/// Returns the number of degenerate (x == 0) entries.
std::size_t phase_kernel(std::span<const double> x, std::span<const double> phi, std::span<double> out);
void hermite_function_table(int rows, std::span<const double> x, std::span<double> out);
BlockMoments block_moments(std::span<const double> v);
BlockMoments2 block_moments2(std::span<const double> a, std::span<const double> b);

namespace detail {
extern const KernelOps kScalarOps;
#if defined(HOMODYNE_HAVE_AVX2)
extern const KernelOps kAvx2Ops;
#endif
#if defined(HOMODYNE_HAVE_NEON)
extern const KernelOps kNeonOps;
#endif
}  // namespace detail

}  // namespace homodyne::simd
