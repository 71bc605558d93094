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

#include <atomic>
#include <cstdlib>
#include <string>

#include "homodyne/errors.hpp"
#include "homodyne/simd.hpp"

namespace homodyne::simd {

namespace {

bool cpu_has_avx2() {
#if defined(HOMODYNE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend best_available() {
    if (available(Backend::Avx2)) return Backend::Avx2;
    if (available(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

Backend initial_backend() {
    if (const char* env = std::getenv("HOMODYNE_SIMD")) {
        const std::string want(env);
        for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
            if (want == name(b) && available(b)) return b;
        }
    }
    return best_available();
}

std::atomic<const KernelOps*>& active_slot() {
    static std::atomic<const KernelOps*> slot{&ops(initial_backend())};
    return slot;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{initial_backend()};
    return slot;
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) fail(ErrorKind::Argument, "batch kernel input/output lengths differ");
}

}  // namespace

std::string_view name(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

bool available(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return true;
        case Backend::Avx2: {
            static const bool ok = cpu_has_avx2();
            return ok;
        }
        case Backend::Neon:
#if defined(HOMODYNE_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelOps& ops(Backend backend) {
    if (!available(backend)) {
        fail(ErrorKind::Capability, "SIMD backend " + std::string(name(backend)) + " is not available");
    }
    switch (backend) {
        case Backend::Scalar: return detail::kScalarOps;
#if defined(HOMODYNE_HAVE_AVX2)
        case Backend::Avx2: return detail::kAvx2Ops;
#endif
#if defined(HOMODYNE_HAVE_NEON)
        case Backend::Neon: return detail::kNeonOps;
#endif
        default: break;
    }
    return detail::kScalarOps;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
    const KernelOps& table = ops(backend);
    active_slot().store(&table, std::memory_order_relaxed);
    backend_slot().store(backend, std::memory_order_relaxed);
}

const KernelOps& active_ops() { return *active_slot().load(std::memory_order_relaxed); }

void hermite_kernel(int order, double scale, double norm, std::span<const double> x, std::span<double> out) {
    check_sizes(x.size(), out.size());
    active_ops().hermite_kernel(order, scale, norm, x.data(), out.data(), x.size());
}

void intensity_kernel(double offset, std::span<const double> x, std::span<double> out) {
    check_sizes(x.size(), out.size());
    active_ops().intensity_kernel(offset, x.data(), out.data(), x.size());
}

std::size_t phase_kernel(std::span<const double> x, std::span<const double> phi, std::span<double> out) {
    check_sizes(x.size(), out.size());
    check_sizes(x.size(), phi.size());
    return active_ops().phase_kernel(x.data(), phi.data(), out.data(), x.size());
}

void hermite_function_table(int rows, std::span<const double> x, std::span<double> out) {
    if (rows < 0 || out.size() != static_cast<std::size_t>(rows) * x.size()) {
        fail(ErrorKind::Argument, "hermite_function_table needs rows * len outputs");
    }
    active_ops().hermite_function_table(rows, x.data(), out.data(), x.size());
}

BlockMoments block_moments(std::span<const double> v) { return active_ops().block_moments(v.data(), v.size()); }

BlockMoments2 block_moments2(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size());
    return active_ops().block_moments2(a.data(), b.data(), a.size());
}

}  // namespace homodyne::simd
