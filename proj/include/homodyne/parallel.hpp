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
#include <cstdint>
#include <functional>
#include <random>

namespace homodyne {

/// Samples per RNG block. Each block owns an independently seeded engine, so
/// output never depends on how blocks are distributed over threads.
inline constexpr std::size_t kSampleBlock = std::size_t{1} << 16;

/// Worker threads: HOMODYNE_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Runs task(i) for i in [0, count). Tasks must write disjoint outputs.
/// The first exception thrown by any task is rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

/// Independent RNG streams, one per (purpose, block) under a user seed.
enum class Stream : std::uint32_t {
    Homodyne = 1,
    Photocount = 2,
    Heterodyne = 3,
    Sweep = 4,
};

using Engine = std::mt19937_64;

Engine block_engine(std::uint64_t seed, Stream stream, std::uint64_t block);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

/// Deterministic 64-bit mix used to derive child seeds (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace homodyne
