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

#include <gtest/gtest.h>

#include "homodyne/errors.hpp"
#include "homodyne/state.hpp"
#include "oracles.hpp"

namespace homodyne::testing {

inline StateSpec to_state(const oracle::Mat& rho) {
    const int d = static_cast<int>(rho.rows());
    std::vector<cdouble> e(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e[static_cast<std::size_t>(i) * d + j] = rho(i, j);
    return make_mixed(DensityMatrix(d, std::move(e)));
}

template <typename Fn>
ErrorKind error_kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a homodyne::Error";
    return ErrorKind::Io;
}

}  // namespace homodyne::testing
