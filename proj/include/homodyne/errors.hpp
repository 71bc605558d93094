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

#include <stdexcept>
#include <string>
#include <string_view>

namespace homodyne {

/// Classification of library failures. The CLI maps each kind onto an exit code.
enum class ErrorKind {
    Validation,        ///< malformed state or record (non-Hermitian rho, bad trace, ...)
    Domain,            ///< parameter outside its mathematical domain (eta, nbar, ...)
    Order,             ///< Hermite / monomial order above the supported cap
    Truncation,        ///< moment order not representable in the truncated space
    Range,             ///< numeric grid or sampler range insufficient
    Capability,        ///< unsupported (observable, state, detector) combination
    AsymptoticDomain,  ///< closed form only valid in a regime the input is not in
    Argument,          ///< empty dataset, bad bin count, ...
    Type,              ///< complex kernel requested from a real estimator
    Config,            ///< CLI / JSON schema problem
    Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace homodyne
