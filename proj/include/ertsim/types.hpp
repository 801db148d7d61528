// Copyright 2026 The ertsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ertsim {

using cd = std::complex<double>;

// Dense operator on the N_H-dimensional Hilbert space. Units are carried by
// context; all energies are frequencies with hbar = 1.
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

// Resource guards. Every allocation that scales with the Hilbert dimension is
// checked against these before it happens.
struct Limits {
    std::size_t max_hilbert_dim = 4096;
    std::size_t memory_cap_bytes = std::size_t{2} << 30;
};

// Error hierarchy. `module()` names the component that raised the error so
// the CLI can surface module-qualified diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// A resource cap (Hilbert dimension or memory) would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Numerical breakdown: non-finite values, loss of Hermiticity, step too large.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Malformed or invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ertsim
