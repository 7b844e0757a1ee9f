// Copyright 2026 The qfault Authors
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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qfault {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document or out-of-contract argument.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// A contraction would exceed the configured element cap (memory-out).
class ResourceError : public Error {
  public:
    using Error::Error;
};

/// A contraction exceeded its wall-clock budget (time-out).
class TimeoutError : public Error {
  public:
    using Error::Error;
};

namespace tol {
inline constexpr double kUnitary = 1e-12;
inline constexpr double kTracePreserving = 1e-12;
inline constexpr double kNormalized = 1e-12;
inline constexpr double kClamp = 1e-9;
inline constexpr double kPrune = 1e-15;
inline constexpr double kCommute = 1e-12;
} // namespace tol

/// Max-norm of a matrix.
inline double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Kronecker product with the first factor on the high-order index.
inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

} // namespace qfault
