// Copyright 2026 The tcilab Authors
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

// Thin wrappers over LAPACK's MRRR symmetric/Hermitian eigensolvers that
// return only the lowest `count` eigenpairs.

#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

// lapacke.h must see std::complex before it picks its complex types.
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "tcilab/errors.hpp"

namespace tcilab::linalg {

template <typename Scalar>
struct EigenPairs {
    Eigen::VectorXd values;                                  // ascending
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors; // columns
};

namespace detail {

inline void check_info(lapack_int info, const char *routine) {
    if (info != 0) {
        throw NumericalError(std::string(routine) + " failed with info = " + std::to_string(info));
    }
}

inline lapack_int clamp_count(Eigen::Index n, int count) {
    if (count < 1) {
        throw DomainError("eigensolver count must be >= 1");
    }
    return static_cast<lapack_int>(std::min<Eigen::Index>(n, count));
}

} // namespace detail

/// Lowest `count` eigenpairs of a real symmetric matrix. `a` is overwritten.
inline EigenPairs<double> lowest_eigenpairs(Eigen::MatrixXd &a, int count) {
    const auto n = static_cast<lapack_int>(a.rows());
    if (a.cols() != a.rows()) {
        throw DimensionError("eigensolver needs a square matrix");
    }
    const lapack_int k = detail::clamp_count(a.rows(), count);
    EigenPairs<double> out;
    out.values.resize(n);
    out.vectors.resize(n, k);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0,
                       &found, out.values.data(), out.vectors.data(), n, isuppz.data());
    detail::check_info(info, "dsyevr");
    out.values.conservativeResize(found);
    return out;
}

/// Lowest `count` eigenpairs of a complex Hermitian matrix. `a` is overwritten.
inline EigenPairs<std::complex<double>> lowest_eigenpairs(Eigen::MatrixXcd &a, int count) {
    const auto n = static_cast<lapack_int>(a.rows());
    if (a.cols() != a.rows()) {
        throw DimensionError("eigensolver needs a square matrix");
    }
    const lapack_int k = detail::clamp_count(a.rows(), count);
    EigenPairs<std::complex<double>> out;
    out.values.resize(n);
    out.vectors.resize(n, k);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0,
                       &found, out.values.data(), out.vectors.data(), n, isuppz.data());
    detail::check_info(info, "zheevr");
    out.values.conservativeResize(found);
    return out;
}

} // namespace tcilab::linalg
