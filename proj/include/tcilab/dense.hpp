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

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcilab/errors.hpp"
#include "tcilab/pauli.hpp"

namespace tcilab {

/// Default qubit cap for any dense 2^L x 2^L representation.
inline constexpr int kDenseQubitCap = 14;

/// Cap for matrix-free scans that touch each column once per x-mask band.
inline constexpr int kMaxDenseNormQubits = 24;

/**
 * Action of a single Pauli string on a computational basis state:
 * P|s> = value * |s ^ x_mask>, with value = i^{#Y} (-1)^{popcount(s & z_mask)}.
 */
inline cplx pauli_basis_action(const PauliString &p, std::uint64_t s) {
    const int sign = (std::popcount(s & p.z_mask()) & 1) != 0 ? 2 : 0;
    return i_pow(p.y_count() + sign);
}

inline void check_dense_cap(int num_qubits, int cap) {
    if (num_qubits > cap) {
        throw CapExceeded("dense representation of " + std::to_string(num_qubits) +
                          " qubits exceeds cap of " + std::to_string(cap));
    }
}

/// True when every matrix element of `o` in the computational basis is real.
inline bool has_real_matrix(const Observable &o) {
    for (const auto &t : o.terms()) {
        const cplx c = t.coeff * i_pow(t.string.y_count());
        if (std::abs(c.imag()) > kPruneTolerance) {
            return false;
        }
    }
    return true;
}

/// Dense matrix sum_t coeff_t * (letters_t as Kronecker product).
inline Eigen::MatrixXcd observable_matrix(const Observable &o, int cap = kDenseQubitCap) {
    const int n = o.num_qubits();
    check_dense_cap(n, cap);
    const std::uint64_t dim = 1ULL << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (const auto &t : o.terms()) {
        const std::uint64_t x = t.string.x_mask();
        for (std::uint64_t s = 0; s < dim; ++s) {
            m(static_cast<Eigen::Index>(s ^ x), static_cast<Eigen::Index>(s)) +=
                t.coeff * pauli_basis_action(t.string, s);
        }
    }
    return m;
}

/// Real-valued variant; throws DomainError unless has_real_matrix(o).
inline Eigen::MatrixXd observable_matrix_real(const Observable &o, int cap = kDenseQubitCap) {
    const int n = o.num_qubits();
    check_dense_cap(n, cap);
    if (!has_real_matrix(o)) {
        throw DomainError("observable has complex matrix elements");
    }
    const std::uint64_t dim = 1ULL << n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    for (const auto &t : o.terms()) {
        const std::uint64_t x = t.string.x_mask();
        const double base = (t.coeff * i_pow(t.string.y_count())).real();
        const std::uint64_t z = t.string.z_mask();
        for (std::uint64_t s = 0; s < dim; ++s) {
            const double sign = (std::popcount(s & z) & 1) != 0 ? -1.0 : 1.0;
            m(static_cast<Eigen::Index>(s ^ x), static_cast<Eigen::Index>(s)) += base * sign;
        }
    }
    return m;
}

/**
 * Largest |matrix element| of `o` without building the matrix: terms sharing
 * an x-mask fill the same off-diagonal band, which is summed column by column.
 */
inline double observable_max_norm(const Observable &o, int cap = kMaxDenseNormQubits) {
    const int n = o.num_qubits();
    check_dense_cap(n, cap);
    std::map<std::uint64_t, std::vector<const PauliTerm *>> bands;
    for (const auto &t : o.terms()) {
        bands[t.string.x_mask()].push_back(&t);
    }
    const std::uint64_t dim = 1ULL << n;
    double best = 0.0;
    for (const auto &[x, terms] : bands) {
        for (std::uint64_t s = 0; s < dim; ++s) {
            cplx acc(0.0, 0.0);
            for (const PauliTerm *t : terms) {
                acc += t->coeff * pauli_basis_action(t->string, s);
            }
            best = std::max(best, std::abs(acc));
        }
    }
    return best;
}

} // namespace tcilab
