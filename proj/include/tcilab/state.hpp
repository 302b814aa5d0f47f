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

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tcilab/errors.hpp"
#include "tcilab/pauli.hpp"

namespace tcilab {

/// Upper bound on simulated qubits; 2^26 amplitudes is 1 GiB.
inline constexpr int kMaxSimulatedQubits = 26;

/**
 * 2^L complex amplitudes. Basis index bit (q - 1) holds qubit q, with bit
 * value 1 meaning the Z = -1 eigenstate.
 */
class StateVector {
  public:
    StateVector() = default;

    /// |0...0> on `num_qubits` qubits.
    explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
        check_size(num_qubits);
        amps_.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
        amps_[0] = 1.0;
    }

    StateVector(int num_qubits, std::vector<cplx> amplitudes)
        : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
        check_size(num_qubits);
        if (amps_.size() != (std::size_t{1} << num_qubits)) {
            throw DimensionError("StateVector: expected 2^" + std::to_string(num_qubits) +
                                 " amplitudes, got " + std::to_string(amps_.size()));
        }
    }

    static StateVector basis_state(int num_qubits, std::uint64_t index) {
        StateVector s(num_qubits);
        if (index >= s.dim()) {
            throw DomainError("basis index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }
    cplx &operator[](std::size_t i) { return amps_[i]; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const {
        double n = 0.0;
        for (const auto &a : amps_) {
            n += std::norm(a);
        }
        return n;
    }

    void normalize() {
        const double n = std::sqrt(norm_squared());
        if (n == 0.0) {
            throw NumericalError("cannot normalize the zero vector");
        }
        for (auto &a : amps_) {
            a /= n;
        }
    }

    /// <this|other>
    [[nodiscard]] cplx inner(const StateVector &other) const {
        check_same(other);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            acc += std::conj(amps_[i]) * other.amps_[i];
        }
        return acc;
    }

    /// Probabilities |amp|^2 in basis-index order.
    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

    void check_same(const StateVector &other) const {
        if (other.num_qubits_ != num_qubits_) {
            throw DimensionError("StateVector qubit counts differ: " + std::to_string(num_qubits_) +
                                 " vs " + std::to_string(other.num_qubits_));
        }
    }

  private:
    static void check_size(int n) {
        if (n < 0 || n > kMaxSimulatedQubits) {
            throw DomainError("StateVector qubit count out of range: " + std::to_string(n));
        }
    }

    int num_qubits_ = 0;
    std::vector<cplx> amps_{cplx{1.0, 0.0}};
};

/// |<a|b>|, the overlap magnitude used as fidelity throughout.
inline double fidelity(const StateVector &a, const StateVector &b) {
    return std::abs(a.inner(b));
}

} // namespace tcilab
