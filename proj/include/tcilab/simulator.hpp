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

/**
 * @file
 * Statevector kernels: the layered variational ansatz
 *   |psi> = prod_m U_gamma(gamma_m) U_beta(beta_m) U_alpha(alpha_m) |+>^L
 * with U_alpha = exp(-i alpha sum X_j), U_beta = exp(-i beta sum Z_j Z_{j+1}),
 * U_gamma = exp(-i gamma sum Z_j), exact Pauli-sum expectation values, basis
 * rotations, and adjoint differentiation of the ansatz.
 *
 * Angles follow the exponent convention above: U_alpha is an X rotation by
 * 2 alpha on every qubit.
 */

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tcilab/errors.hpp"
#include "tcilab/model.hpp"
#include "tcilab/pauli.hpp"
#include "tcilab/state.hpp"

namespace tcilab {

/// Tolerance on the imaginary residue of a Hermitian expectation value.
inline constexpr double kExpectationImagTolerance = 1e-9;

/**
 * Layer angles. Layer 1 carries no alpha (the X rotation leaves |+>^L
 * unchanged), so the total parameter count is 3M - 1.
 * Flat order: alpha_2..alpha_M, beta_1..beta_M, gamma_1..gamma_M.
 */
struct AnsatzParams {
    int layers = 1;
    std::vector<double> alphas; // alpha_2 .. alpha_M
    std::vector<double> betas;
    std::vector<double> gammas;

    static AnsatzParams zeros(int layers) {
        if (layers < 1) {
            throw DomainError("ansatz needs at least one layer");
        }
        return {layers, std::vector<double>(static_cast<std::size_t>(layers - 1), 0.0),
                std::vector<double>(static_cast<std::size_t>(layers), 0.0),
                std::vector<double>(static_cast<std::size_t>(layers), 0.0)};
    }

    static std::size_t count_for(int layers) { return static_cast<std::size_t>(3 * layers - 1); }

    static AnsatzParams from_flat(int layers, std::span<const double> flat) {
        if (layers < 1 || flat.size() != count_for(layers)) {
            throw DimensionError("ansatz with " + std::to_string(layers) + " layers needs " +
                                 std::to_string(3 * layers - 1) + " angles, got " +
                                 std::to_string(flat.size()));
        }
        const auto m = static_cast<std::size_t>(layers);
        AnsatzParams p;
        p.layers = layers;
        p.alphas.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(m - 1));
        p.betas.assign(flat.begin() + static_cast<std::ptrdiff_t>(m - 1),
                       flat.begin() + static_cast<std::ptrdiff_t>(2 * m - 1));
        p.gammas.assign(flat.begin() + static_cast<std::ptrdiff_t>(2 * m - 1), flat.end());
        return p;
    }

    [[nodiscard]] std::vector<double> flat() const {
        std::vector<double> f;
        f.reserve(size());
        f.insert(f.end(), alphas.begin(), alphas.end());
        f.insert(f.end(), betas.begin(), betas.end());
        f.insert(f.end(), gammas.begin(), gammas.end());
        return f;
    }

    [[nodiscard]] std::size_t size() const { return alphas.size() + betas.size() + gammas.size(); }

    void validate() const {
        if (layers < 1 || alphas.size() != static_cast<std::size_t>(layers - 1) ||
            betas.size() != static_cast<std::size_t>(layers) ||
            gammas.size() != static_cast<std::size_t>(layers)) {
            throw DimensionError("AnsatzParams: expected 3M-1 angles for M = " +
                                 std::to_string(layers));
        }
    }

    /// alpha of layer m (1-based); zero for layer 1.
    [[nodiscard]] double alpha(int m) const {
        return m == 1 ? 0.0 : alphas[static_cast<std::size_t>(m - 2)];
    }

    /// This ansatz with one extra layer appended, all new angles zero.
    [[nodiscard]] AnsatzParams extended() const {
        AnsatzParams p = *this;
        ++p.layers;
        p.alphas.push_back(0.0);
        p.betas.push_back(0.0);
        p.gammas.push_back(0.0);
        return p;
    }

    friend bool operator==(const AnsatzParams &, const AnsatzParams &) = default;
};

/// Uniform superposition |+>^L.
inline StateVector init_plus_state(int num_qubits) {
    if (num_qubits < 1) {
        throw DomainError("init_plus_state requires at least one qubit");
    }
    StateVector s(num_qubits);
    const double a = std::pow(2.0, -0.5 * num_qubits);
    for (auto &amp : s.amplitudes()) {
        amp = a;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Single-qubit kernels
// ---------------------------------------------------------------------------

/// exp(-i theta X) on one qubit (1-based).
inline void apply_rx_exponent(StateVector &s, int qubit, double theta) {
    const double c = std::cos(theta);
    const cplx mis(0.0, -std::sin(theta));
    const std::size_t bit = std::size_t{1} << (qubit - 1);
    auto amps = s.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) == 0) {
            const cplx a0 = amps[i];
            const cplx a1 = amps[i | bit];
            amps[i] = c * a0 + mis * a1;
            amps[i | bit] = mis * a0 + c * a1;
        }
    }
}

inline void apply_hadamard(StateVector &s, int qubit) {
    constexpr double r = 0.70710678118654752440;
    const std::size_t bit = std::size_t{1} << (qubit - 1);
    auto amps = s.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) == 0) {
            const cplx a0 = amps[i];
            const cplx a1 = amps[i | bit];
            amps[i] = r * (a0 + a1);
            amps[i | bit] = r * (a0 - a1);
        }
    }
}

/// S^dagger = diag(1, -i).
inline void apply_sdg(StateVector &s, int qubit) {
    const std::size_t bit = std::size_t{1} << (qubit - 1);
    auto amps = s.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) != 0) {
            amps[i] *= cplx(0.0, -1.0);
        }
    }
}

// ---------------------------------------------------------------------------
// Ansatz
// ---------------------------------------------------------------------------

/**
 * The ansatz on a fixed (L, boundary) pair. Precomputes the diagonals of
 * sum Z_j Z_{j+1} and sum Z_j so that U_beta and U_gamma are elementwise
 * phases.
 */
class AnsatzCircuit {
  public:
    AnsatzCircuit(int num_qubits, Boundary bc) : num_qubits_(num_qubits), bc_(bc) {
        if (num_qubits < 1 || num_qubits > kMaxSimulatedQubits) {
            throw DomainError("AnsatzCircuit: qubit count out of range");
        }
        const std::size_t dim = std::size_t{1} << num_qubits;
        zz_.resize(dim);
        zsum_.resize(dim);
        const int bonds = (bc == Boundary::periodic && num_qubits > 1) ? num_qubits : num_qubits - 1;
        for (std::size_t s = 0; s < dim; ++s) {
            double zz = 0.0;
            for (int j = 0; j < bonds; ++j) {
                const int k = (j + 1) % num_qubits;
                const bool differ = (((s >> j) ^ (s >> k)) & 1U) != 0;
                zz += differ ? -1.0 : 1.0;
            }
            zz_[s] = zz;
            zsum_[s] = static_cast<double>(num_qubits - 2 * std::popcount(s));
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] Boundary boundary() const { return bc_; }
    [[nodiscard]] std::span<const double> zz_diagonal() const { return zz_; }
    [[nodiscard]] std::span<const double> z_diagonal() const { return zsum_; }

    void apply_alpha(StateVector &s, double alpha) const {
        if (alpha == 0.0) {
            return;
        }
        for (int q = 1; q <= num_qubits_; ++q) {
            apply_rx_exponent(s, q, alpha);
        }
    }

    void apply_beta(StateVector &s, double beta) const { apply_diagonal(s, zz_, beta); }
    void apply_gamma(StateVector &s, double gamma) const { apply_diagonal(s, zsum_, gamma); }

    /// U_gamma U_beta U_alpha.
    void apply_layer(StateVector &s, double alpha, double beta, double gamma) const {
        check(s);
        apply_alpha(s, alpha);
        apply_beta(s, beta);
        apply_gamma(s, gamma);
    }

    [[nodiscard]] StateVector prepare(const AnsatzParams &p) const {
        p.validate();
        StateVector s = init_plus_state(num_qubits_);
        for (int m = 1; m <= p.layers; ++m) {
            const auto i = static_cast<std::size_t>(m - 1);
            apply_layer(s, p.alpha(m), p.betas[i], p.gammas[i]);
        }
        return s;
    }

    /**
     * Adjoint differentiation. Given the prepared state and a co-state chi,
     * returns d/dtheta of 2 Re <chi|psi(theta)> holding chi fixed, in flat
     * parameter order. Any cost whose differential is 2 Re <chi|dpsi>
     * (energy: chi = H psi; overlap penalties: chi = sum w q <q|psi>) reuses this.
     */
    [[nodiscard]] std::vector<double> gradient(const AnsatzParams &p, StateVector psi,
                                               StateVector chi) const {
        p.validate();
        check(psi);
        check(chi);
        const int M = p.layers;
        std::vector<double> grad(p.size(), 0.0);
        const auto a_off = std::size_t{0};
        const auto b_off = static_cast<std::size_t>(M - 1);
        const auto g_off = static_cast<std::size_t>(2 * M - 1);
        for (int m = M; m >= 1; --m) {
            const auto i = static_cast<std::size_t>(m - 1);
            // gamma
            grad[g_off + i] = 2.0 * diag_matrix_element(chi, psi, zsum_).imag();
            apply_diagonal(psi, zsum_, -p.gammas[i]);
            apply_diagonal(chi, zsum_, -p.gammas[i]);
            // beta
            grad[b_off + i] = 2.0 * diag_matrix_element(chi, psi, zz_).imag();
            apply_diagonal(psi, zz_, -p.betas[i]);
            apply_diagonal(chi, zz_, -p.betas[i]);
            // alpha
            if (m > 1) {
                grad[a_off + i - 1] = 2.0 * x_sum_matrix_element(chi, psi).imag();
                apply_alpha(psi, -p.alpha(m));
                apply_alpha(chi, -p.alpha(m));
            }
        }
        return grad;
    }

  private:
    void check(const StateVector &s) const {
        if (s.num_qubits() != num_qubits_) {
            throw DimensionError("state has " + std::to_string(s.num_qubits()) +
                                 " qubits, circuit has " + std::to_string(num_qubits_));
        }
    }

    static void apply_diagonal(StateVector &s, const std::vector<double> &d, double theta) {
        if (theta == 0.0) {
            return;
        }
        auto amps = s.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] *= std::polar(1.0, -theta * d[i]);
        }
    }

    static cplx diag_matrix_element(const StateVector &bra, const StateVector &ket,
                                    const std::vector<double> &d) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < d.size(); ++i) {
            acc += std::conj(bra[i]) * d[i] * ket[i];
        }
        return acc;
    }

    [[nodiscard]] cplx x_sum_matrix_element(const StateVector &bra, const StateVector &ket) const {
        cplx acc{0.0, 0.0};
        for (int q = 0; q < num_qubits_; ++q) {
            const std::size_t bit = std::size_t{1} << q;
            for (std::size_t i = 0; i < bra.dim(); ++i) {
                acc += std::conj(bra[i]) * ket[i ^ bit];
            }
        }
        return acc;
    }

    int num_qubits_;
    Boundary bc_;
    std::vector<double> zz_;
    std::vector<double> zsum_;
};

/// One ansatz layer U_gamma U_beta U_alpha applied to `state`.
inline StateVector apply_layer(StateVector state, double alpha, double beta, double gamma,
                               Boundary bc) {
    AnsatzCircuit(state.num_qubits(), bc).apply_layer(state, alpha, beta, gamma);
    return state;
}

/// prod_m U(alpha_m, beta_m, gamma_m) |+>^L.
inline StateVector apply_ansatz(const AnsatzParams &params, int num_qubits, Boundary bc) {
    return AnsatzCircuit(num_qubits, bc).prepare(params);
}

// ---------------------------------------------------------------------------
// Pauli sums on statevectors
// ---------------------------------------------------------------------------

/// O |psi> for an arbitrary (not necessarily Hermitian) Pauli sum.
inline StateVector apply_observable(const Observable &o, const StateVector &psi) {
    if (o.num_qubits() != psi.num_qubits()) {
        throw DimensionError("observable acts on " + std::to_string(o.num_qubits()) +
                             " qubits, state has " + std::to_string(psi.num_qubits()));
    }
    std::vector<cplx> out(psi.dim(), cplx{0.0, 0.0});
    for (const auto &t : o.terms()) {
        const std::uint64_t x = t.string.x_mask();
        const std::uint64_t z = t.string.z_mask();
        const cplx base = t.coeff * i_pow(t.string.y_count());
        for (std::size_t s = 0; s < psi.dim(); ++s) {
            const bool odd = (std::popcount(s & z) & 1) != 0;
            out[s ^ x] += (odd ? -base : base) * psi[s];
        }
    }
    return StateVector(psi.num_qubits(), std::move(out));
}

/// <psi|O|psi> without any Hermiticity requirement.
inline cplx expectation_complex(const StateVector &psi, const Observable &o) {
    if (o.num_qubits() != psi.num_qubits()) {
        throw DimensionError("observable/state qubit mismatch");
    }
    cplx acc{0.0, 0.0};
    for (const auto &t : o.terms()) {
        const std::uint64_t x = t.string.x_mask();
        const std::uint64_t z = t.string.z_mask();
        cplx term{0.0, 0.0};
        for (std::size_t s = 0; s < psi.dim(); ++s) {
            const cplx v = std::conj(psi[s ^ x]) * psi[s];
            term += (std::popcount(s & z) & 1) != 0 ? -v : v;
        }
        acc += t.coeff * i_pow(t.string.y_count()) * term;
    }
    return acc;
}

/// <psi|O|psi> for Hermitian O; the imaginary residue is checked and dropped.
inline double expectation(const StateVector &psi, const Observable &o) {
    if (!o.is_hermitian()) {
        throw DomainError("expectation requires a Hermitian observable");
    }
    const cplx e = expectation_complex(psi, o);
    if (std::abs(e.imag()) > kExpectationImagTolerance) {
        throw NumericalError("expectation has imaginary residue " + std::to_string(e.imag()));
    }
    return e.real();
}

// ---------------------------------------------------------------------------
// Measurement bases
// ---------------------------------------------------------------------------

/// Per-qubit measurement letter in {X, Y, Z}; letter q-1 is qubit q.
class MeasurementBasis {
  public:
    MeasurementBasis() = default;

    explicit MeasurementBasis(std::string letters) : letters_(std::move(letters)) {
        for (char c : letters_) {
            if (c != 'X' && c != 'Y' && c != 'Z') {
                throw DomainError(std::string("measurement basis letter must be X, Y or Z, got '") +
                                  c + "'");
            }
        }
    }

    static MeasurementBasis uniform(int num_qubits, char letter) {
        return MeasurementBasis(std::string(static_cast<std::size_t>(num_qubits), letter));
    }

    /// The basis measuring a string's letters, Z on identity positions.
    static MeasurementBasis for_string(const PauliString &p) {
        std::string s(static_cast<std::size_t>(p.length()), 'Z');
        for (int q = 1; q <= p.length(); ++q) {
            if (p.letter(q) != Pauli::I) {
                s[static_cast<std::size_t>(q - 1)] = to_char(p.letter(q));
            }
        }
        return MeasurementBasis(std::move(s));
    }

    [[nodiscard]] int length() const { return static_cast<int>(letters_.size()); }
    [[nodiscard]] char letter(int qubit) const { return letters_.at(static_cast<std::size_t>(qubit - 1)); }
    [[nodiscard]] const std::string &str() const { return letters_; }

    /// True when every non-identity letter of `p` is measured in its own basis.
    [[nodiscard]] bool compatible_with(const PauliString &p) const {
        if (p.length() != length()) {
            return false;
        }
        for (int q = 1; q <= p.length(); ++q) {
            const Pauli l = p.letter(q);
            if (l != Pauli::I && to_char(l) != letter(q)) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const MeasurementBasis &, const MeasurementBasis &) = default;

  private:
    std::string letters_;
};

/**
 * Rotates each qubit so that the requested Pauli's eigenbasis maps onto the
 * computational basis (+1 eigenvalue -> |0>): X by H, Y by H S^dagger.
 */
inline StateVector rotate_to_basis(StateVector s, const MeasurementBasis &basis) {
    if (basis.length() != s.num_qubits()) {
        throw DimensionError("basis length does not match qubit count");
    }
    for (int q = 1; q <= basis.length(); ++q) {
        switch (basis.letter(q)) {
        case 'X': apply_hadamard(s, q); break;
        case 'Y':
            apply_sdg(s, q);
            apply_hadamard(s, q);
            break;
        default: break;
        }
    }
    return s;
}

} // namespace tcilab
