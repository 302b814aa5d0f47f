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
 * Dense exact diagonalization: lowest eigenpairs, spin-flip parity sectors,
 * gap ratios, reduced density matrices and entanglement entropy.
 */

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcilab/dense.hpp"
#include "tcilab/errors.hpp"
#include "tcilab/linalg.hpp"
#include "tcilab/pauli.hpp"
#include "tcilab/simulator.hpp"
#include "tcilab/state.hpp"

namespace tcilab {

/// Residual bound enforced on every returned eigenpair.
inline constexpr double kEigenResidualTolerance = 1e-8;

enum class Sector { all, even, odd };

inline std::string_view to_string(Sector s) {
    switch (s) {
    case Sector::all:
        return "all";
    case Sector::even:
        return "parity+";
    case Sector::odd:
        return "parity-";
    }
    return "?";
}

struct SpectrumSlice {
    std::vector<double> energies; // ascending
    std::vector<StateVector> states;
    Sector sector = Sector::all;

    [[nodiscard]] std::size_t size() const { return energies.size(); }
};

namespace detail {

inline void check_residuals(const Observable &h, const SpectrumSlice &slice) {
    for (std::size_t k = 0; k < slice.size(); ++k) {
        const StateVector hv = apply_observable(h, slice.states[k]);
        double r = 0.0;
        for (std::size_t i = 0; i < hv.dim(); ++i) {
            r += std::norm(hv[i] - slice.energies[k] * slice.states[k][i]);
        }
        r = std::sqrt(r);
        if (!(r < kEigenResidualTolerance)) {
            throw NumericalError("eigenpair residual " + std::to_string(r) + " above tolerance");
        }
    }
}

inline StateVector to_state(int num_qubits, const auto &column) {
    std::vector<cplx> amps(static_cast<std::size_t>(column.size()));
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        amps[static_cast<std::size_t>(i)] = cplx(column(i));
    }
    return StateVector(num_qubits, std::move(amps));
}

template <typename Scalar>
SpectrumSlice solve_matrix(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h, int count,
                           Sector sector, auto &&lift) {
    auto pairs = linalg::lowest_eigenpairs(h, count);
    SpectrumSlice out;
    out.sector = sector;
    for (Eigen::Index k = 0; k < pairs.values.size(); ++k) {
        out.energies.push_back(pairs.values(k));
        out.states.push_back(lift(pairs.vectors.col(k)));
    }
    return out;
}

} // namespace detail

/**
 * Lowest `count` eigenpairs of a Hermitian observable by dense
 * diagonalization. Real-valued Hamiltonians take the real symmetric path.
 */
inline SpectrumSlice eigensolve(const Observable &h, int count, int cap = kDenseQubitCap) {
    check_dense_cap(h.num_qubits(), cap);
    if (!h.is_hermitian()) {
        throw DomainError("eigensolve requires a Hermitian observable");
    }
    const int n = h.num_qubits();
    auto lift = [n](const auto &col) { return detail::to_state(n, col); };
    SpectrumSlice out =
        has_real_matrix(h)
            ? detail::solve_matrix<double>(observable_matrix_real(h, cap), count, Sector::all, lift)
            : detail::solve_matrix<cplx>(observable_matrix(h, cap), count, Sector::all, lift);
    detail::check_residuals(h, out);
    return out;
}

/// True when every term commutes with F = prod X (an even number of Z/Y letters).
inline bool commutes_with_spin_flip(const Observable &h) {
    for (const auto &t : h.terms()) {
        if ((std::popcount(t.string.z_mask()) & 1) != 0) {
            return false;
        }
    }
    return true;
}

namespace detail {

/**
 * Matrix of h in the sector basis (|r> + f |~r>)/sqrt2, r ranging over indices
 * with the top qubit clear and ~r the all-flipped index. For [h, F] = 0,
 *   <s_f|h|r_f> = <s|h|r> + f <s|h|~r>.
 */
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sector_matrix(const Observable &h, int f) {
    const int n = h.num_qubits();
    const std::uint64_t half = 1ULL << (n - 1);
    const std::uint64_t all = (half << 1) - 1;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Eigen::Index>(half),
                                                                    static_cast<Eigen::Index>(half));
    for (const auto &t : h.terms()) {
        const std::uint64_t x = t.string.x_mask();
        for (std::uint64_t r = 0; r < half; ++r) {
            for (int flip = 0; flip < 2; ++flip) {
                const std::uint64_t u = flip != 0 ? (r ^ all) : r;
                const std::uint64_t s = u ^ x;
                if ((s & half) != 0) {
                    continue;
                }
                cplx v = t.coeff * pauli_basis_action(t.string, u);
                if (flip != 0 && f < 0) {
                    v = -v;
                }
                if constexpr (std::is_same_v<Scalar, double>) {
                    m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) += v.real();
                } else {
                    m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) += v;
                }
            }
        }
    }
    return m;
}

inline StateVector lift_sector(int n, int f, const auto &column) {
    const std::uint64_t half = 1ULL << (n - 1);
    const std::uint64_t all = (half << 1) - 1;
    std::vector<cplx> amps(half << 1, cplx{0.0, 0.0});
    const double inv = 1.0 / std::sqrt(2.0);
    for (std::uint64_t r = 0; r < half; ++r) {
        const cplx c = cplx(column(static_cast<Eigen::Index>(r))) * inv;
        amps[r] = c;
        amps[r ^ all] = f > 0 ? c : -c;
    }
    return StateVector(n, std::move(amps));
}

} // namespace detail

/**
 * Lowest `count` levels in each spin-flip sector, returned as
 * (parity +, parity -). Requires [h, F] = 0.
 */
inline std::pair<SpectrumSlice, SpectrumSlice> parity_resolved(const Observable &h, int count = 2,
                                                               int cap = kDenseQubitCap) {
    check_dense_cap(h.num_qubits(), cap);
    if (!h.is_hermitian()) {
        throw DomainError("parity_resolved requires a Hermitian observable");
    }
    if (!commutes_with_spin_flip(h)) {
        throw DomainError("parity_resolved: observable does not commute with prod X");
    }
    const int n = h.num_qubits();
    if (n < 1) {
        throw DomainError("parity_resolved needs at least one qubit");
    }
    auto solve = [&](int f) {
        const Sector sector = f > 0 ? Sector::even : Sector::odd;
        auto lift = [n, f](const auto &col) { return detail::lift_sector(n, f, col); };
        if (has_real_matrix(h)) {
            return detail::solve_matrix<double>(detail::sector_matrix<double>(h, f), count,
                                                sector, lift);
        }
        return detail::solve_matrix<cplx>(detail::sector_matrix<cplx>(h, f), count, sector, lift);
    };
    std::pair<SpectrumSlice, SpectrumSlice> out{solve(+1), solve(-1)};
    detail::check_residuals(h, out.first);
    detail::check_residuals(h, out.second);
    return out;
}

struct GapRatios {
    double r2 = 0.0;
    double r3 = 0.0;
    int L = 0;
};

/// Thermodynamic-limit values of the two ratios.
inline constexpr double kR2Limit = 0.375;
inline constexpr double kR3Limit = 4.374;

/**
 * r2 = (P0- - P0+)/(P1+ - P0+), r3 = (P1- - P0+)/(P1+ - P0+), from the two
 * lowest levels of each parity sector.
 */
inline GapRatios gap_ratios(const SpectrumSlice &even, const SpectrumSlice &odd, int L = 0) {
    if (even.size() < 2 || odd.size() < 2) {
        throw DomainError("gap_ratios needs two levels per sector");
    }
    const double p0p = even.energies[0];
    const double p1p = even.energies[1];
    const double p0m = odd.energies[0];
    const double p1m = odd.energies[1];
    const double den = p1p - p0p;
    if (std::abs(den) < 1e-12) {
        throw NumericalError("gap_ratios: degenerate denominator P1+ == P0+");
    }
    return {(p0m - p0p) / den, (p1m - p0p) / den, L};
}

struct CftPrimary {
    std::string_view name;
    double dimension;
    int parity;
};

/// Primaries of the periodic sector with scaling dimensions and spin-flip parity.
inline constexpr std::array<CftPrimary, 6> kCftPrimaries{{
    {"1", 0.0, +1},
    {"sigma", 3.0 / 40.0, -1},
    {"epsilon", 1.0 / 5.0, +1},
    {"sigma'", 7.0 / 8.0, -1},
    {"epsilon'", 6.0 / 5.0, +1},
    {"epsilon''", 3.0, +1},
}};

// ---------------------------------------------------------------------------
// Reduced density matrices and entropy
// ---------------------------------------------------------------------------

/// Reduced density matrix on the qubits set in `mask` (bit q - 1 = qubit q).
inline Eigen::MatrixXcd reduced_density_mask(const StateVector &state, std::uint64_t mask) {
    const int n = state.num_qubits();
    const std::uint64_t all = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    if ((mask & ~all) != 0) {
        throw DomainError("reduced_density: region outside the chain");
    }
    std::vector<int> inside;
    std::vector<int> outside;
    for (int q = 0; q < n; ++q) {
        (((mask >> q) & 1U) != 0 ? inside : outside).push_back(q);
    }
    const auto da = static_cast<Eigen::Index>(1ULL << inside.size());
    const auto db = static_cast<Eigen::Index>(1ULL << outside.size());
    Eigen::MatrixXcd m(da, db);
    for (std::uint64_t s = 0; s < state.dim(); ++s) {
        std::uint64_t a = 0;
        std::uint64_t b = 0;
        for (std::size_t i = 0; i < inside.size(); ++i) {
            a |= ((s >> inside[i]) & 1U) << i;
        }
        for (std::size_t i = 0; i < outside.size(); ++i) {
            b |= ((s >> outside[i]) & 1U) << i;
        }
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = state[s];
    }
    return m * m.adjoint();
}

/// Bitmask for sites first..last (1-based, inclusive).
inline std::uint64_t site_range_mask(int first, int last, int num_qubits) {
    if (first < 1 || last > num_qubits || first > last + 1) {
        throw DomainError("site range " + std::to_string(first) + ".." + std::to_string(last) +
                          " outside 1.." + std::to_string(num_qubits));
    }
    std::uint64_t m = 0;
    for (int q = first; q <= last; ++q) {
        m |= 1ULL << (q - 1);
    }
    return m;
}

/// rho_A = Tr_B |psi><psi| for the contiguous region first..last.
inline Eigen::MatrixXcd reduced_density(const StateVector &state, int first, int last) {
    return reduced_density_mask(state, site_range_mask(first, last, state.num_qubits()));
}

/// -sum lambda ln lambda over the spectrum of a density matrix.
inline double entanglement_entropy(const Eigen::MatrixXcd &rho) {
    if (rho.rows() != rho.cols()) {
        throw DimensionError("density matrix must be square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l < -1e-10) {
            throw NumericalError("density matrix has eigenvalue " + std::to_string(l));
        }
        if (l > 0.0) {
            s -= l * std::log(l);
        }
    }
    return s;
}

/// Entropy of the first `ell` sites of a pure state, using the smaller side.
inline double bipartite_entropy(const StateVector &state, int ell) {
    const int n = state.num_qubits();
    const std::uint64_t left = site_range_mask(1, ell, n);
    const std::uint64_t all = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    const std::uint64_t side = 2 * ell <= n ? left : (all & ~left);
    return entanglement_entropy(reduced_density_mask(state, side));
}

} // namespace tcilab
