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
 * Operators of the supersymmetric tricritical Ising chain: Ising and three-spin terms, the
 * supercharges Q+/Q-, the lattice supercurrents psi_j / G_j and their
 * two-point correlator operators.
 */

#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcilab/errors.hpp"
#include "tcilab/pauli.hpp"

namespace tcilab {

enum class Boundary { open, periodic };

inline std::string_view to_string(Boundary bc) {
    return bc == Boundary::open ? "open" : "periodic";
}

inline Boundary boundary_from_string(std::string_view s) {
    if (s == "open" || s == "obc") {
        return Boundary::open;
    }
    if (s == "periodic" || s == "pbc") {
        return Boundary::periodic;
    }
    throw DomainError("unknown boundary condition '" + std::string(s) + "'");
}

/// lambda_3 / lambda_I at the tricritical point.
inline constexpr double kTricriticalRatio = 0.856;

struct ModelSpec {
    int L = 8;
    double lambda_i = 1.0;
    double lambda_3 = kTricriticalRatio;
    Boundary bc = Boundary::open;

    static ModelSpec tricritical(int L, Boundary bc, double lambda_i = 1.0) {
        return {L, lambda_i, kTricriticalRatio * lambda_i, bc};
    }

    void validate() const {
        if (L < 2 || L > PauliString::kMaxQubits) {
            throw DomainError("ModelSpec: L must be in [2, 64], got " + std::to_string(L));
        }
        if (!std::isfinite(lambda_i) || !std::isfinite(lambda_3)) {
            throw DomainError("ModelSpec: couplings must be finite");
        }
    }

    friend bool operator==(const ModelSpec &, const ModelSpec &) = default;
};

/// Presets named "tci-open-<L>" / "tci-pbc-<L>" (e.g. "tci-open-8", "tci-pbc-13").
inline std::optional<ModelSpec> model_preset(std::string_view name) {
    auto parse = [&](std::string_view prefix, Boundary bc) -> std::optional<ModelSpec> {
        if (name.substr(0, prefix.size()) != prefix) {
            return std::nullopt;
        }
        const std::string_view digits = name.substr(prefix.size());
        int L = 0;
        auto res = std::from_chars(digits.data(), digits.data() + digits.size(), L);
        if (digits.empty() || res.ec != std::errc{} || res.ptr != digits.data() + digits.size() ||
            L < 2) {
            return std::nullopt;
        }
        return ModelSpec::tricritical(L, bc);
    };
    if (auto m = parse("tci-open-", Boundary::open)) {
        return m;
    }
    return parse("tci-pbc-", Boundary::periodic);
}

/// E_0 = L (lambda_I^2 + lambda_3^2) / lambda_3.
inline double energy_shift(const ModelSpec &spec) {
    if (spec.lambda_3 <= 0.0) {
        throw DomainError("energy_shift requires lambda_3 > 0");
    }
    return spec.L * (spec.lambda_i * spec.lambda_i + spec.lambda_3 * spec.lambda_3) / spec.lambda_3;
}

namespace detail {

inline PauliString letters_at(int L, std::initializer_list<std::pair<int, Pauli>> sites) {
    PauliString p(L);
    for (auto [q, letter] : sites) {
        p.set(q, letter);
    }
    return p;
}

/// Site q + offset on the chain, or 0 when it falls off an open chain.
inline int site_offset(int q, int offset, int L, Boundary bc) {
    const int s = q + offset;
    if (s >= 1 && s <= L) {
        return s;
    }
    if (bc == Boundary::open) {
        return 0;
    }
    return ((s - 1) % L + L) % L + 1;
}

/// Majorana index a on the 2L-site Majorana ring, or 0 when dropped (open chain).
inline int majorana_site(int a, int L, Boundary bc) {
    if (a >= 1 && a <= 2 * L) {
        return a;
    }
    if (bc == Boundary::open) {
        return 0;
    }
    return ((a - 1) % (2 * L) + 2 * L) % (2 * L) + 1;
}

} // namespace detail

/// H_I = -sum_j (X_j + Z_j Z_{j+1}); the open chain drops the (L,1) bond.
inline Observable build_ising(const ModelSpec &spec) {
    spec.validate();
    const int L = spec.L;
    std::vector<PauliTerm> terms;
    for (int j = 1; j <= L; ++j) {
        terms.emplace_back(-1.0, detail::letters_at(L, {{j, Pauli::X}}));
        const int k = detail::site_offset(j, 1, L, spec.bc);
        if (k != 0) {
            terms.emplace_back(-1.0, detail::letters_at(L, {{j, Pauli::Z}, {k, Pauli::Z}}));
        }
    }
    return Observable(L, std::move(terms));
}

/// H_3 = sum_j (X_j Z_{j+1} Z_{j+2} + Z_j Z_{j+1} X_{j+2}); open chains keep j <= L-2.
inline Observable build_h3(const ModelSpec &spec) {
    spec.validate();
    const int L = spec.L;
    if (L < 3) {
        throw DomainError("build_h3 requires L >= 3");
    }
    std::vector<PauliTerm> terms;
    for (int j = 1; j <= L; ++j) {
        const int k1 = detail::site_offset(j, 1, L, spec.bc);
        const int k2 = detail::site_offset(j, 2, L, spec.bc);
        if (k1 == 0 || k2 == 0) {
            continue;
        }
        terms.emplace_back(1.0, detail::letters_at(L, {{j, Pauli::X}, {k1, Pauli::Z}, {k2, Pauli::Z}}));
        terms.emplace_back(1.0, detail::letters_at(L, {{j, Pauli::Z}, {k1, Pauli::Z}, {k2, Pauli::X}}));
    }
    return Observable(L, std::move(terms));
}

/// 2 lambda_I H_I + lambda_3 H_3, plus E_0 * Id when `include_shift`.
inline Observable build_hamiltonian(const ModelSpec &spec, bool include_shift = false) {
    Observable h = build_ising(spec) * cplx(2.0 * spec.lambda_i);
    if (spec.lambda_3 != 0.0) {
        h += build_h3(spec) * cplx(spec.lambda_3);
    }
    if (include_shift) {
        h += Observable::identity(spec.L, energy_shift(spec));
    }
    return h;
}

/// i sum_a gamma_a gamma_{a+1}; Majorana indices wrap mod 2L without a parity twist.
inline Observable build_ising_majorana(const ModelSpec &spec) {
    spec.validate();
    const int L = spec.L;
    std::vector<PauliTerm> terms;
    for (int a = 1; a <= 2 * L; ++a) {
        const int b = detail::majorana_site(a + 1, L, spec.bc);
        if (b != 0) {
            terms.push_back(majorana_monomial({a, b}, cplx(0.0, 1.0), L));
        }
    }
    return Observable(L, std::move(terms));
}

/// -sum_a gamma_{a-2} gamma_{a-1} gamma_{a+1} gamma_{a+2}, same wrapping rule.
inline Observable build_h3_majorana(const ModelSpec &spec) {
    spec.validate();
    const int L = spec.L;
    std::vector<PauliTerm> terms;
    for (int a = 1; a <= 2 * L; ++a) {
        const int i0 = detail::majorana_site(a - 2, L, spec.bc);
        const int i1 = detail::majorana_site(a - 1, L, spec.bc);
        const int i2 = detail::majorana_site(a + 1, L, spec.bc);
        const int i3 = detail::majorana_site(a + 2, L, spec.bc);
        if (i0 == 0 || i1 == 0 || i2 == 0 || i3 == 0) {
            continue;
        }
        terms.push_back(majorana_monomial({i0, i1, i2, i3}, -1.0, L));
    }
    return Observable(L, std::move(terms));
}

enum class Sign { plus, minus };

/**
 * Q^{+-} = 1/(2 sqrt(lambda_3)) sum_a (+-1)^a (lambda_I gamma_a +- i lambda_3 gamma_{a-1} gamma_a gamma_{a+1}).
 * Periodic chains only; indices a-1, a+1 wrap around the 2L Majorana ring.
 */
inline Observable build_supercharge(Sign sign, const ModelSpec &spec) {
    spec.validate();
    if (spec.lambda_3 <= 0.0) {
        throw DomainError("build_supercharge requires lambda_3 > 0");
    }
    if (spec.bc != Boundary::periodic) {
        throw DomainError("build_supercharge is only defined for periodic chains");
    }
    const int L = spec.L;
    const double s = sign == Sign::plus ? 1.0 : -1.0;
    const double norm = 1.0 / (2.0 * std::sqrt(spec.lambda_3));
    std::vector<PauliTerm> terms;
    for (int a = 1; a <= 2 * L; ++a) {
        const double pa = (sign == Sign::minus && a % 2 == 1) ? -1.0 : 1.0;
        terms.push_back(majorana_monomial({a}, pa * norm * spec.lambda_i, L));
        const int prev = detail::majorana_site(a - 1, L, spec.bc);
        const int next = detail::majorana_site(a + 1, L, spec.bc);
        terms.push_back(
            majorana_monomial({prev, a, next}, cplx(0.0, pa * norm * s * spec.lambda_3), L));
    }
    return Observable(L, std::move(terms));
}

enum class CurrentKind { psi, G };

/**
 * psi_j = lambda_I (g_{2j-1} - g_{2j}) + i lambda_3 (g_{2j-2} - g_{2j+1}) g_{2j-1} g_{2j}
 * G_j   = lambda_I (g_{2j-1} + g_{2j}) + i lambda_3 (g_{2j-2} + g_{2j+1}) g_{2j-1} g_{2j}
 *
 * Periodic chains wrap Majorana indices mod 2L; open chains drop terms whose
 * Majorana index falls outside 1..2L.
 */
inline Observable build_supercurrent(CurrentKind kind, int j, const ModelSpec &spec) {
    spec.validate();
    const int L = spec.L;
    if (j < 1 || j > L) {
        throw DomainError("supercurrent site " + std::to_string(j) + " outside 1.." +
                          std::to_string(L));
    }
    const double s = kind == CurrentKind::psi ? -1.0 : 1.0;
    std::vector<PauliTerm> terms;
    terms.push_back(majorana_monomial({2 * j - 1}, spec.lambda_i, L));
    terms.push_back(majorana_monomial({2 * j}, s * spec.lambda_i, L));
    const cplx il3(0.0, spec.lambda_3);
    if (const int lo = detail::majorana_site(2 * j - 2, L, spec.bc); lo != 0) {
        terms.push_back(majorana_monomial({lo, 2 * j - 1, 2 * j}, il3, L));
    }
    if (const int hi = detail::majorana_site(2 * j + 1, L, spec.bc); hi != 0) {
        terms.push_back(majorana_monomial({hi, 2 * j - 1, 2 * j}, s * il3, L));
    }
    return Observable(L, std::move(terms));
}

enum class CorrelatorKind { C, D };

inline CurrentKind current_for(CorrelatorKind kind) {
    return kind == CorrelatorKind::C ? CurrentKind::psi : CurrentKind::G;
}

/// The operator product psi_j psi_k (kind C) or G_j G_k (kind D), j != k.
inline Observable correlator_observable(CorrelatorKind kind, int j, int k, const ModelSpec &spec) {
    if (j == k) {
        throw DomainError("correlator_observable requires j != k");
    }
    const CurrentKind c = current_for(kind);
    return build_supercurrent(c, j, spec) * build_supercurrent(c, k, spec);
}

/// Spin-flip operator F = prod_j X_j.
inline Observable spin_flip(int L) {
    PauliString p(L);
    for (int q = 1; q <= L; ++q) {
        p.set(q, Pauli::X);
    }
    return Observable::single({1.0, p});
}

} // namespace tcilab
