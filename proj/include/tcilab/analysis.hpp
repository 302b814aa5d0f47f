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
 * Criticality diagnostics: supercurrent correlator series and power-law fits,
 * Shannon entropies and mutual information of product-basis distributions,
 * central-charge fits and quadratic 1/L extrapolation.
 */

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tcilab/errors.hpp"
#include "tcilab/exact.hpp"
#include "tcilab/model.hpp"
#include "tcilab/sampling.hpp"
#include "tcilab/simulator.hpp"
#include "tcilab/state.hpp"

namespace tcilab {

// ---------------------------------------------------------------------------
// Correlators
// ---------------------------------------------------------------------------

/**
 * (i/2)(O_j O_k - O_k O_j) for the supercurrent O of `kind`. For disjoint
 * supports the product is anti-Hermitian and this is i O_j O_k; its
 * expectation is -Im <O_j O_k>.
 */
inline Observable hermitian_correlator(CorrelatorKind kind, int j, int k, const ModelSpec &spec) {
    const Observable jk = correlator_observable(kind, j, k, spec);
    const Observable kj = correlator_observable(kind, k, j, spec);
    return (jk - kj) * cplx(0.0, 0.5);
}

struct CorrelatorPoint {
    int separation = 0;
    int j = 0;
    int k = 0;
    double value = 0.0;
    double stderr_ = 0.0; // zero on the exact path
};

struct CorrelatorSeries {
    CorrelatorKind kind = CorrelatorKind::C;
    ModelSpec model;
    std::vector<CorrelatorPoint> points; // increasing separation
};

/// Exact expectation values for k = j_fixed + 1 .. L.
inline CorrelatorSeries correlator_series(const StateVector &ground, CorrelatorKind kind,
                                          const ModelSpec &spec, int j_fixed = 1) {
    spec.validate();
    if (ground.num_qubits() != spec.L) {
        throw DimensionError("correlator_series: state and model sizes differ");
    }
    if (j_fixed < 1 || j_fixed >= spec.L) {
        throw DomainError("correlator_series: j must lie in 1..L-1");
    }
    CorrelatorSeries s{kind, spec, {}};
    for (int k = j_fixed + 1; k <= spec.L; ++k) {
        const double v = expectation(ground, hermitian_correlator(kind, j_fixed, k, spec));
        s.points.push_back({k - j_fixed, j_fixed, k, v, 0.0});
    }
    return s;
}

/// Exact series averaged over all pairs j < k at each separation.
inline CorrelatorSeries correlator_series_averaged(const StateVector &ground, CorrelatorKind kind,
                                                   const ModelSpec &spec) {
    spec.validate();
    CorrelatorSeries s{kind, spec, {}};
    for (int d = 1; d < spec.L; ++d) {
        double acc = 0.0;
        int n = 0;
        for (int j = 1; j + d <= spec.L; ++j) {
            acc += expectation(ground, hermitian_correlator(kind, j, j + d, spec));
            ++n;
        }
        s.points.push_back({d, 0, 0, acc / n, 0.0});
    }
    return s;
}

/**
 * Shot-based series: each Pauli string of the correlator is measured in its
 * own basis with `shots` shots, and stderrs are propagated in quadrature.
 * String i of pair k uses seed `seed + 1000 * k + i`.
 */
inline CorrelatorSeries correlator_series_shots(const StateVector &ground, CorrelatorKind kind,
                                                const ModelSpec &spec, std::uint64_t shots,
                                                std::uint64_t seed, int j_fixed = 1) {
    spec.validate();
    if (j_fixed < 1 || j_fixed >= spec.L) {
        throw DomainError("correlator_series: j must lie in 1..L-1");
    }
    CorrelatorSeries s{kind, spec, {}};
    for (int k = j_fixed + 1; k <= spec.L; ++k) {
        const Observable o = hermitian_correlator(kind, j_fixed, k, spec);
        double mean = 0.0;
        double var = 0.0;
        std::uint64_t i = 0;
        for (const auto &t : o.terms()) {
            const double c = t.coeff.real();
            if (t.string.is_identity()) {
                mean += c;
                continue;
            }
            const CountsTable counts = sample(ground, MeasurementBasis::for_string(t.string), shots,
                                              seed + 1000 * static_cast<std::uint64_t>(k) + i++);
            const PauliEstimate e = estimate_pauli(counts, t.string);
            mean += c * e.mean;
            var += c * c * e.stderr_ * e.stderr_;
        }
        s.points.push_back({k - j_fixed, j_fixed, k, mean, std::sqrt(var)});
    }
    return s;
}

struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double residual = 0.0; // RMS of log-space residuals
    int points = 0;
};

/// Ordinary least squares of ln y on ln x; all y must be positive.
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("fit_power_law: x and y lengths differ");
    }
    if (x.size() < 3) {
        throw DomainError("fit_power_law needs at least 3 points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    std::vector<double> lx(x.size());
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw DomainError("fit_power_law: nonpositive value in fit range");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-14) {
        throw NumericalError("fit_power_law: degenerate abscissas");
    }
    const double slope = (n * sxy - sx * sy) / den;
    const double icept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = ly[i] - (icept + slope * lx[i]);
        rss += r * r;
    }
    return {slope, std::exp(icept), std::sqrt(rss / n), static_cast<int>(x.size())};
}

/**
 * Power law over separations [min_sep, max_sep] (max_sep <= 0 means L - 1),
 * fitted to |value| since the G-type series changes sign.
 */
inline PowerLawFit fit_power_law(const CorrelatorSeries &series, int min_sep = 1, int max_sep = 0) {
    if (max_sep <= 0) {
        max_sep = series.model.L - 1;
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto &p : series.points) {
        if (p.separation >= min_sep && p.separation <= max_sep) {
            x.push_back(p.separation);
            y.push_back(std::abs(p.value));
        }
    }
    return fit_power_law(x, y);
}

// ---------------------------------------------------------------------------
// Shannon entropy and mutual information
// ---------------------------------------------------------------------------

/// -sum p ln p in nats.
inline double shannon_entropy(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) {
        if (p < -1e-12) {
            throw NumericalError("shannon_entropy: negative probability " + std::to_string(p));
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DomainError("shannon_entropy: probabilities sum to " + std::to_string(total));
    }
    double s = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            const double q = p / total;
            s -= q * std::log(q);
        }
    }
    return s;
}

/// Exact probabilities of every configuration in the uniform product basis `letter`.
inline std::vector<double> basis_probabilities(const StateVector &state, char letter) {
    return rotate_to_basis(state, MeasurementBasis::uniform(state.num_qubits(), letter))
        .probabilities();
}

/// Marginal distribution of the qubits in `mask` (bit q - 1 = qubit q).
inline std::vector<double> marginal_probabilities(std::span<const double> probs, int num_qubits,
                                                  std::uint64_t mask) {
    if (probs.size() != (std::size_t{1} << num_qubits)) {
        throw DimensionError("marginal_probabilities: table size is not 2^L");
    }
    if (mask == 0) {
        throw DomainError("marginal_probabilities: empty region");
    }
    const std::uint64_t all = (std::uint64_t{1} << num_qubits) - 1;
    if ((mask & ~all) != 0) {
        throw DomainError("marginal_probabilities: region outside the chain");
    }
    std::vector<int> bits;
    for (int q = 0; q < num_qubits; ++q) {
        if (((mask >> q) & 1U) != 0) {
            bits.push_back(q);
        }
    }
    std::vector<double> out(std::size_t{1} << bits.size(), 0.0);
    if (static_cast<int>(bits.size()) == num_qubits) {
        out.assign(probs.begin(), probs.end());
        return out;
    }
    // Contiguous regions reduce to a shift and mask.
    const bool contiguous = std::popcount(mask >> bits.front()) == static_cast<int>(bits.size()) &&
                            ((mask >> bits.front()) & ((mask >> bits.front()) + 1)) == 0;
    const std::uint64_t width_mask = (std::uint64_t{1} << bits.size()) - 1;
    for (std::size_t s = 0; s < probs.size(); ++s) {
        std::uint64_t a = 0;
        if (contiguous) {
            a = (s >> bits.front()) & width_mask;
        } else {
            for (std::size_t i = 0; i < bits.size(); ++i) {
                a |= ((s >> bits[i]) & 1U) << i;
            }
        }
        out[a] += probs[s];
    }
    return out;
}

inline std::vector<double> marginal_probabilities(const CountsTable &counts, std::uint64_t mask) {
    const std::vector<double> p = counts.distribution();
    return marginal_probabilities(p, counts.num_qubits(), mask);
}

/// I(A, B) = S(A) + S(B) - S(AB) for A = sites 1..ell, B = ell+1..L.
inline double mutual_information(std::span<const double> probs, int ell, int num_qubits) {
    if (ell < 1 || ell >= num_qubits) {
        throw DomainError("mutual_information: split must satisfy 1 <= ell < L");
    }
    const std::uint64_t a = (std::uint64_t{1} << ell) - 1;
    const std::uint64_t all = (std::uint64_t{1} << num_qubits) - 1;
    const double sa = shannon_entropy(marginal_probabilities(probs, num_qubits, a));
    const double sb = shannon_entropy(marginal_probabilities(probs, num_qubits, all & ~a));
    return sa + sb - shannon_entropy(probs);
}

/// Mutual information for every split ell = 1..L-1 (entry ell - 1).
inline std::vector<double> mutual_information_curve(std::span<const double> probs, int num_qubits) {
    std::vector<double> out;
    const double sab = shannon_entropy(probs);
    const std::uint64_t all = (std::uint64_t{1} << num_qubits) - 1;
    for (int ell = 1; ell < num_qubits; ++ell) {
        const std::uint64_t a = (std::uint64_t{1} << ell) - 1;
        out.push_back(shannon_entropy(marginal_probabilities(probs, num_qubits, a)) +
                      shannon_entropy(marginal_probabilities(probs, num_qubits, all & ~a)) - sab);
    }
    return out;
}

/// Entanglement entropy S(ell) of a pure state for ell = 1..L-1 (entry ell - 1).
inline std::vector<double> entanglement_curve(const StateVector &state) {
    std::vector<double> out;
    for (int ell = 1; ell < state.num_qubits(); ++ell) {
        out.push_back(bipartite_entropy(state, ell));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Central charge
// ---------------------------------------------------------------------------

enum class CentralChargeSource { shannon_x, shannon_z, entanglement, other };

struct CentralChargeFit {
    double c = 0.0;
    double intercept = 0.0;
    int L = 0;
    int ell_min = 1;
    int ell_max = 0;
    CentralChargeSource source = CentralChargeSource::other;
};

/// ln((L/pi) sin(pi ell / L)).
inline double log_chord(int ell, int L) {
    return std::log(L / std::numbers::pi * std::sin(std::numbers::pi * ell / L));
}

namespace detail {

inline CentralChargeFit fit_chord(std::span<const double> values, int L, double prefactor,
                                  int ell_min, int ell_max) {
    if (static_cast<int>(values.size()) != L - 1) {
        throw DimensionError("central-charge fit expects one value per ell = 1..L-1");
    }
    if (ell_max <= 0) {
        ell_max = L - ell_min;
    }
    if (ell_min < 1 || ell_max > L - 1 || ell_max - ell_min + 1 < 3) {
        throw DomainError("central-charge fit needs at least 3 splits within 1..L-1");
    }
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    const auto n = static_cast<double>(ell_max - ell_min + 1);
    for (int ell = ell_min; ell <= ell_max; ++ell) {
        const double x = prefactor * log_chord(ell, L);
        const double y = values[static_cast<std::size_t>(ell - 1)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) < 1e-14) {
        throw NumericalError("central-charge fit: degenerate abscissas");
    }
    CentralChargeFit f;
    f.c = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.c * sx) / n;
    f.L = L;
    f.ell_min = ell_min;
    f.ell_max = ell_max;
    return f;
}

} // namespace detail

/**
 * I(ell) = (c/4) ln((L/pi) sin(pi ell/L)) + B over ell in [ell_min, ell_max]
 * (ell_max <= 0 means L - ell_min). `values[ell - 1]` holds I(ell).
 */
inline CentralChargeFit fit_central_charge(std::span<const double> values, int L, int ell_min = 1,
                                           int ell_max = 0) {
    return detail::fit_chord(values, L, 0.25, ell_min, ell_max);
}

/// S(ell) = (c/3) ln((L/pi) sin(pi ell/L)) + B, same conventions.
inline CentralChargeFit fit_central_charge_ee(std::span<const double> values, int L,
                                              int ell_min = 1, int ell_max = 0) {
    CentralChargeFit f = detail::fit_chord(values, L, 1.0 / 3.0, ell_min, ell_max);
    f.source = CentralChargeSource::entanglement;
    return f;
}

struct QuadraticExtrapolation {
    double c_inf = 0.0;
    double a1 = 0.0; // coefficient of 1/L
    double a2 = 0.0; // coefficient of 1/L^2
};

/// Least squares of c(L) on {1, 1/L, 1/L^2}.
inline QuadraticExtrapolation extrapolate_quadratic(const std::vector<std::pair<int, double>> &series) {
    if (series.size() < 3) {
        throw DomainError("extrapolate_quadratic needs at least 3 sizes");
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(series.size()), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(series.size()));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double inv = 1.0 / series[i].first;
        const auto r = static_cast<Eigen::Index>(i);
        a(r, 0) = 1.0;
        a(r, 1) = inv;
        a(r, 2) = inv * inv;
        b(r) = series[i].second;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) {
        throw NumericalError("extrapolate_quadratic: degenerate design matrix");
    }
    const Eigen::Vector3d x = qr.solve(b);
    return {x(0), x(1), x(2)};
}

} // namespace tcilab
