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
 * Shot sampling in product bases, Pauli-string estimators, and a per-qubit
 * readout-error model with tensor-product confusion-matrix mitigation.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tcilab/errors.hpp"
#include "tcilab/pauli.hpp"
#include "tcilab/rng.hpp"
#include "tcilab/simulator.hpp"
#include "tcilab/state.hpp"

namespace tcilab {

/// Shot record. Keys are basis indices: bit (q - 1) is the outcome on qubit q.
struct CountsTable {
    MeasurementBasis basis;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t seed = 0;

    [[nodiscard]] int num_qubits() const { return basis.length(); }

    [[nodiscard]] std::uint64_t total() const {
        std::uint64_t n = 0;
        for (const auto &[k, c] : counts) {
            n += c;
        }
        return n;
    }

    /// Empirical distribution as a dense vector of length 2^L.
    [[nodiscard]] std::vector<double> distribution() const {
        if (num_qubits() > kMaxSimulatedQubits) {
            throw CapExceeded("distribution too large");
        }
        std::vector<double> p(std::size_t{1} << num_qubits(), 0.0);
        for (const auto &[k, c] : counts) {
            p[k] = static_cast<double>(c) / static_cast<double>(shots);
        }
        return p;
    }

    friend bool operator==(const CountsTable &, const CountsTable &) = default;
};

/// Bitstring text for a basis index; character q - 1 is qubit q.
inline std::string bitstring(std::uint64_t index, int num_qubits) {
    std::string s(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q) {
        if (((index >> q) & 1U) != 0) {
            s[static_cast<std::size_t>(q)] = '1';
        }
    }
    return s;
}

inline std::uint64_t parse_bitstring(std::string_view s) {
    std::uint64_t v = 0;
    for (std::size_t q = 0; q < s.size(); ++q) {
        if (s[q] == '1') {
            v |= 1ULL << q;
        } else if (s[q] != '0') {
            throw DomainError("bitstring must contain only 0/1");
        }
    }
    return v;
}

/**
 * Rotates into `basis`, then draws `shots` outcomes from |amplitude|^2 by
 * inverse-CDF lookup. Shot k consumes counter k of stream 0 under `seed`, so
 * the table is a pure function of (state, basis, shots, seed).
 */
inline CountsTable sample(const StateVector &state, const MeasurementBasis &basis,
                          std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw DomainError("sample requires at least one shot");
    }
    const StateVector rotated = rotate_to_basis(state, basis);
    std::vector<double> cdf(rotated.dim());
    double acc = 0.0;
    for (std::size_t i = 0; i < rotated.dim(); ++i) {
        acc += std::norm(rotated[i]);
        cdf[i] = acc;
    }
    CountsTable table{basis, shots, {}, seed};
    CounterRng rng(seed);
    std::vector<std::uint64_t> dense(rotated.dim(), 0);
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        ++dense[static_cast<std::size_t>(it - cdf.begin())];
    }
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0) {
            table.counts.emplace(i, dense[i]);
        }
    }
    return table;
}

struct PauliEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Mean of prod(+-1) over the string's support and its standard error.
inline PauliEstimate estimate_pauli(const CountsTable &counts, const PauliString &string) {
    if (!counts.basis.compatible_with(string)) {
        throw DomainError("estimate_pauli: basis " + counts.basis.str() +
                          " cannot measure " + string.str());
    }
    if (counts.shots == 0) {
        throw DomainError("estimate_pauli: empty counts table");
    }
    const std::uint64_t support = string.support();
    double sum = 0.0;
    for (const auto &[k, c] : counts.counts) {
        const double v = (std::popcount(k & support) & 1) != 0 ? -1.0 : 1.0;
        sum += v * static_cast<double>(c);
    }
    const auto n = static_cast<double>(counts.shots);
    const double mean = sum / n;
    // Outcomes are +-1, so sum (v - mean)^2 = n (1 - mean^2).
    double var = 0.0;
    if (counts.shots > 1) {
        var = std::max(0.0, n * (1.0 - mean * mean) / (n - 1.0));
    }
    return {mean, std::sqrt(var / n)};
}

/// Expectation of a Z-type parity over a (quasi-)probability vector.
inline double parity_expectation(std::span<const double> probs, std::uint64_t support) {
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += (std::popcount(k & support) & 1) != 0 ? -probs[k] : probs[k];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Readout errors
// ---------------------------------------------------------------------------

/// p01 = Pr(read 0 | prepared 1), p10 = Pr(read 1 | prepared 0).
struct QubitReadout {
    double p01 = 0.0;
    double p10 = 0.0;
    std::string label; // device qubit name, metadata only
};

struct ReadoutModel {
    std::vector<QubitReadout> qubits;

    [[nodiscard]] int num_qubits() const { return static_cast<int>(qubits.size()); }

    static ReadoutModel uniform(int num_qubits, double p01, double p10) {
        ReadoutModel m;
        m.qubits.assign(static_cast<std::size_t>(num_qubits), QubitReadout{p01, p10, {}});
        m.validate();
        return m;
    }

    void validate() const {
        for (const auto &q : qubits) {
            if (!(q.p01 >= 0.0 && q.p01 <= 1.0 && q.p10 >= 0.0 && q.p10 <= 1.0)) {
                throw DomainError("readout probabilities must lie in [0, 1]");
            }
        }
    }

    /// The first `n` qubits of this model.
    [[nodiscard]] ReadoutModel truncated(int n) const {
        if (n > num_qubits()) {
            throw DimensionError("readout model has only " + std::to_string(num_qubits()) +
                                 " qubits");
        }
        ReadoutModel m;
        m.qubits.assign(qubits.begin(), qubits.begin() + n);
        return m;
    }
};

/**
 * Loads a calibration CSV with header columns including P01 and P10 (e.g.
 * "qubit,T1,T2,f,a,RE,P01,P10"). Rows map to logical qubits 1, 2, ... in file
 * order; every other column is ignored apart from "qubit", kept as a label.
 */
inline ReadoutModel read_calibration_csv(std::istream &in) {
    std::string line;
    auto split = [](const std::string &l) {
        std::vector<std::string> out;
        std::stringstream ss(l);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            out.push_back(cell);
        }
        return out;
    };
    while (std::getline(in, line) && (line.empty() || line[0] == '#')) {
    }
    const auto header = split(line);
    auto col = [&](std::string_view name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) {
                return static_cast<int>(i);
            }
        }
        return -1;
    };
    const int c01 = col("P01");
    const int c10 = col("P10");
    const int cq = col("qubit");
    if (c01 < 0 || c10 < 0) {
        throw DomainError("calibration CSV needs P01 and P10 columns");
    }
    ReadoutModel m;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto cells = split(line);
        if (static_cast<int>(cells.size()) <= std::max(c01, c10)) {
            throw DomainError("calibration CSV row has too few columns: " + line);
        }
        QubitReadout q;
        q.p01 = std::stod(cells[static_cast<std::size_t>(c01)]);
        q.p10 = std::stod(cells[static_cast<std::size_t>(c10)]);
        if (cq >= 0) {
            q.label = cells[static_cast<std::size_t>(cq)];
        }
        m.qubits.push_back(q);
    }
    m.validate();
    return m;
}

inline ReadoutModel read_calibration_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open calibration file " + path);
    }
    return read_calibration_csv(in);
}

/**
 * Flips each recorded bit independently: 0 -> 1 with p10, 1 -> 0 with p01.
 * Shots are visited in key order; shot k, qubit q uses counter k * L + q.
 */
inline CountsTable apply_readout_noise(const CountsTable &counts, const ReadoutModel &model,
                                       std::uint64_t seed) {
    const int L = counts.num_qubits();
    if (model.num_qubits() != L) {
        throw DimensionError("readout model length does not match counts");
    }
    model.validate();
    CountsTable out{counts.basis, counts.shots, {}, seed};
    const CounterRng rng(seed, 1);
    std::uint64_t shot = 0;
    for (const auto &[key, c] : counts.counts) {
        for (std::uint64_t r = 0; r < c; ++r, ++shot) {
            std::uint64_t k = key;
            for (int q = 0; q < L; ++q) {
                const double u =
                    static_cast<double>(rng.at(shot * static_cast<std::uint64_t>(L) +
                                               static_cast<std::uint64_t>(q)) >> 11) *
                    0x1.0p-53;
                const bool one = ((k >> q) & 1U) != 0;
                const auto &qr = model.qubits[static_cast<std::size_t>(q)];
                if ((one && u < qr.p01) || (!one && u < qr.p10)) {
                    k ^= 1ULL << q;
                }
            }
            ++out.counts[k];
        }
    }
    return out;
}

/**
 * Applies the inverse of the tensor product of per-qubit confusion matrices
 *   A_q = [[1 - p10, p01], [p10, 1 - p01]]   (rows: read, columns: prepared)
 * to the empirical distribution. The result sums to one and may contain
 * small negative entries.
 */
inline std::vector<double> mitigate_readout(const CountsTable &counts, const ReadoutModel &model) {
    const int L = counts.num_qubits();
    if (model.num_qubits() != L) {
        throw DimensionError("readout model length does not match counts");
    }
    model.validate();
    std::vector<double> p = counts.distribution();
    for (int q = 0; q < L; ++q) {
        const auto &qr = model.qubits[static_cast<std::size_t>(q)];
        const double det = 1.0 - qr.p01 - qr.p10;
        if (qr.p01 + qr.p10 >= 1.0 - 1e-12) {
            throw NumericalError("confusion matrix of qubit " + std::to_string(q + 1) +
                                 " is singular or inverts readout");
        }
        // inverse of [[a, b], [c, d]] is [[d, -b], [-c, a]] / det
        const double a = 1.0 - qr.p10;
        const double b = qr.p01;
        const double c = qr.p10;
        const double d = 1.0 - qr.p01;
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if ((i & bit) == 0) {
                const double r0 = p[i];
                const double r1 = p[i | bit];
                p[i] = (d * r0 - b * r1) / det;
                p[i | bit] = (-c * r0 + a * r1) / det;
            }
        }
    }
    return p;
}

/**
 * Readout-corrected <Z_q> from Z-basis counts: the observed mean is
 * (p01 - p10) + z (1 - p01 - p10), inverted for z. The stderr scales by the
 * same factor.
 */
inline PauliEstimate mitigated_z(const CountsTable &counts, const ReadoutModel &model, int qubit) {
    if (model.num_qubits() != counts.num_qubits()) {
        throw DimensionError("readout model length does not match counts");
    }
    if (qubit < 1 || qubit > counts.num_qubits()) {
        throw DomainError("mitigated_z: qubit outside the register");
    }
    model.validate();
    const auto &qr = model.qubits[static_cast<std::size_t>(qubit - 1)];
    const double det = 1.0 - qr.p01 - qr.p10;
    if (det <= 1e-12) {
        throw NumericalError("confusion matrix of qubit " + std::to_string(qubit) +
                             " is singular or inverts readout");
    }
    PauliString z(counts.num_qubits());
    z.set(qubit, Pauli::Z);
    const PauliEstimate raw = estimate_pauli(counts, z);
    return {(raw.mean - (qr.p01 - qr.p10)) / det, raw.stderr_ / det};
}

// ---------------------------------------------------------------------------
// CSV serialization
// ---------------------------------------------------------------------------

/// "# basis=..", "# shots=..", "# seed=.." header block, then "bitstring,count".
inline void write_counts_csv(std::ostream &out, const CountsTable &t) {
    out << "# basis=" << t.basis.str() << '\n';
    out << "# shots=" << t.shots << '\n';
    out << "# seed=" << t.seed << '\n';
    out << "bitstring,count\n";
    for (const auto &[k, c] : t.counts) {
        out << bitstring(k, t.num_qubits()) << ',' << c << '\n';
    }
}

inline CountsTable read_counts_csv(std::istream &in) {
    CountsTable t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(eq + 1);
            if (key == "basis") {
                t.basis = MeasurementBasis(value);
            } else if (key == "shots") {
                t.shots = std::stoull(value);
            } else if (key == "seed") {
                t.seed = std::stoull(value);
            }
            continue;
        }
        if (!header_seen) {
            if (line != "bitstring,count") {
                throw DomainError("counts CSV: expected 'bitstring,count' header");
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw DomainError("counts CSV: malformed row " + line);
        }
        const std::string bits = line.substr(0, comma);
        if (static_cast<int>(bits.size()) != t.basis.length()) {
            throw DimensionError("counts CSV: bitstring length does not match basis");
        }
        t.counts[parse_bitstring(bits)] += std::stoull(line.substr(comma + 1));
    }
    if (t.total() != t.shots) {
        throw DomainError("counts CSV: counts do not sum to shots");
    }
    return t;
}

} // namespace tcilab
