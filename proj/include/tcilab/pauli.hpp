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
 * Phase-exact Pauli-string algebra, canonical Pauli-sum observables and the
 * Jordan-Wigner map from Majorana monomials to Pauli strings.
 *
 * Qubits are 1-based in every public signature. Internally qubit q lives in
 * bit (q - 1) of the x/z masks and of computational-basis indices.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcilab/errors.hpp"

namespace tcilab {

using cplx = std::complex<double>;

/// Coefficients below this magnitude are dropped during canonicalization.
inline constexpr double kPruneTolerance = 1e-12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) {
    constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    return kLetters[static_cast<int>(p)];
}

inline Pauli pauli_from_char(char c) {
    switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw DomainError(std::string("invalid Pauli letter '") + c + "'");
    }
}

/// i^k for k in Z_4.
inline cplx i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

/**
 * A tensor product of single-qubit Paulis on L <= 64 qubits, stored as an
 * (x, z) bitmask pair: X = (1,0), Y = (1,1), Z = (0,1). The string carries no
 * phase; Y means the Hermitian sigma^y.
 */
class PauliString {
  public:
    static constexpr int kMaxQubits = 64;

    PauliString() = default;

    /// The identity string on `length` qubits.
    explicit PauliString(int length) : length_(length) {
        if (length < 0 || length > kMaxQubits) {
            throw DomainError("PauliString length must be in [0, 64], got " +
                              std::to_string(length));
        }
    }

    static PauliString from_masks(int length, std::uint64_t x, std::uint64_t z) {
        PauliString p(length);
        const std::uint64_t valid = length == 64 ? ~0ULL : ((1ULL << length) - 1);
        if ((x & ~valid) != 0 || (z & ~valid) != 0) {
            throw DomainError("PauliString masks exceed the string length");
        }
        p.x_ = x;
        p.z_ = z;
        return p;
    }

    /// Parses e.g. "XZZI"; the first character is qubit 1.
    static PauliString from_letters(std::string_view letters) {
        PauliString p(static_cast<int>(letters.size()));
        for (std::size_t q = 0; q < letters.size(); ++q) {
            p.set(static_cast<int>(q) + 1, pauli_from_char(letters[q]));
        }
        return p;
    }

    [[nodiscard]] int length() const { return length_; }
    [[nodiscard]] std::uint64_t x_mask() const { return x_; }
    [[nodiscard]] std::uint64_t z_mask() const { return z_; }

    [[nodiscard]] Pauli letter(int qubit) const {
        check_qubit(qubit);
        const int b = qubit - 1;
        const int code = static_cast<int>((x_ >> b) & 1U) | (static_cast<int>((z_ >> b) & 1U) << 1);
        // code: 0 -> I, 1 -> X, 3 -> Y, 2 -> Z
        constexpr Pauli kFromCode[] = {Pauli::I, Pauli::X, Pauli::Z, Pauli::Y};
        return kFromCode[code];
    }

    PauliString &set(int qubit, Pauli p) {
        check_qubit(qubit);
        const std::uint64_t bit = 1ULL << (qubit - 1);
        x_ &= ~bit;
        z_ &= ~bit;
        if (p == Pauli::X || p == Pauli::Y) {
            x_ |= bit;
        }
        if (p == Pauli::Z || p == Pauli::Y) {
            z_ |= bit;
        }
        return *this;
    }

    [[nodiscard]] bool is_identity() const { return x_ == 0 && z_ == 0; }
    [[nodiscard]] int weight() const { return std::popcount(x_ | z_); }
    [[nodiscard]] int y_count() const { return std::popcount(x_ & z_); }
    /// Qubits carrying a non-identity letter, as a bitmask.
    [[nodiscard]] std::uint64_t support() const { return x_ | z_; }

    /// True when this string commutes with `other`.
    [[nodiscard]] bool commutes_with(const PauliString &other) const {
        return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
    }

    [[nodiscard]] std::string str() const {
        std::string s(static_cast<std::size_t>(length_), 'I');
        for (int q = 1; q <= length_; ++q) {
            s[static_cast<std::size_t>(q - 1)] = to_char(letter(q));
        }
        return s;
    }

    friend bool operator==(const PauliString &a, const PauliString &b) {
        return a.length_ == b.length_ && a.x_ == b.x_ && a.z_ == b.z_;
    }

    /// Lexicographic over letters, qubit 1 first, with I < X < Y < Z.
    friend bool operator<(const PauliString &a, const PauliString &b) {
        if (a.length_ != b.length_) {
            return a.length_ < b.length_;
        }
        const std::uint64_t diff = (a.x_ ^ b.x_) | (a.z_ ^ b.z_);
        if (diff == 0) {
            return false;
        }
        const int q = std::countr_zero(diff) + 1;
        return static_cast<int>(a.letter(q)) < static_cast<int>(b.letter(q));
    }

  private:
    void check_qubit(int qubit) const {
        if (qubit < 1 || qubit > length_) {
            throw DomainError("qubit index " + std::to_string(qubit) + " outside 1.." +
                              std::to_string(length_));
        }
    }

    int length_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

/// phase * string, with the phase held as an exponent of i.
struct PauliProduct {
    int phase_exponent = 0;
    PauliString string;

    [[nodiscard]] cplx phase() const { return i_pow(phase_exponent); }
};

/**
 * Operator product p * q. The phase is exact: it is accumulated as an integer
 * power of i from the single-qubit rules XY = iZ, YZ = iX, ZX = iY.
 */
inline PauliProduct pauli_mul(const PauliString &p, const PauliString &q) {
    if (p.length() != q.length()) {
        throw DimensionError("pauli_mul: length mismatch " + std::to_string(p.length()) +
                             " vs " + std::to_string(q.length()));
    }
    // Cyclic position of X, Y, Z; a*b = +i c when (b - a) == 1 mod 3.
    auto cyc = [](Pauli a) { return static_cast<int>(a) - 1; };
    int k = 0;
    std::uint64_t both = p.support() & q.support();
    while (both != 0) {
        const int q1 = std::countr_zero(both) + 1;
        both &= both - 1;
        const Pauli a = p.letter(q1);
        const Pauli b = q.letter(q1);
        if (a == b) {
            continue;
        }
        k += ((cyc(b) - cyc(a) + 3) % 3 == 1) ? 1 : 3;
    }
    return {k & 3, PauliString::from_masks(p.length(), p.x_mask() ^ q.x_mask(),
                                           p.z_mask() ^ q.z_mask())};
}

/// A complex-weighted Pauli string.
struct PauliTerm {
    cplx coeff{1.0, 0.0};
    PauliString string;

    PauliTerm() = default;
    PauliTerm(cplx c, PauliString s) : coeff(c), string(std::move(s)) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw DomainError("PauliTerm coefficient must be finite");
        }
    }
};

inline PauliTerm operator*(const PauliTerm &a, const PauliTerm &b) {
    auto prod = pauli_mul(a.string, b.string);
    return {a.coeff * b.coeff * prod.phase(), prod.string};
}

/**
 * A canonical sum of Pauli terms on a fixed number of qubits: sorted by
 * string, one term per string, |coeff| > kPruneTolerance.
 */
class Observable {
  public:
    Observable() = default;
    explicit Observable(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 0 || num_qubits > PauliString::kMaxQubits) {
            throw DomainError("Observable qubit count out of range");
        }
    }

    Observable(int num_qubits, std::vector<PauliTerm> terms)
        : num_qubits_(num_qubits), terms_(std::move(terms)) {
        for (const auto &t : terms_) {
            if (t.string.length() != num_qubits_) {
                throw DimensionError("Observable term length does not match qubit count");
            }
        }
        canonicalize();
    }

    static Observable identity(int num_qubits, cplx coeff = 1.0) {
        return Observable(num_qubits, {PauliTerm(coeff, PauliString(num_qubits))});
    }

    static Observable single(const PauliTerm &term) {
        return Observable(term.string.length(), {term});
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::span<const PauliTerm> terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    /// Hermitian iff every coefficient is real (Pauli strings are Hermitian).
    [[nodiscard]] bool is_hermitian(double tol = kPruneTolerance) const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [tol](const PauliTerm &t) { return std::abs(t.coeff.imag()) <= tol; });
    }

    [[nodiscard]] cplx coefficient(const PauliString &s) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                                   [](const PauliTerm &t, const PauliString &key) {
                                       return t.string < key;
                                   });
        if (it != terms_.end() && it->string == s) {
            return it->coeff;
        }
        return 0.0;
    }

    [[nodiscard]] Observable adjoint() const {
        Observable out = *this;
        for (auto &t : out.terms_) {
            t.coeff = std::conj(t.coeff);
        }
        return out;
    }

    /// Re-sorts and merges; idempotent.
    void canonicalize() {
        std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> acc;
        for (const auto &t : terms_) {
            acc[{t.string.x_mask(), t.string.z_mask()}] += t.coeff;
        }
        std::vector<PauliTerm> merged;
        merged.reserve(acc.size());
        for (const auto &[key, c] : acc) {
            if (std::abs(c) > kPruneTolerance) {
                merged.emplace_back(c, PauliString::from_masks(num_qubits_, key.first, key.second));
            }
        }
        std::sort(merged.begin(), merged.end(),
                  [](const PauliTerm &a, const PauliTerm &b) { return a.string < b.string; });
        terms_ = std::move(merged);
    }

    Observable &operator+=(const Observable &other) {
        check_same(other);
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        canonicalize();
        return *this;
    }

    Observable &operator-=(const Observable &other) { return *this += other * cplx(-1.0); }

    Observable &operator*=(cplx s) {
        for (auto &t : terms_) {
            t.coeff *= s;
        }
        canonicalize();
        return *this;
    }

    friend Observable operator+(Observable a, const Observable &b) { return a += b; }
    friend Observable operator-(Observable a, const Observable &b) { return a -= b; }
    friend Observable operator*(Observable a, cplx s) { return a *= s; }
    friend Observable operator*(cplx s, Observable a) { return a *= s; }

    friend Observable operator*(const Observable &a, const Observable &b) {
        a.check_same(b);
        std::vector<PauliTerm> out;
        out.reserve(a.size() * b.size());
        for (const auto &ta : a.terms_) {
            for (const auto &tb : b.terms_) {
                out.push_back(ta * tb);
            }
        }
        return Observable(a.num_qubits_, std::move(out));
    }

    friend bool operator==(const Observable &a, const Observable &b) {
        if (a.num_qubits_ != b.num_qubits_ || a.size() != b.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!(a.terms_[i].string == b.terms_[i].string) ||
                a.terms_[i].coeff != b.terms_[i].coeff) {
                return false;
            }
        }
        return true;
    }

    /// Largest coefficient-wise deviation between two observables.
    [[nodiscard]] double max_coeff_distance(const Observable &other) const {
        const Observable d = *this - other;
        double m = 0.0;
        for (const auto &t : d.terms_) {
            m = std::max(m, std::abs(t.coeff));
        }
        return m;
    }

  private:
    void check_same(const Observable &other) const {
        if (other.num_qubits_ != num_qubits_) {
            throw DimensionError("Observable qubit counts differ: " + std::to_string(num_qubits_) +
                                 " vs " + std::to_string(other.num_qubits_));
        }
    }

    int num_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

// ---------------------------------------------------------------------------
// Jordan-Wigner
// ---------------------------------------------------------------------------

/**
 * Majorana operator gamma_a on an L-site chain, 1 <= a <= 2L:
 *   gamma_{2j-1} = Z_j prod_{k<j} X_k,   gamma_{2j} = -i X_j gamma_{2j-1} = -Y_j prod_{k<j} X_k.
 */
inline PauliTerm jw_majorana(int a, int num_sites) {
    if (num_sites < 1 || num_sites > PauliString::kMaxQubits) {
        throw DomainError("jw_majorana: site count out of range");
    }
    if (a < 1 || a > 2 * num_sites) {
        throw DomainError("Majorana index " + std::to_string(a) + " outside 1.." +
                          std::to_string(2 * num_sites));
    }
    const int j = (a + 1) / 2;
    PauliString odd(num_sites);
    for (int k = 1; k < j; ++k) {
        odd.set(k, Pauli::X);
    }
    odd.set(j, Pauli::Z);
    if (a % 2 == 1) {
        return {1.0, odd};
    }
    PauliString xj(num_sites);
    xj.set(j, Pauli::X);
    return PauliTerm(cplx(0.0, -1.0), xj) * PauliTerm(1.0, odd);
}

/// scalar * gamma_{a1} gamma_{a2} ..., multiplied left to right.
inline PauliTerm majorana_monomial(std::span<const int> indices, cplx scalar, int num_sites) {
    if (indices.empty()) {
        throw DomainError("majorana_monomial: empty index list");
    }
    PauliTerm acc(scalar, PauliString(num_sites));
    for (int a : indices) {
        acc = acc * jw_majorana(a, num_sites);
    }
    return acc;
}

inline PauliTerm majorana_monomial(std::initializer_list<int> indices, cplx scalar, int num_sites) {
    return majorana_monomial(std::span<const int>(indices.begin(), indices.size()), scalar,
                             num_sites);
}

// ---------------------------------------------------------------------------
// Text format: one term per line, "<re> <im> <letters>".
// ---------------------------------------------------------------------------

namespace detail {
inline std::string shortest(double v) {
    char buf[64];
    if (v == 0.0) {
        v = 0.0; // fold -0
    }
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}
} // namespace detail

inline std::string to_text(const Observable &o) {
    std::string out;
    for (const auto &t : o.terms()) {
        out += detail::shortest(t.coeff.real());
        out += ' ';
        out += detail::shortest(t.coeff.imag());
        out += ' ';
        out += t.string.str();
        out += '\n';
    }
    return out;
}

/// Parses the text format; blank lines and lines starting with '#' are skipped.
inline Observable observable_from_text(std::string_view text, int num_qubits = -1) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<PauliTerm> terms;
    int n = num_qubits;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        double re = 0.0;
        double im = 0.0;
        std::string letters;
        if (!(ls >> re >> im >> letters)) {
            throw DomainError("observable text: malformed line " + std::to_string(line_no));
        }
        if (n < 0) {
            n = static_cast<int>(letters.size());
        } else if (static_cast<int>(letters.size()) != n) {
            throw DimensionError("observable text: inconsistent string length on line " +
                                 std::to_string(line_no));
        }
        terms.emplace_back(cplx(re, im), PauliString::from_letters(letters));
    }
    if (n < 0) {
        throw DomainError("observable text: no terms and no qubit count given");
    }
    return Observable(n, std::move(terms));
}

} // namespace tcilab
