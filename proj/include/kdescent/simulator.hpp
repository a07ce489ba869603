// Copyright 2026 The kdescent Authors
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
/**
 * @file
 * Dense statevector simulation: Pauli strings, Pauli rotations, two-qubit
 * gates and Pauli-sum expectation values.
 *
 * Qubit q corresponds to bit q of the amplitude index (bit 0 is the least
 * significant). Letter q of a PauliString acts on qubit q.
 */
#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kdescent {

using Complex = std::complex<double>;

/// Row-major 4x4 complex matrix.
using Matrix4 = std::array<Complex, 16>;

inline constexpr std::size_t kDefaultMaxQubits = 24;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) {
    constexpr std::string_view letters = "IXYZ";
    return letters[static_cast<std::size_t>(p)];
}

class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> letters)
        : letters_(std::move(letters)) {}

    /// Parses a word such as "XIZY"; character q acts on qubit q.
    static PauliString parse(std::string_view word) {
        std::vector<Pauli> letters;
        letters.reserve(word.size());
        for (const char c : word) {
            switch (c) {
            case 'I': letters.push_back(Pauli::I); break;
            case 'X': letters.push_back(Pauli::X); break;
            case 'Y': letters.push_back(Pauli::Y); break;
            case 'Z': letters.push_back(Pauli::Z); break;
            default:
                throw std::invalid_argument(
                    "PauliString: invalid letter '" + std::string(1, c) + "'");
            }
        }
        return PauliString(std::move(letters));
    }

    static PauliString identity(std::size_t n) {
        return PauliString(std::vector<Pauli>(n, Pauli::I));
    }

    [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
    [[nodiscard]] Pauli operator[](std::size_t q) const { return letters_[q]; }
    [[nodiscard]] const std::vector<Pauli> &letters() const noexcept {
        return letters_;
    }

    [[nodiscard]] bool is_identity() const noexcept {
        for (const Pauli p : letters_) {
            if (p != Pauli::I) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] std::string str() const {
        std::string s;
        s.reserve(letters_.size());
        for (const Pauli p : letters_) {
            s.push_back(pauli_char(p));
        }
        return s;
    }

    /// Bits flipped by the operator (X or Y positions).
    [[nodiscard]] std::uint64_t x_mask() const noexcept {
        std::uint64_t mask = 0;
        for (std::size_t q = 0; q < letters_.size(); ++q) {
            if (letters_[q] == Pauli::X || letters_[q] == Pauli::Y) {
                mask |= std::uint64_t{1} << q;
            }
        }
        return mask;
    }

    /// Bits contributing a (-1)^bit sign (Y or Z positions).
    [[nodiscard]] std::uint64_t z_mask() const noexcept {
        std::uint64_t mask = 0;
        for (std::size_t q = 0; q < letters_.size(); ++q) {
            if (letters_[q] == Pauli::Z || letters_[q] == Pauli::Y) {
                mask |= std::uint64_t{1} << q;
            }
        }
        return mask;
    }

    [[nodiscard]] std::size_t y_count() const noexcept {
        std::size_t count = 0;
        for (const Pauli p : letters_) {
            count += (p == Pauli::Y) ? 1U : 0U;
        }
        return count;
    }

    friend bool operator==(const PauliString &,
                           const PauliString &) = default;

  private:
    std::vector<Pauli> letters_;
};

/// Real linear combination of Pauli strings.
class Observable {
  public:
    struct Term {
        double coeff;
        PauliString pauli;
    };

    Observable() = default;
    explicit Observable(std::vector<Term> terms) : terms_(std::move(terms)) {}
    explicit Observable(PauliString p) { terms_.push_back({1.0, std::move(p)}); }

    [[nodiscard]] const std::vector<Term> &terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  private:
    std::vector<Term> terms_;
};

class Statevector {
  public:
    Statevector() = default;

    Statevector(std::size_t num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
        if (amps_.size() != (std::size_t{1} << num_qubits_)) {
            throw std::invalid_argument(
                "Statevector: amplitude count must be 2^n");
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    Complex &operator[](std::size_t i) { return amps_[i]; }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const noexcept {
        double s = 0.0;
        for (const Complex &a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

  private:
    std::size_t num_qubits_ = 0;
    std::vector<Complex> amps_;
};

/// |0...0> on n qubits. Rejects n == 0 and n > max_qubits.
inline Statevector init_zero_state(std::size_t n,
                                   std::size_t max_qubits = kDefaultMaxQubits) {
    if (n == 0) {
        throw std::invalid_argument("init_zero_state: need at least one qubit");
    }
    if (n > max_qubits || n >= 63) {
        throw std::length_error("init_zero_state: " + std::to_string(n) +
                                " qubits exceeds the configured cap of " +
                                std::to_string(max_qubits));
    }
    std::vector<Complex> amps(std::size_t{1} << n, Complex{0.0, 0.0});
    amps[0] = Complex{1.0, 0.0};
    return Statevector(n, std::move(amps));
}

/// Frobenius norm of u^dagger u - I.
inline double unitarity_defect(const Matrix4 &u) {
    double acc = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            Complex s{0.0, 0.0};
            for (std::size_t k = 0; k < 4; ++k) {
                s += std::conj(u[k * 4 + r]) * u[k * 4 + c];
            }
            if (r == c) {
                s -= 1.0;
            }
            acc += std::norm(s);
        }
    }
    return std::sqrt(acc);
}

namespace detail {

/// Applies u to qubits (hi, lo) where the local basis index is
/// 2*bit(hi) + bit(lo). No validation.
inline void apply_two_qubit_unchecked(std::span<Complex> amps,
                                      const Matrix4 &u, std::size_t hi,
                                      std::size_t lo) {
    const std::size_t bh = std::size_t{1} << hi;
    const std::size_t bl = std::size_t{1} << lo;
    const std::size_t p0 = std::min(hi, lo);
    const std::size_t p1 = std::max(hi, lo);
    const std::size_t groups = amps.size() >> 2U;
    const std::size_t low0 = (std::size_t{1} << p0) - 1;
    const std::size_t low1 = (std::size_t{1} << p1) - 1;
    for (std::size_t k = 0; k < groups; ++k) {
        // Insert zero bits at positions p0 < p1.
        std::size_t i = (k & low0) | ((k & ~low0) << 1U);
        i = (i & low1) | ((i & ~low1) << 1U);
        const std::size_t i00 = i;
        const std::size_t i01 = i | bl;
        const std::size_t i10 = i | bh;
        const std::size_t i11 = i | bh | bl;
        const Complex a0 = amps[i00];
        const Complex a1 = amps[i01];
        const Complex a2 = amps[i10];
        const Complex a3 = amps[i11];
        amps[i00] = u[0] * a0 + u[1] * a1 + u[2] * a2 + u[3] * a3;
        amps[i01] = u[4] * a0 + u[5] * a1 + u[6] * a2 + u[7] * a3;
        amps[i10] = u[8] * a0 + u[9] * a1 + u[10] * a2 + u[11] * a3;
        amps[i11] = u[12] * a0 + u[13] * a1 + u[14] * a2 + u[15] * a3;
    }
}

/// i^k for k mod 4.
inline Complex i_power(std::size_t k) {
    switch (k & 3U) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

inline void check_length(const Statevector &state, const PauliString &p,
                         const char *where) {
    if (p.size() != state.num_qubits()) {
        throw std::invalid_argument(std::string(where) +
                                    ": Pauli string length " +
                                    std::to_string(p.size()) +
                                    " does not match qubit count " +
                                    std::to_string(state.num_qubits()));
    }
}

} // namespace detail

/// Applies the 4x4 unitary u to the ordered qubit pair (first, second); the
/// local basis index of u is 2*bit(first) + bit(second).
inline void apply_two_qubit(Statevector &state, const Matrix4 &u,
                            std::size_t first, std::size_t second) {
    const std::size_t n = state.num_qubits();
    if (first >= n || second >= n) {
        throw std::out_of_range("apply_two_qubit: qubit index out of range");
    }
    if (first == second) {
        throw std::invalid_argument("apply_two_qubit: qubit indices must differ");
    }
    if (unitarity_defect(u) > 1e-8) {
        throw std::invalid_argument("apply_two_qubit: matrix is not unitary");
    }
    detail::apply_two_qubit_unchecked(state.amplitudes(), u, first, second);
}

/// state <- P state, as an index permutation with +-1/+-i phases.
inline void apply_pauli(Statevector &state, const PauliString &p) {
    detail::check_length(state, p, "apply_pauli");
    const std::uint64_t xm = p.x_mask();
    const std::uint64_t zm = p.z_mask();
    const Complex global = detail::i_power(p.y_count());
    auto amps = state.amplitudes();
    auto phase = [&](std::uint64_t i) {
        return (std::popcount(i & zm) & 1U) ? -global : global;
    };
    if (xm == 0) {
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            amps[i] *= phase(i);
        }
        return;
    }
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        const std::uint64_t j = i ^ xm;
        if (i < j) {
            const Complex ai = amps[i];
            const Complex aj = amps[j];
            amps[j] = phase(i) * ai;
            amps[i] = phase(j) * aj;
        }
    }
}

/// state <- exp(-i angle/2 G) state = cos(angle/2) state - i sin(angle/2) G state.
inline void apply_pauli_rotation(Statevector &state, const PauliString &g,
                                 double angle) {
    detail::check_length(state, g, "apply_pauli_rotation");
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const std::uint64_t xm = g.x_mask();
    const std::uint64_t zm = g.z_mask();
    // -i * i^{ny}
    const Complex mis = Complex{0.0, -s} * detail::i_power(g.y_count());
    auto amps = state.amplitudes();
    auto coeff = [&](std::uint64_t i) {
        return (std::popcount(i & zm) & 1U) ? -mis : mis;
    };
    if (xm == 0) {
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            amps[i] *= c + coeff(i);
        }
        return;
    }
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        const std::uint64_t j = i ^ xm;
        if (i < j) {
            const Complex ai = amps[i];
            const Complex aj = amps[j];
            amps[i] = c * ai + coeff(j) * aj;
            amps[j] = c * aj + coeff(i) * ai;
        }
    }
}

/// <state| P |state> as a complex number (real for Hermitian P).
inline Complex pauli_bracket(const Statevector &state, const PauliString &p) {
    detail::check_length(state, p, "pauli_bracket");
    const std::uint64_t xm = p.x_mask();
    const std::uint64_t zm = p.z_mask();
    auto amps = state.amplitudes();
    double even_re = 0.0;
    double even_im = 0.0;
    double odd_re = 0.0;
    double odd_im = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        const Complex t = std::conj(amps[i ^ xm]) * amps[i];
        if (std::popcount(i & zm) & 1U) {
            odd_re += t.real();
            odd_im += t.imag();
        } else {
            even_re += t.real();
            even_im += t.imag();
        }
    }
    return detail::i_power(p.y_count()) *
           Complex{even_re - odd_re, even_im - odd_im};
}

/// Sum over terms of coeff * Re<state|P|state>.
inline double expectation(const Statevector &state, const Observable &m) {
    const double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > 1e-8) {
        throw std::invalid_argument("expectation: state is not normalized");
    }
    double value = 0.0;
    for (const auto &term : m.terms()) {
        const Complex b = pauli_bracket(state, term.pauli);
        if (std::abs(b.imag()) >= 1e-10) {
            throw std::logic_error(
                "expectation: Pauli bracket has a non-negligible imaginary part");
        }
        value += term.coeff * b.real();
    }
    return value;
}

} // namespace kdescent
