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
 * Parametrized circuits f(theta) = <psi(theta)| M |psi(theta)> with
 *
 *     |psi(theta)> = C_{m+1} R_m(theta_m) C_m ... R_1(theta_1) C_1 |0...0>,
 *     R_j(t) = exp(-i t/2 G_j),
 *
 * where every fixed block C_j is a quantum-volume layer, plus the random
 * samplers used by the experiments.
 */
#pragma once

#include "rng.hpp"
#include "simulator.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdescent {

/// Uniform qubit permutation followed by floor(n/2) two-qubit unitaries on
/// the pairs (perm[0], perm[1]), (perm[2], perm[3]), ...; for odd n the
/// qubit perm[n-1] idles.
struct QvLayer {
    std::vector<std::size_t> permutation;
    std::vector<Matrix4> blocks;

    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return permutation.size();
    }

    void validate() const {
        const std::size_t n = permutation.size();
        std::vector<bool> seen(n, false);
        for (const std::size_t q : permutation) {
            if (q >= n || seen[q]) {
                throw std::invalid_argument(
                    "QvLayer: permutation is not a bijection");
            }
            seen[q] = true;
        }
        if (blocks.size() != n / 2) {
            throw std::invalid_argument("QvLayer: expected floor(n/2) blocks");
        }
        for (const auto &u : blocks) {
            if (unitarity_defect(u) > 1e-10) {
                throw std::invalid_argument("QvLayer: block is not unitary");
            }
        }
    }

    void apply(Statevector &state) const {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            detail::apply_two_qubit_unchecked(state.amplitudes(), blocks[b],
                                              permutation[2 * b],
                                              permutation[2 * b + 1]);
        }
    }

    /// Layer acting as the identity (used by hand-built test circuits).
    static QvLayer identity(std::size_t n) {
        QvLayer layer;
        layer.permutation.resize(n);
        for (std::size_t q = 0; q < n; ++q) {
            layer.permutation[q] = q;
        }
        Matrix4 eye{};
        for (std::size_t d = 0; d < 4; ++d) {
            eye[d * 4 + d] = 1.0;
        }
        layer.blocks.assign(n / 2, eye);
        return layer;
    }
};

class ParamCircuit {
  public:
    ParamCircuit() = default;

    ParamCircuit(std::size_t num_qubits, std::vector<QvLayer> layers,
                 std::vector<PauliString> generators)
        : num_qubits_(num_qubits), layers_(std::move(layers)),
          generators_(std::move(generators)) {
        if (layers_.size() != generators_.size() + 1) {
            throw std::invalid_argument(
                "ParamCircuit: need exactly one more layer than generators");
        }
        for (const auto &layer : layers_) {
            if (layer.num_qubits() != num_qubits_) {
                throw std::invalid_argument(
                    "ParamCircuit: layer width does not match qubit count");
            }
            layer.validate();
        }
        for (const auto &g : generators_) {
            if (g.size() != num_qubits_) {
                throw std::invalid_argument(
                    "ParamCircuit: generator length does not match qubit count");
            }
            if (g.is_identity()) {
                throw std::invalid_argument(
                    "ParamCircuit: generator must not be the identity");
            }
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t num_params() const noexcept {
        return generators_.size();
    }
    [[nodiscard]] const std::vector<QvLayer> &layers() const noexcept {
        return layers_;
    }
    [[nodiscard]] const std::vector<PauliString> &generators() const noexcept {
        return generators_;
    }

    [[nodiscard]] Statevector prepare(std::span<const double> theta) const {
        if (theta.size() != generators_.size()) {
            throw std::invalid_argument(
                "ParamCircuit: expected " + std::to_string(generators_.size()) +
                " parameters, got " + std::to_string(theta.size()));
        }
        Statevector state = init_zero_state(num_qubits_);
        layers_[0].apply(state);
        for (std::size_t j = 0; j < generators_.size(); ++j) {
            apply_pauli_rotation(state, generators_[j], theta[j]);
            layers_[j + 1].apply(state);
        }
        return state;
    }

  private:
    std::size_t num_qubits_ = 0;
    std::vector<QvLayer> layers_;
    std::vector<PauliString> generators_;
};

/// The objective f together with a counter of how many times f was
/// evaluated. The counter is the unit of cost accounting.
class ObjectiveInstance {
  public:
    ObjectiveInstance() = default;
    ObjectiveInstance(ParamCircuit circuit, Observable observable)
        : circuit_(std::move(circuit)), observable_(std::move(observable)) {
        for (const auto &t : observable_.terms()) {
            if (t.pauli.size() != circuit_.num_qubits()) {
                throw std::invalid_argument(
                    "ObjectiveInstance: observable width does not match circuit");
            }
        }
    }

    ObjectiveInstance(const ObjectiveInstance &other)
        : circuit_(other.circuit_), observable_(other.observable_),
          evals_(other.evals_.load()) {}
    ObjectiveInstance &operator=(const ObjectiveInstance &other) {
        circuit_ = other.circuit_;
        observable_ = other.observable_;
        evals_.store(other.evals_.load());
        return *this;
    }
    ObjectiveInstance(ObjectiveInstance &&other) noexcept
        : circuit_(std::move(other.circuit_)),
          observable_(std::move(other.observable_)),
          evals_(other.evals_.load()) {}
    ObjectiveInstance &operator=(ObjectiveInstance &&other) noexcept {
        circuit_ = std::move(other.circuit_);
        observable_ = std::move(other.observable_);
        evals_.store(other.evals_.load());
        return *this;
    }
    ~ObjectiveInstance() = default;

    /// f(theta); increments the evaluation counter by one.
    double operator()(std::span<const double> theta) const {
        const Statevector state = circuit_.prepare(theta);
        evals_.fetch_add(1, std::memory_order_relaxed);
        return expectation(state, observable_);
    }

    [[nodiscard]] std::uint64_t evaluations() const noexcept {
        return evals_.load(std::memory_order_relaxed);
    }
    void reset_evaluations() noexcept { evals_.store(0); }

    [[nodiscard]] std::size_t num_params() const noexcept {
        return circuit_.num_params();
    }
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return circuit_.num_qubits();
    }
    [[nodiscard]] const ParamCircuit &circuit() const noexcept { return circuit_; }
    [[nodiscard]] const Observable &observable() const noexcept {
        return observable_;
    }

  private:
    ParamCircuit circuit_;
    Observable observable_;
    mutable std::atomic<std::uint64_t> evals_{0};
};

inline double evaluate_objective(const ObjectiveInstance &inst,
                                 std::span<const double> theta) {
    return inst(theta);
}

// ---------------------------------------------------------------------------
// Sampling

/// Haar-random element of SU(4): QR of a complex Ginibre matrix with the
/// diagonal phases of R moved into Q, then a fourth-root phase fixing det = 1.
inline Matrix4 sample_haar_su4(RngStream &rng) {
    Eigen::Matrix4cd z;
    const double scale = std::numbers::sqrt2 / 2.0;
    for (Eigen::Index r = 0; r < 4; ++r) {
        for (Eigen::Index c = 0; c < 4; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(r, c) = Complex{re * scale, im * scale};
        }
    }
    const Eigen::HouseholderQR<Eigen::Matrix4cd> qr(z);
    Eigen::Matrix4cd q = qr.householderQ();
    const Eigen::Matrix4cd &packed = qr.matrixQR();
    for (Eigen::Index j = 0; j < 4; ++j) {
        const Complex d = packed(j, j);
        const double mag = std::abs(d);
        q.col(j) *= (mag > 0.0) ? d / mag : Complex{1.0, 0.0};
    }
    const double phase = std::arg(q.determinant());
    q *= std::polar(1.0, -phase / 4.0);

    Matrix4 u;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            u[r * 4 + c] = q(static_cast<Eigen::Index>(r),
                             static_cast<Eigen::Index>(c));
        }
    }
    return u;
}

inline QvLayer sample_qv_layer(RngStream &rng, std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("sample_qv_layer: need at least 2 qubits");
    }
    QvLayer layer;
    layer.permutation.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
        layer.permutation[q] = q;
    }
    // Fisher-Yates.
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(layer.permutation[i], layer.permutation[j]);
    }
    layer.blocks.reserve(n / 2);
    for (std::size_t b = 0; b < n / 2; ++b) {
        layer.blocks.push_back(sample_haar_su4(rng));
    }
    return layer;
}

/// Uniform over {I,X,Y,Z}^n, or over {I,X,Y,Z}^n minus I^n by rejection.
inline PauliString sample_pauli_string(RngStream &rng, std::size_t n,
                                       bool exclude_identity) {
    for (;;) {
        std::vector<Pauli> letters(n);
        for (auto &l : letters) {
            l = static_cast<Pauli>(rng.below(4));
        }
        PauliString p(std::move(letters));
        if (!exclude_identity || !p.is_identity()) {
            return p;
        }
    }
}

enum class ObservableKind { SinglePauli, GaussianSum20 };

inline constexpr std::size_t kGaussianSumTerms = 20;

struct SampledInstance {
    ObjectiveInstance instance;
    std::vector<double> theta0;
};

/// Draw order: m+1 layers, m generators, observable, theta0.
inline SampledInstance sample_instance(RngStream &rng, std::size_t n,
                                       std::size_t m, ObservableKind kind) {
    if (n < 2 || m < 1) {
        throw std::invalid_argument("sample_instance: need n >= 2 and m >= 1");
    }
    std::vector<QvLayer> layers;
    layers.reserve(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        layers.push_back(sample_qv_layer(rng, n));
    }
    std::vector<PauliString> generators;
    generators.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        generators.push_back(sample_pauli_string(rng, n, true));
    }
    Observable observable;
    if (kind == ObservableKind::SinglePauli) {
        observable = Observable(sample_pauli_string(rng, n, true));
    } else {
        std::vector<Observable::Term> terms;
        terms.reserve(kGaussianSumTerms);
        for (std::size_t i = 0; i < kGaussianSumTerms; ++i) {
            PauliString p = sample_pauli_string(rng, n, false);
            const double c = rng.normal();
            terms.push_back({c, std::move(p)});
        }
        observable = Observable(std::move(terms));
    }
    std::vector<double> theta0(m);
    for (auto &t : theta0) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return {ObjectiveInstance(ParamCircuit(n, std::move(layers),
                                           std::move(generators)),
                              std::move(observable)),
            std::move(theta0)};
}

} // namespace kdescent
