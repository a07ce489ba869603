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
//
// Dense-matrix reference implementations used as independent oracles by the
// unit tests. Everything here works on explicit 2^n x 2^n matrices.

#pragma once

#include <kdescent/circuit.hpp>
#include <kdescent/simulator.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using kdescent::Complex;

/// Single-qubit Pauli in the computational basis.
inline Eigen::Matrix2cd pauli_2x2(kdescent::Pauli p) {
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (p) {
    case kdescent::Pauli::I: m << 1, 0, 0, 1; break;
    case kdescent::Pauli::X: m << 0, 1, 1, 0; break;
    case kdescent::Pauli::Y: m << 0, -i, i, 0; break;
    case kdescent::Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline int bit(std::size_t x, std::size_t q) { return static_cast<int>((x >> q) & 1U); }

/// <r|P|c> = prod_q sigma_q[bit_q(r), bit_q(c)]; letter q acts on bit q.
inline Mat pauli_dense(const kdescent::PauliString &p) {
    const std::size_t n = p.size();
    const std::size_t dim = std::size_t{1} << n;
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            Complex v{1.0, 0.0};
            for (std::size_t q = 0; q < n; ++q) {
                v *= pauli_2x2(p[q])(bit(r, q), bit(c, q));
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return m;
}

inline Mat observable_dense(const kdescent::Observable &obs, std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Mat m = Mat::Zero(dim, dim);
    for (const auto &t : obs.terms()) {
        m += t.coeff * pauli_dense(t.pauli);
    }
    return m;
}

/// 4x4 block u on qubits (hi, lo) with local index 2*bit(hi) + bit(lo).
inline Mat embed_two_qubit(const kdescent::Matrix4 &u, std::size_t hi, std::size_t lo,
                           std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t mask = (std::size_t{1} << hi) | (std::size_t{1} << lo);
    Mat m = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~mask) != (c & ~mask)) {
                continue;
            }
            const int lr = 2 * bit(r, hi) + bit(r, lo);
            const int lc = 2 * bit(c, hi) + bit(c, lo);
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                u[static_cast<std::size_t>(lr * 4 + lc)];
        }
    }
    return m;
}

/// exp(-i angle/2 G) via the matrix exponential.
inline Mat rotation_dense(const kdescent::PauliString &g, double angle) {
    const Mat a = Complex{0.0, -angle / 2.0} * pauli_dense(g);
    return a.exp();
}

inline Mat layer_dense(const kdescent::QvLayer &layer, std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Mat m = Mat::Identity(dim, dim);
    for (std::size_t b = 0; b < layer.blocks.size(); ++b) {
        m = embed_two_qubit(layer.blocks[b], layer.permutation[2 * b],
                            layer.permutation[2 * b + 1], n) *
            m;
    }
    return m;
}

inline Vec circuit_state(const kdescent::ParamCircuit &c, std::span<const double> theta) {
    const std::size_t n = c.num_qubits();
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Vec psi = Vec::Zero(dim);
    psi(0) = 1.0;
    psi = layer_dense(c.layers()[0], n) * psi;
    for (std::size_t j = 0; j < c.num_params(); ++j) {
        psi = rotation_dense(c.generators()[j], theta[j]) * psi;
        psi = layer_dense(c.layers()[j + 1], n) * psi;
    }
    return psi;
}

inline double objective(const kdescent::ObjectiveInstance &inst,
                        std::span<const double> theta) {
    const Vec psi = circuit_state(inst.circuit(), theta);
    const Mat m = observable_dense(inst.observable(), inst.circuit().num_qubits());
    return (psi.adjoint() * m * psi)(0).real();
}

inline Vec to_vec(const kdescent::Statevector &s) {
    Vec v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s.amplitudes()[i];
    }
    return v;
}

inline kdescent::Statevector random_state(kdescent::RngStream &rng, std::size_t n) {
    std::vector<Complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = Complex{rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return kdescent::Statevector(n, std::move(amps));
}

/// Central differences, step h.
inline std::vector<double> fd_gradient(const std::function<double(std::span<const double>)> &f,
                                       std::span<const double> x, double h = 1e-5) {
    std::vector<double> p(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        p[k] = x[k] + h;
        const double a = f(p);
        p[k] = x[k] - h;
        const double b = f(p);
        p[k] = x[k];
        g[k] = (a - b) / (2.0 * h);
    }
    return g;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, std::abs(a[i] - b[i]));
    }
    return e;
}

inline std::vector<double> uniform_vector(kdescent::RngStream &rng, std::size_t m,
                                          double lo, double hi) {
    std::vector<double> x(m);
    for (auto &v : x) {
        v = rng.uniform(lo, hi);
    }
    return x;
}

} // namespace oracle
