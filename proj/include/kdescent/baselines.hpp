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
 * Comparison baselines: parameter-shift gradients and the second-order
 * trigonometric model of quantum analytic descent (QAD).
 */
#pragma once

#include "circuit.hpp"
#include "detail/product_sum.hpp"
#include "surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace kdescent {

/// grad_k = [f(theta + pi/2 e_k) - f(theta - pi/2 e_k)] / 2; 2m evaluations.
inline std::vector<double> parameter_shift_gradient(const ObjectiveInstance &inst,
                                                    std::span<const double> theta) {
    detail::check_same_dim(theta.size(), inst.num_params(),
                           "parameter_shift_gradient");
    constexpr double shift = std::numbers::pi / 2.0;
    std::vector<double> point(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        point[k] = theta[k] + shift;
        const double plus = inst(point);
        point[k] = theta[k] - shift;
        const double minus = inst(point);
        point[k] = theta[k];
        grad[k] = (plus - minus) / 2.0;
    }
    return grad;
}

/// First-order Taylor model f(p) + grad f(p) . (theta - p), the local model
/// implicit in a gradient-descent step.
class LinearModel {
  public:
    LinearModel(std::vector<double> base, double base_value,
                std::vector<double> grad)
        : base_(std::move(base)), f0_(base_value), grad_(std::move(grad)) {}

    [[nodiscard]] double value(std::span<const double> theta) const {
        detail::check_same_dim(theta.size(), base_.size(), "LinearModel::value");
        double v = f0_;
        for (std::size_t k = 0; k < base_.size(); ++k) {
            v += grad_[k] * (theta[k] - base_[k]);
        }
        return v;
    }

    [[nodiscard]] std::vector<double> gradient(std::span<const double>) const {
        return grad_;
    }

    double value_and_gradient(std::span<const double> theta,
                              std::span<double> grad) const {
        detail::check_same_dim(grad.size(), grad_.size(), "LinearModel::gradient");
        std::copy(grad_.begin(), grad_.end(), grad.begin());
        return value(theta);
    }

    [[nodiscard]] double base_value() const noexcept { return f0_; }

  private:
    std::vector<double> base_;
    double f0_;
    std::vector<double> grad_;
};

/// Quantum-analytic-descent model about p, with v = theta - p:
///
///   A(v) e0 + sum_k B_k(v) g_k + sum_k C_k(v) h_k + sum_{k<l} D_kl(v) H_kl
///
///   A    = prod_j cos^2(v_j/2)
///   B_k  = sin(v_k)        prod_{j!=k} cos^2(v_j/2)
///   C_k  = sin^2(v_k/2)    prod_{j!=k} cos^2(v_j/2)
///   D_kl = sin(v_k)sin(v_l) prod_{j!=k,l} cos^2(v_j/2)
///
/// with e0 = f(p), g = grad f(p), h_k = f(p + pi e_k), H = off-diagonal
/// Hessian of f at p. Exact along every coordinate axis through p and
/// second-order accurate at p.
class QadSurrogate {
  public:
    QadSurrogate(std::vector<double> base, double e0, std::vector<double> grad,
                 std::vector<double> axis_values,
                 std::vector<double> cross_hessian)
        : base_(std::move(base)), e0_(e0), grad_(std::move(grad)),
          axis_(std::move(axis_values)), cross_(std::move(cross_hessian)) {
        const std::size_t m = base_.size();
        detail::check_same_dim(grad_.size(), m, "QadSurrogate");
        detail::check_same_dim(axis_.size(), m, "QadSurrogate");
        detail::check_same_dim(cross_.size(), m * m, "QadSurrogate");
        build_terms();
    }

    [[nodiscard]] std::size_t dim() const noexcept { return base_.size(); }
    [[nodiscard]] const std::vector<double> &base_point() const noexcept {
        return base_;
    }
    [[nodiscard]] double base_value() const noexcept { return e0_; }
    [[nodiscard]] const std::vector<double> &axis_gradient() const noexcept {
        return grad_;
    }
    [[nodiscard]] const std::vector<double> &axis_values() const noexcept {
        return axis_;
    }
    /// Row-major m x m, symmetric; diagonal unused.
    [[nodiscard]] const std::vector<double> &cross_hessian() const noexcept {
        return cross_;
    }

    [[nodiscard]] double value(std::span<const double> theta) const {
        detail::check_same_dim(theta.size(), dim(), "QadSurrogate::value");
        return detail::product_sum<3>(kinds_, weights_, factors(theta), {});
    }

    [[nodiscard]] std::vector<double>
    gradient(std::span<const double> theta) const {
        std::vector<double> g(dim());
        value_and_gradient(theta, g);
        return g;
    }

    double value_and_gradient(std::span<const double> theta,
                              std::span<double> grad) const {
        detail::check_same_dim(theta.size(), dim(), "QadSurrogate::gradient");
        detail::check_same_dim(grad.size(), dim(), "QadSurrogate::gradient");
        return detail::product_sum<3>(kinds_, weights_, factors(theta), grad);
    }

  private:
    static constexpr std::uint8_t kCosSqHalf = 0;
    static constexpr std::uint8_t kSin = 1;
    static constexpr std::uint8_t kSinSqHalf = 2;

    void build_terms() {
        const std::size_t m = dim();
        auto add = [&](double w, std::size_t k, std::uint8_t kk, std::size_t l,
                       std::uint8_t kl) {
            const std::size_t row = kinds_.size();
            kinds_.resize(row + m, kCosSqHalf);
            if (k < m) {
                kinds_[row + k] = kk;
            }
            if (l < m) {
                kinds_[row + l] = kl;
            }
            weights_.push_back(w);
        };
        add(e0_, m, 0, m, 0);
        for (std::size_t k = 0; k < m; ++k) {
            add(grad_[k], k, kSin, m, 0);
        }
        for (std::size_t k = 0; k < m; ++k) {
            add(axis_[k], k, kSinSqHalf, m, 0);
        }
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t l = k + 1; l < m; ++l) {
                add(cross_[k * m + l], k, kSin, l, kSin);
            }
        }
    }

    [[nodiscard]] detail::FactorTable<3>
    factors(std::span<const double> theta) const {
        detail::FactorTable<3> table(dim());
        for (std::size_t k = 0; k < dim(); ++k) {
            const double v = theta[k] - base_[k];
            const double c = std::cos(v);
            const double s = std::sin(v);
            table.value[k] = {(1.0 + c) / 2.0, s, (1.0 - c) / 2.0};
            table.deriv[k] = {-s / 2.0, c, s / 2.0};
        }
        return table;
    }

    std::vector<double> base_;
    double e0_;
    std::vector<double> grad_;
    std::vector<double> axis_;
    std::vector<double> cross_;
    std::vector<std::uint8_t> kinds_;
    std::vector<double> weights_;
};

/// Number of objective evaluations consumed by build_qad_surrogate.
inline std::size_t qad_evaluation_count(std::size_t m) {
    return 2 * m * m + m + 1;
}

/// Consumes 1 + 2m + m + 4 C(m,2) = 2m^2 + m + 1 evaluations. Cross terms
/// use the double-shift rule
///   H_kl = [f(p + s(e_k+e_l)) - f(p + s(e_k-e_l)) - f(p - s(e_k-e_l))
///           + f(p - s(e_k+e_l))] / 4,   s = pi/2.
inline QadSurrogate build_qad_surrogate(const ObjectiveInstance &inst,
                                        std::span<const double> base) {
    const std::size_t m = base.size();
    detail::check_same_dim(m, inst.num_params(), "build_qad_surrogate");
    if (m == 0) {
        throw std::invalid_argument("build_qad_surrogate: need m >= 1");
    }
    constexpr double half_pi = std::numbers::pi / 2.0;
    std::vector<double> point(base.begin(), base.end());
    const double e0 = inst(point);
    std::vector<double> grad = parameter_shift_gradient(inst, base);
    std::vector<double> axis(m);
    for (std::size_t k = 0; k < m; ++k) {
        point[k] = base[k] + std::numbers::pi;
        axis[k] = inst(point);
        point[k] = base[k];
    }
    std::vector<double> cross(m * m, 0.0);
    auto at = [&](std::size_t k, double sk, std::size_t l, double sl) {
        point[k] = base[k] + sk;
        point[l] = base[l] + sl;
        const double v = inst(point);
        point[k] = base[k];
        point[l] = base[l];
        return v;
    };
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = k + 1; l < m; ++l) {
            const double pp = at(k, half_pi, l, half_pi);
            const double pm = at(k, half_pi, l, -half_pi);
            const double mp = at(k, -half_pi, l, half_pi);
            const double mm = at(k, -half_pi, l, -half_pi);
            const double h = (pp - pm - mp + mm) / 4.0;
            cross[k * m + l] = h;
            cross[l * m + k] = h;
        }
    }
    return QadSurrogate(std::vector<double>(base.begin(), base.end()), e0,
                        std::move(grad), std::move(axis), std::move(cross));
}

} // namespace kdescent
