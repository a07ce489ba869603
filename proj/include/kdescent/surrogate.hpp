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
 * Kernel surrogates of circuit objectives.
 *
 * Objectives of the form handled here lie in the space H of real
 * trigonometric polynomials with frequencies in {-1,0,1}^m. With the inner
 * product <g1,g2> = integral over [-pi,pi]^m of g1*g2, H is a reproducing
 * kernel Hilbert space with kernel K = (3/(2 pi))^m Kt, where
 *
 *     Kt(x, z) = prod_j (1 + 2 cos(x_j - z_j)) / 3.
 *
 * Kernel sections centred on p + {-2pi/3, 0, 2pi/3}^m are orthonormal (after
 * scaling), so the projection of f onto the span of any subset of them is
 *
 *     f~(theta) = sum_j f(p + q_j) Kt(q_j, theta - p)
 *
 * with no linear solve. Restricting q_j to at most L nonzero entries gives a
 * model that is exact on every L-dimensional coordinate subspace through p
 * and agrees with f to order L at p.
 */
#pragma once

#include "circuit.hpp"
#include "detail/product_sum.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdescent {

inline constexpr double kGridStep = 2.0 * std::numbers::pi / 3.0;

namespace detail {

inline void check_same_dim(std::size_t a, std::size_t b, const char *where) {
    if (a != b) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " +
                                    std::to_string(b) + ")");
    }
}

} // namespace detail

/// prod_j (1 + 2 cos(x_j - z_j)) / 3
inline double kernel_ktilde(std::span<const double> x, std::span<const double> z) {
    detail::check_same_dim(x.size(), z.size(), "kernel_ktilde");
    double prod = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        prod *= (1.0 + 2.0 * std::cos(x[j] - z[j])) / 3.0;
    }
    return prod;
}

/// The reproducing kernel of H, (3/(2 pi))^m Kt.
inline double kernel_k(std::span<const double> x, std::span<const double> z) {
    const double scale = 3.0 / (2.0 * std::numbers::pi);
    return std::pow(scale, static_cast<double>(x.size())) * kernel_ktilde(x, z);
}

/// Number of points of {-2pi/3,0,2pi/3}^m with at most L nonzero entries:
/// sum_{k=0}^{L} 2^k C(m,k).
inline std::size_t shift_count(std::size_t m, std::size_t order) {
    std::size_t total = 0;
    std::size_t binom = 1;
    std::size_t pow2 = 1;
    for (std::size_t k = 0; k <= order && k <= m; ++k) {
        total += pow2 * binom;
        binom = binom * (m - k) / (k + 1);
        pow2 *= 2;
    }
    return total;
}

/// Grid shifts stored as codes per coordinate: 0 -> 0, 1 -> -2pi/3,
/// 2 -> +2pi/3. Rows are in lexicographic order of the codes, so the zero
/// shift comes first.
class ShiftSet {
  public:
    static constexpr std::uint8_t kZero = 0;
    static constexpr std::uint8_t kMinus = 1;
    static constexpr std::uint8_t kPlus = 2;

    ShiftSet() = default;
    ShiftSet(std::size_t m, std::size_t order, std::vector<std::uint8_t> codes)
        : m_(m), order_(order), codes_(std::move(codes)) {}

    [[nodiscard]] std::size_t dim() const noexcept { return m_; }
    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return m_ == 0 ? 0 : codes_.size() / m_;
    }
    [[nodiscard]] std::span<const std::uint8_t> codes() const noexcept {
        return codes_;
    }
    [[nodiscard]] std::span<const std::uint8_t> row(std::size_t j) const {
        return std::span<const std::uint8_t>(codes_).subspan(j * m_, m_);
    }

    static double code_value(std::uint8_t code) {
        switch (code) {
        case kMinus: return -kGridStep;
        case kPlus: return kGridStep;
        default: return 0.0;
        }
    }

    [[nodiscard]] std::vector<double> shift(std::size_t j) const {
        std::vector<double> q(m_);
        const auto r = row(j);
        for (std::size_t k = 0; k < m_; ++k) {
            q[k] = code_value(r[k]);
        }
        return q;
    }

  private:
    std::size_t m_ = 0;
    std::size_t order_ = 0;
    std::vector<std::uint8_t> codes_;
};

inline ShiftSet enumerate_shifts(std::size_t m, std::size_t order) {
    if (order < 1 || order > m) {
        throw std::invalid_argument("enumerate_shifts: need 1 <= L <= m, got L=" +
                                    std::to_string(order) +
                                    ", m=" + std::to_string(m));
    }
    std::vector<std::uint8_t> codes;
    codes.reserve(shift_count(m, order) * m);
    std::vector<std::uint8_t> word(m, ShiftSet::kZero);
    // Depth-first over coordinates, trying codes in the order 0, -, +.
    auto recurse = [&](auto &&self, std::size_t k, std::size_t nonzero) -> void {
        if (k == m) {
            codes.insert(codes.end(), word.begin(), word.end());
            return;
        }
        for (std::uint8_t c = 0; c < 3; ++c) {
            const std::size_t nz = nonzero + (c != ShiftSet::kZero ? 1U : 0U);
            if (nz > order) {
                continue;
            }
            word[k] = c;
            self(self, k + 1, nz);
        }
        word[k] = ShiftSet::kZero;
    };
    recurse(recurse, 0, 0);
    return ShiftSet(m, order, std::move(codes));
}

namespace detail {

/// Kernel factors (1 + 2 cos(d - q)) / 3 and their d-derivatives for
/// q in {0, -2pi/3, +2pi/3}, with d = theta - base.
inline FactorTable<3> kernel_factors(std::span<const double> theta,
                                     std::span<const double> base) {
    constexpr double half_sqrt3 = 0.86602540378443864676; // sin(2pi/3)
    FactorTable<3> table(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double d = theta[k] - base[k];
        const double c = std::cos(d);
        const double s = std::sin(d);
        // cos(d + 2pi/3), cos(d - 2pi/3) and the matching sines.
        const double c_minus = -0.5 * c - half_sqrt3 * s;
        const double c_plus = -0.5 * c + half_sqrt3 * s;
        const double s_minus = -0.5 * s + half_sqrt3 * c;
        const double s_plus = -0.5 * s - half_sqrt3 * c;
        table.value[k] = {(1.0 + 2.0 * c) / 3.0, (1.0 + 2.0 * c_minus) / 3.0,
                          (1.0 + 2.0 * c_plus) / 3.0};
        table.deriv[k] = {-2.0 * s / 3.0, -2.0 * s_minus / 3.0,
                          -2.0 * s_plus / 3.0};
    }
    return table;
}

} // namespace detail

/// f~(theta) = sum_j values[j] * Kt(q_j, theta - p). Immutable.
class KernelSurrogate {
  public:
    KernelSurrogate(std::vector<double> base, ShiftSet shifts,
                    std::vector<double> values)
        : base_(std::move(base)), shifts_(std::move(shifts)),
          values_(std::move(values)) {
        detail::check_same_dim(base_.size(), shifts_.dim(), "KernelSurrogate");
        detail::check_same_dim(values_.size(), shifts_.size(), "KernelSurrogate");
    }

    [[nodiscard]] std::size_t dim() const noexcept { return base_.size(); }
    [[nodiscard]] const std::vector<double> &base_point() const noexcept {
        return base_;
    }
    [[nodiscard]] const ShiftSet &shift_set() const noexcept { return shifts_; }
    [[nodiscard]] const std::vector<double> &values() const noexcept {
        return values_;
    }
    /// f(p), read from the zero shift.
    [[nodiscard]] double base_value() const { return values_.front(); }

    [[nodiscard]] double value(std::span<const double> theta) const {
        detail::check_same_dim(theta.size(), dim(), "KernelSurrogate::value");
        const auto table = detail::kernel_factors(theta, base_);
        return detail::product_sum<3>(shifts_.codes(), values_, table, {});
    }

    [[nodiscard]] std::vector<double>
    gradient(std::span<const double> theta) const {
        std::vector<double> g(dim());
        value_and_gradient(theta, g);
        return g;
    }

    double value_and_gradient(std::span<const double> theta,
                              std::span<double> grad) const {
        detail::check_same_dim(theta.size(), dim(), "KernelSurrogate::gradient");
        detail::check_same_dim(grad.size(), dim(), "KernelSurrogate::gradient");
        const auto table = detail::kernel_factors(theta, base_);
        return detail::product_sum<3>(shifts_.codes(), values_, table, grad);
    }

  private:
    std::vector<double> base_;
    ShiftSet shifts_;
    std::vector<double> values_;
};

/// Evaluates f at p + q_j for every shift of order L (exactly D evaluations).
inline KernelSurrogate build_surrogate(const ObjectiveInstance &inst,
                                       std::span<const double> base,
                                       std::size_t order) {
    detail::check_same_dim(base.size(), inst.num_params(), "build_surrogate");
    ShiftSet shifts = enumerate_shifts(base.size(), order);
    std::vector<double> values(shifts.size());
    std::vector<double> point(base.size());
    for (std::size_t j = 0; j < shifts.size(); ++j) {
        const auto r = shifts.row(j);
        for (std::size_t k = 0; k < point.size(); ++k) {
            point[k] = base[k] + ShiftSet::code_value(r[k]);
        }
        values[j] = inst(point);
    }
    return KernelSurrogate(std::vector<double>(base.begin(), base.end()),
                           std::move(shifts), std::move(values));
}

// ---------------------------------------------------------------------------
// Projection onto the span of kernel sections at arbitrary points.

/// f~(theta) = sum_j eta_j Kt(c_j, theta).
class GramSurrogate {
  public:
    GramSurrogate(std::vector<std::vector<double>> centers,
                  std::vector<double> weights)
        : centers_(std::move(centers)), weights_(std::move(weights)) {}

    [[nodiscard]] const std::vector<std::vector<double>> &centers() const noexcept {
        return centers_;
    }
    [[nodiscard]] const std::vector<double> &weights() const noexcept {
        return weights_;
    }

    [[nodiscard]] double value(std::span<const double> theta) const {
        double total = 0.0;
        for (std::size_t j = 0; j < centers_.size(); ++j) {
            total += weights_[j] * kernel_ktilde(centers_[j], theta);
        }
        return total;
    }

  private:
    std::vector<std::vector<double>> centers_;
    std::vector<double> weights_;
};

inline constexpr double kPinvRelativeThreshold = 1e-10;

/// Solves (Kt(p_i, p_j)) eta = values by symmetric eigendecomposition,
/// dropping modes below 1e-10 of the largest eigenvalue (minimum-norm
/// solution). The resulting function does not depend on which solution is
/// picked.
inline GramSurrogate
build_surrogate_general(std::vector<std::vector<double>> points,
                        std::span<const double> values) {
    const auto d = static_cast<Eigen::Index>(points.size());
    if (d == 0) {
        throw std::invalid_argument("build_surrogate_general: no points");
    }
    detail::check_same_dim(points.size(), values.size(),
                           "build_surrogate_general");
    Eigen::MatrixXd gram(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        detail::check_same_dim(points[static_cast<std::size_t>(i)].size(),
                               points.front().size(), "build_surrogate_general");
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double kij = kernel_ktilde(points[static_cast<std::size_t>(i)],
                                             points[static_cast<std::size_t>(j)]);
            gram(i, j) = kij;
            gram(j, i) = kij;
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const Eigen::VectorXd &lambda = eig.eigenvalues();
    const double largest = lambda.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (std::abs(lambda(i)) > kPinvRelativeThreshold * largest) {
            inv(i) = 1.0 / lambda(i);
        }
    }
    const Eigen::Map<const Eigen::VectorXd> y(values.data(), d);
    const Eigen::MatrixXd &v = eig.eigenvectors();
    const Eigen::VectorXd eta = v * inv.asDiagonal() * (v.transpose() * y);
    return GramSurrogate(std::move(points),
                         std::vector<double>(eta.data(), eta.data() + d));
}

// ---------------------------------------------------------------------------
// Fourier-side representation (small m only).

inline constexpr std::size_t kMaxFourierDim = 8;

/// g(z) = sum_{w in {-1,0,1}^m} c_w exp(i w.z). Coefficient index is
/// sum_k (w_k + 1) 3^k.
class FourierForm {
  public:
    FourierForm(std::size_t m, std::vector<Complex> coeffs)
        : m_(m), coeffs_(std::move(coeffs)) {}

    static FourierForm zero(std::size_t m) {
        return FourierForm(m, std::vector<Complex>(pow3(m)));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return m_; }
    [[nodiscard]] const std::vector<Complex> &coefficients() const noexcept {
        return coeffs_;
    }

    [[nodiscard]] Complex coeff(std::span<const int> omega) const {
        return coeffs_[index_of(omega)];
    }

    [[nodiscard]] std::size_t index_of(std::span<const int> omega) const {
        detail::check_same_dim(omega.size(), m_, "FourierForm");
        std::size_t idx = 0;
        std::size_t stride = 1;
        for (const int w : omega) {
            idx += static_cast<std::size_t>(w + 1) * stride;
            stride *= 3;
        }
        return idx;
    }

    /// Index of -omega.
    [[nodiscard]] std::size_t mirror(std::size_t idx) const noexcept {
        std::size_t out = 0;
        std::size_t stride = 1;
        for (std::size_t k = 0; k < m_; ++k) {
            const std::size_t digit = idx % 3;
            idx /= 3;
            out += (2 - digit) * stride;
            stride *= 3;
        }
        return out;
    }

    [[nodiscard]] Complex evaluate(std::span<const double> z) const {
        detail::check_same_dim(z.size(), m_, "FourierForm::evaluate");
        Complex total{0.0, 0.0};
        for (std::size_t idx = 0; idx < coeffs_.size(); ++idx) {
            double phase = 0.0;
            std::size_t rest = idx;
            for (std::size_t k = 0; k < m_; ++k) {
                phase += (static_cast<double>(rest % 3) - 1.0) * z[k];
                rest /= 3;
            }
            total += coeffs_[idx] * std::polar(1.0, phase);
        }
        return total;
    }

    static std::size_t pow3(std::size_t m) {
        std::size_t p = 1;
        for (std::size_t k = 0; k < m; ++k) {
            p *= 3;
        }
        return p;
    }

  private:
    std::size_t m_;
    std::vector<Complex> coeffs_;
};

/// Fourier coefficients of sum_j w_j Kt(c_j, .). Each kernel factor expands
/// as (1/3)(1 + e^{i(z-c)} + e^{-i(z-c)}).
inline FourierForm
fourier_of_kernel_sum(const std::vector<std::vector<double>> &centers,
                      std::span<const double> weights) {
    if (centers.empty()) {
        throw std::invalid_argument("fourier_of_kernel_sum: no centers");
    }
    const std::size_t m = centers.front().size();
    if (m > kMaxFourierDim) {
        throw std::length_error("fourier_of_kernel_sum: m = " +
                                std::to_string(m) + " exceeds the cap of " +
                                std::to_string(kMaxFourierDim));
    }
    detail::check_same_dim(centers.size(), weights.size(),
                           "fourier_of_kernel_sum");
    FourierForm out = FourierForm::zero(m);
    std::vector<Complex> term;
    std::vector<Complex> next;
    std::vector<Complex> acc(out.coefficients().size());
    for (std::size_t j = 0; j < centers.size(); ++j) {
        detail::check_same_dim(centers[j].size(), m, "fourier_of_kernel_sum");
        term.assign(1, Complex{weights[j], 0.0});
        for (std::size_t k = 0; k < m; ++k) {
            const double c = centers[j][k];
            // digit 0 -> w=-1, 1 -> w=0, 2 -> w=+1; factor e^{-i w c}/3.
            const std::array<Complex, 3> f = {std::polar(1.0 / 3.0, c),
                                              Complex{1.0 / 3.0, 0.0},
                                              std::polar(1.0 / 3.0, -c)};
            next.resize(term.size() * 3);
            for (std::size_t d = 0; d < 3; ++d) {
                for (std::size_t i = 0; i < term.size(); ++i) {
                    next[d * term.size() + i] = term[i] * f[d];
                }
            }
            term.swap(next);
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += term[i];
        }
    }
    return FourierForm(m, std::move(acc));
}

inline FourierForm fourier_coefficients(const KernelSurrogate &s) {
    const std::size_t d = s.shift_set().size();
    std::vector<std::vector<double>> centers(d);
    for (std::size_t j = 0; j < d; ++j) {
        centers[j] = s.shift_set().shift(j);
        for (std::size_t k = 0; k < s.dim(); ++k) {
            centers[j][k] += s.base_point()[k];
        }
    }
    return fourier_of_kernel_sum(centers, s.values());
}

/// <a, b>_H = (2 pi)^m sum_w c_w(a) conj(c_w(b)).
inline double h_inner_product(const FourierForm &a, const FourierForm &b) {
    detail::check_same_dim(a.dim(), b.dim(), "h_inner_product");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
        s += a.coefficients()[i] * std::conj(b.coefficients()[i]);
    }
    return std::pow(2.0 * std::numbers::pi, static_cast<double>(a.dim())) *
           s.real();
}

} // namespace kdescent
