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

#include "oracles.hpp"

#include <kdescent/circuit.hpp>
#include <kdescent/surrogate.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

using namespace kdescent;

namespace {

constexpr double kPi = std::numbers::pi;

ObjectiveInstance cos_instance() {
    std::vector<QvLayer> layers(2, QvLayer::identity(1));
    return ObjectiveInstance(ParamCircuit(1, std::move(layers), {PauliString::parse("X")}),
                             Observable(PauliString::parse("Z")));
}

SampledInstance instance(std::uint64_t i, std::size_t n, std::size_t m,
                         ObservableKind kind = ObservableKind::GaussianSum20) {
    RngStream rng = RngStream::derive(2024, "surrogate-test", i);
    return sample_instance(rng, n, m, kind);
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

/// Count of grid points with at most L nonzero coordinates, by brute force
/// over all 3^m grid points.
std::size_t brute_force_count(std::size_t m, std::size_t order) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < m; ++k) {
        total *= 3;
    }
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t nonzero = 0;
        for (std::size_t rest = idx, k = 0; k < m; ++k, rest /= 3) {
            nonzero += rest % 3 != 0;
        }
        count += nonzero <= order;
    }
    return count;
}

} // namespace

TEST_CASE("kernel values", "[surrogate]") {
    const std::vector<double> x = {0.3, -1.2, 2.0};
    CHECK(kernel_ktilde(x, x) == Catch::Approx(1.0).margin(1e-15));
    CHECK(std::abs(kernel_ktilde(std::vector<double>{2.0 * kPi / 3.0}, std::vector<double>{0.0})) <
          1e-15);
    CHECK(kernel_ktilde(std::vector<double>{kPi / 2.0, kPi}, std::vector<double>{0.0, 0.0}) ==
          Catch::Approx(-1.0 / 9.0).margin(1e-15));
    CHECK(kernel_k(x, x) == Catch::Approx(std::pow(3.0 / (2.0 * kPi), 3)));
    CHECK_THROWS_AS(kernel_ktilde(x, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("shift enumeration", "[surrogate]") {
    CHECK(enumerate_shifts(8, 1).size() == 17);
    CHECK(enumerate_shifts(8, 2).size() == 129);
    for (std::size_t m = 1; m <= 6; ++m) {
        for (std::size_t order = 1; order <= m; ++order) {
            const ShiftSet s = enumerate_shifts(m, order);
            CHECK(s.size() == brute_force_count(m, order));
            CHECK(s.size() == shift_count(m, order));
            std::set<std::vector<double>> distinct;
            for (std::size_t j = 0; j < s.size(); ++j) {
                const auto q = s.shift(j);
                std::size_t nonzero = 0;
                for (const double v : q) {
                    nonzero += v != 0.0;
                    CHECK((v == 0.0 || std::abs(std::abs(v) - 2.0 * kPi / 3.0) < 1e-15));
                }
                CHECK(nonzero <= order);
                distinct.insert(q);
            }
            CHECK(distinct.size() == s.size());
            for (const double v : s.shift(0)) {
                CHECK(v == 0.0);
            }
        }
    }
    const ShiftSet full = enumerate_shifts(2, 2);
    CHECK(full.size() == 9);
    // Lexicographic with 0 < - < +.
    CHECK(full.shift(1) == std::vector<double>{0.0, -2.0 * kPi / 3.0});
    CHECK(full.shift(3) == std::vector<double>{-2.0 * kPi / 3.0, 0.0});
    CHECK_THROWS_AS(enumerate_shifts(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_shifts(3, 4), std::invalid_argument);
}

TEST_CASE("surrogate of cos theta is cos theta", "[surrogate]") {
    const ObjectiveInstance inst = cos_instance();
    const std::vector<double> p = {0.0};
    const KernelSurrogate s = build_surrogate(inst, p, 1);
    CHECK(inst.evaluations() == 3);
    RngStream rng(1);
    for (int i = 0; i < 20; ++i) {
        const double t = rng.uniform(-kPi, kPi);
        // Closed form from the formula with f(0)=1, f(+-2pi/3) = cos(2pi/3).
        const double closed = (1.0 + 2.0 * std::cos(t)) / 3.0 +
                              std::cos(2.0 * kPi / 3.0) *
                                  ((1.0 + 2.0 * std::cos(t + 2.0 * kPi / 3.0)) / 3.0 +
                                   (1.0 + 2.0 * std::cos(t - 2.0 * kPi / 3.0)) / 3.0);
        CHECK(std::abs(s.value(std::vector<double>{t}) - std::cos(t)) < 1e-12);
        CHECK(std::abs(closed - std::cos(t)) < 1e-12);
    }
    const FourierForm f = fourier_coefficients(s);
    CHECK(std::abs(f.coeff(std::vector<int>{1}) - Complex{0.5, 0.0}) < 1e-10);
    CHECK(std::abs(f.coeff(std::vector<int>{-1}) - Complex{0.5, 0.0}) < 1e-10);
    CHECK(std::abs(f.coeff(std::vector<int>{0})) < 1e-10);
    CHECK(std::abs(h_inner_product(f, f) - kPi) < 1e-10);
    CHECK(h_inner_product(f, FourierForm::zero(1)) == 0.0);
}

TEST_CASE("interpolation and evaluation count", "[surrogate][property]") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        const std::size_t n = 2 + i % 5;
        const std::size_t m = 2 + i % 5;
        const SampledInstance s = instance(i, n, m, i % 2 ? ObservableKind::SinglePauli
                                                          : ObservableKind::GaussianSum20);
        for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
            const auto before = s.instance.evaluations();
            const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
            CHECK(s.instance.evaluations() - before == shift_count(m, order));
            CHECK(sur.base_value() == sur.values()[0]);
            for (std::size_t j = 0; j < sur.shift_set().size(); ++j) {
                const auto x = add(s.theta0, sur.shift_set().shift(j));
                CHECK(std::abs(sur.value(x) - sur.values()[j]) < 1e-10);
                CHECK(std::abs(sur.values()[j] - s.instance(x)) < 1e-12);
            }
        }
    }
}

TEST_CASE("exact on axis subspaces", "[surrogate][property]") {
    RngStream rng(3);
    for (std::uint64_t i = 0; i < 8; ++i) {
        const std::size_t m = 2 + i % 4;
        const SampledInstance s = instance(100 + i, 3 + i % 3, m);
        const KernelSurrogate l1 = build_surrogate(s.instance, s.theta0, 1);
        const KernelSurrogate l2 = build_surrogate(s.instance, s.theta0, 2);
        for (int t = 0; t < 20; ++t) {
            const std::size_t k = rng.below(m);
            std::size_t l = rng.below(m - 1);
            l += l >= k ? 1 : 0;
            std::vector<double> x = s.theta0;
            x[k] += rng.uniform(-kPi, kPi);
            CHECK(std::abs(l1.value(x) - s.instance(x)) < 1e-9);
            x[l] += rng.uniform(-kPi, kPi);
            CHECK(std::abs(l2.value(x) - s.instance(x)) < 1e-9);
        }
    }
}

TEST_CASE("L=1 surrogate is not exact off the axes", "[surrogate]") {
    // Sanity check that the axis test above has teeth.
    RngStream rng(4);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 5; ++i) {
        const SampledInstance s = instance(200 + i, 4, 4);
        const KernelSurrogate l1 = build_surrogate(s.instance, s.theta0, 1);
        const auto x = oracle::uniform_vector(rng, 4, -kPi, kPi);
        worst = std::max(worst, std::abs(l1.value(x) - s.instance(x)));
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("order-L contact at the base point", "[surrogate][property]") {
    for (std::uint64_t i = 0; i < 6; ++i) {
        const std::size_t m = 2 + i % 4;
        const SampledInstance s = instance(300 + i, 3, m);
        auto f = [&](std::span<const double> x) { return s.instance(x); };
        const auto fd_f = oracle::fd_gradient(f, s.theta0, 1e-4);
        const KernelSurrogate l1 = build_surrogate(s.instance, s.theta0, 1);
        const KernelSurrogate l2 = build_surrogate(s.instance, s.theta0, 2);
        CHECK(oracle::max_abs_diff(l1.gradient(s.theta0), fd_f) < 1e-6);
        CHECK(oracle::max_abs_diff(l2.gradient(s.theta0), fd_f) < 1e-6);

        // Second-order central differences on both sides.
        const double h = 1e-4;
        auto hess = [&](const std::function<double(std::span<const double>)> &g,
                        std::size_t k, std::size_t l) {
            std::vector<double> x = s.theta0;
            auto at = [&](double a, double b) {
                x[k] += a;
                x[l] += b;
                const double v = g(x);
                x[k] = s.theta0[k];
                x[l] = s.theta0[l];
                return v;
            };
            if (k == l) {
                return (at(h, 0.0) - 2.0 * g(s.theta0) + at(-h, 0.0)) / (h * h);
            }
            return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
        };
        auto sv = [&](std::span<const double> x) { return l2.value(x); };
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t l = k; l < m; ++l) {
                CHECK(std::abs(hess(sv, k, l) - hess(f, k, l)) < 1e-4);
            }
        }
    }
}

TEST_CASE("surrogate gradient matches finite differences", "[surrogate][property]") {
    RngStream rng(5);
    for (std::uint64_t i = 0; i < 5; ++i) {
        const std::size_t m = 2 + i;
        const SampledInstance s = instance(400 + i, 3, m);
        const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, 2);
        auto sv = [&](std::span<const double> x) { return sur.value(x); };
        for (int t = 0; t < 10; ++t) {
            const auto x = oracle::uniform_vector(rng, m, -kPi, kPi);
            const auto g = sur.gradient(x);
            CHECK(oracle::max_abs_diff(g, oracle::fd_gradient(sv, x, 1e-5)) < 1e-6);
            std::vector<double> g2(m);
            CHECK(sur.value_and_gradient(x, g2) == Catch::Approx(sur.value(x)).margin(1e-14));
            CHECK(oracle::max_abs_diff(g, g2) < 1e-15);
        }
    }
}

TEST_CASE("constant function has a flat surrogate", "[surrogate]") {
    const std::size_t m = 3;
    const std::vector<double> p = {0.1, 0.2, 0.3};
    const ShiftSet shifts = enumerate_shifts(m, m);
    const KernelSurrogate sur(p, shifts, std::vector<double>(shifts.size(), 2.5));
    RngStream rng(6);
    for (int t = 0; t < 10; ++t) {
        const auto x = oracle::uniform_vector(rng, m, -kPi, kPi);
        CHECK(std::abs(sur.value(x) - 2.5) < 1e-10);
        for (const double g : sur.gradient(x)) {
            CHECK(std::abs(g) < 1e-10);
        }
    }
}

TEST_CASE("exact reconstruction with L = m", "[surrogate][property]") {
    RngStream rng(7);
    for (std::uint64_t i = 0; i < 6; ++i) {
        const std::size_t n = 2 + i % 3;
        const std::size_t m = 1 + i % 4;
        const SampledInstance s = instance(500 + i, n, m);
        const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, m);
        for (int t = 0; t < 100; ++t) {
            const auto x = oracle::uniform_vector(rng, m, -kPi, kPi);
            CHECK(std::abs(sur.value(x) - s.instance(x)) < 1e-9);
        }
    }
}

TEST_CASE("surrogate is 2 pi periodic", "[surrogate][property]") {
    const SampledInstance s = instance(600, 3, 4);
    const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, 2);
    RngStream rng(8);
    for (int t = 0; t < 20; ++t) {
        auto x = oracle::uniform_vector(rng, 4, -kPi, kPi);
        const double v = sur.value(x);
        x[rng.below(4)] += 2.0 * kPi;
        CHECK(std::abs(sur.value(x) - v) < 1e-12);
    }
}

TEST_CASE("gram solve reproduces the closed form", "[surrogate]") {
    RngStream rng(9);
    for (std::uint64_t i = 0; i < 4; ++i) {
        const std::size_t m = 2 + i;
        const SampledInstance s = instance(700 + i, 3, m);
        const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, 2);
        std::vector<std::vector<double>> points;
        for (std::size_t j = 0; j < sur.shift_set().size(); ++j) {
            points.push_back(add(s.theta0, sur.shift_set().shift(j)));
        }
        const GramSurrogate g = build_surrogate_general(points, sur.values());
        for (std::size_t j = 0; j < g.weights().size(); ++j) {
            CHECK(std::abs(g.weights()[j] - sur.values()[j]) < 1e-8);
        }
        for (int t = 0; t < 20; ++t) {
            const auto x = oracle::uniform_vector(rng, m, -kPi, kPi);
            CHECK(std::abs(g.value(x) - sur.value(x)) < 1e-8);
        }
    }
}

TEST_CASE("gram solve edge cases", "[surrogate]") {
    const std::vector<double> p1 = {0.4, -0.7};
    const GramSurrogate one = build_surrogate_general({p1}, std::vector<double>{1.7});
    RngStream rng(10);
    for (int t = 0; t < 10; ++t) {
        const auto x = oracle::uniform_vector(rng, 2, -kPi, kPi);
        CHECK(std::abs(one.value(x) - 1.7 * kernel_ktilde(p1, x)) < 1e-12);
    }
    // Duplicated point gives the same function.
    const std::vector<double> p2 = {1.1, 0.2};
    const std::vector<double> p3 = {-2.0, 2.5};
    const GramSurrogate plain = build_surrogate_general({p1, p2, p3}, std::vector<double>{1.0, -0.5, 0.25});
    const GramSurrogate dup =
        build_surrogate_general({p1, p2, p2, p3}, std::vector<double>{1.0, -0.5, -0.5, 0.25});
    for (int t = 0; t < 20; ++t) {
        const auto x = oracle::uniform_vector(rng, 2, -kPi, kPi);
        CHECK(std::abs(plain.value(x) - dup.value(x)) < 1e-8);
    }
    CHECK_THROWS_AS(build_surrogate_general({}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("fourier form consistency", "[surrogate]") {
    RngStream rng(11);
    for (std::uint64_t i = 0; i < 4; ++i) {
        const std::size_t m = 1 + i;
        const SampledInstance s = instance(800 + i, 3, m);
        const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, std::min<std::size_t>(m, 2));
        const FourierForm f = fourier_coefficients(sur);
        for (std::size_t idx = 0; idx < f.coefficients().size(); ++idx) {
            CHECK(std::abs(f.coefficients()[f.mirror(idx)] - std::conj(f.coefficients()[idx])) <
                  1e-12);
        }
        for (int t = 0; t < 20; ++t) {
            const auto z = oracle::uniform_vector(rng, m, -kPi, kPi);
            const Complex v = f.evaluate(z);
            CHECK(std::abs(v.imag()) < 1e-10);
            CHECK(std::abs(v.real() - sur.value(z)) < 1e-9);
        }
    }
    std::vector<std::vector<double>> centers = {std::vector<double>(9, 0.0)};
    CHECK_THROWS_AS(fourier_of_kernel_sum(centers, std::vector<double>{1.0}), std::length_error);
}

TEST_CASE("h inner product agrees with numerical integration", "[surrogate]") {
    // Independent oracle: trapezoid rule on a periodic grid is exact for
    // trigonometric polynomials of degree < grid size.
    RngStream rng(12);
    const std::size_t m = 2;
    const SampledInstance a = instance(900, 3, m);
    const SampledInstance b = instance(901, 3, m);
    const KernelSurrogate sa = build_surrogate(a.instance, a.theta0, 2);
    const KernelSurrogate sb = build_surrogate(b.instance, b.theta0, 1);
    constexpr int grid = 16;
    double integral = 0.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const std::vector<double> z = {-kPi + 2.0 * kPi * i / grid, -kPi + 2.0 * kPi * j / grid};
            integral += sa.value(z) * sb.value(z);
        }
    }
    integral *= std::pow(2.0 * kPi / grid, 2);
    CHECK(std::abs(h_inner_product(fourier_coefficients(sa), fourier_coefficients(sb)) - integral) <
          1e-10);
}

TEST_CASE("shifted kernels are orthonormal", "[surrogate]") {
    RngStream rng(13);
    for (std::size_t m = 1; m <= 2; ++m) {
        const auto p = oracle::uniform_vector(rng, m, -kPi, kPi);
        const ShiftSet grid = enumerate_shifts(m, m);
        const double scale = std::pow(2.0 * kPi / 3.0, static_cast<double>(m));
        const double kscale = std::pow(3.0 / (2.0 * kPi), static_cast<double>(m));
        std::vector<FourierForm> forms;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const std::vector<double> w = {std::sqrt(scale) * kscale};
            forms.push_back(fourier_of_kernel_sum({add(p, grid.shift(j))}, w));
        }
        for (std::size_t a = 0; a < forms.size(); ++a) {
            for (std::size_t b = 0; b < forms.size(); ++b) {
                CHECK(std::abs(h_inner_product(forms[a], forms[b]) - (a == b ? 1.0 : 0.0)) <
                      1e-10);
            }
        }
    }
}
