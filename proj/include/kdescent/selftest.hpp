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
 * Built-in property checks at small sizes, one verdict per property.
 */
#pragma once

#include "baselines.hpp"
#include "circuit.hpp"
#include "descent.hpp"
#include "experiments.hpp"
#include "surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace kdescent {

struct SelftestOptions {
    std::uint64_t seed = 2024;
    std::size_t n = 4; ///< at most 5
    std::size_t m = 4; ///< at most 5
    std::size_t instances = 4;
    /// Grid spacing used by the orthonormality check. Anything other than
    /// 2 pi / 3 must make that check fail.
    double grid_step = kGridStep;
};

struct Verdict {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<Verdict> verdicts;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(verdicts.begin(), verdicts.end(),
                           [](const Verdict &v) { return v.passed; });
    }
    [[nodiscard]] const Verdict *find(const std::string &name) const {
        for (const auto &v : verdicts) {
            if (v.name == name) {
                return &v;
            }
        }
        return nullptr;
    }
};

inline void print_report(std::ostream &os, const SelftestReport &r) {
    for (const auto &v : r.verdicts) {
        os << (v.passed ? "PASS " : "FAIL ") << v.name;
        if (!v.detail.empty()) {
            os << "  (" << v.detail << ')';
        }
        os << '\n';
    }
    os << (r.all_passed() ? "all properties passed" : "some properties FAILED") << '\n';
}

namespace detail {

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

/// Central differences of a scalar function.
inline std::vector<double>
fd_gradient(const std::function<double(std::span<const double>)> &f,
            std::span<const double> x, double h) {
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

/// Row-major m x m central-difference Hessian.
inline std::vector<double>
fd_hessian(const std::function<double(std::span<const double>)> &f,
           std::span<const double> x, double h) {
    const std::size_t m = x.size();
    std::vector<double> p(x.begin(), x.end());
    std::vector<double> hess(m * m);
    auto at = [&](std::size_t k, double dk, std::size_t l, double dl) {
        p[k] += dk;
        p[l] += dl;
        const double v = f(p);
        p[k] = x[k];
        p[l] = x[l];
        return v;
    };
    const double f0 = f(x);
    for (std::size_t k = 0; k < m; ++k) {
        hess[k * m + k] = (at(k, h, k, 0.0) - 2.0 * f0 + at(k, -h, k, 0.0)) / (h * h);
        for (std::size_t l = k + 1; l < m; ++l) {
            const double v = (at(k, h, l, h) - at(k, h, l, -h) - at(k, -h, l, h) +
                              at(k, -h, l, -h)) /
                             (4.0 * h * h);
            hess[k * m + l] = v;
            hess[l * m + k] = v;
        }
    }
    return hess;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, std::abs(a[i] - b[i]));
    }
    return e;
}

inline std::vector<double> uniform_point(RngStream &rng, std::size_t m, double lo,
                                         double hi) {
    std::vector<double> x(m);
    for (auto &v : x) {
        v = rng.uniform(lo, hi);
    }
    return x;
}

/// Max deviation of the shifted-kernel Gram matrix, scaled so that the
/// 2 pi / 3 grid gives the identity, from the identity.
inline double orthonormality_defect(std::size_t m, double step, RngStream &rng) {
    const std::vector<double> p = uniform_point(rng, m, -std::numbers::pi, std::numbers::pi);
    const ShiftSet full = enumerate_shifts(m, m);
    const double scale = std::pow(2.0 * std::numbers::pi / 3.0, static_cast<double>(m)) *
                         std::pow(3.0 / (2.0 * std::numbers::pi), 2.0 * static_cast<double>(m));
    std::vector<FourierForm> forms;
    for (std::size_t j = 0; j < full.size(); ++j) {
        std::vector<double> c = p;
        for (std::size_t k = 0; k < m; ++k) {
            c[k] += step * ShiftSet::code_value(full.row(j)[k]) / kGridStep;
        }
        const double w = 1.0;
        forms.push_back(fourier_of_kernel_sum({c}, std::span<const double>(&w, 1)));
    }
    double defect = 0.0;
    for (std::size_t a = 0; a < forms.size(); ++a) {
        for (std::size_t b = 0; b < forms.size(); ++b) {
            const double ip = scale * h_inner_product(forms[a], forms[b]);
            defect = std::max(defect, std::abs(ip - (a == b ? 1.0 : 0.0)));
        }
    }
    return defect;
}

} // namespace detail

/// Runs every property at the configured size. Failures (including thrown
/// exceptions) are recorded, never propagated.
inline SelftestReport run_selftest(const SelftestOptions &opt = {}) {
    SelftestReport report;
    const std::size_t n = std::clamp<std::size_t>(opt.n, 2, 5);
    const std::size_t m = std::clamp<std::size_t>(opt.m, 1, 5);

    std::vector<SampledInstance> pool;
    for (std::size_t i = 0; i < opt.instances; ++i) {
        RngStream rng = RngStream::derive(opt.seed, "selftest", i);
        pool.push_back(sample_instance(rng, n, m,
                                       i % 2 == 0 ? ObservableKind::SinglePauli
                                                  : ObservableKind::GaussianSum20));
    }
    RngStream rng = RngStream::derive(opt.seed, "selftest-points", 0);

    auto check = [&](const std::string &name, double tol,
                     const std::function<double()> &measure) {
        Verdict v{name, false, {}};
        try {
            const double err = measure();
            v.passed = err <= tol;
            v.detail = "max error " + detail::sci(err) + ", tolerance " + detail::sci(tol);
        } catch (const std::exception &e) {
            v.detail = std::string("threw: ") + e.what();
        }
        report.verdicts.push_back(std::move(v));
    };
    auto count_check = [&](const std::string &name, std::uint64_t expected,
                           const std::function<std::uint64_t()> &measure) {
        Verdict v{name, false, {}};
        try {
            const std::uint64_t got = measure();
            v.passed = got == expected;
            v.detail = "expected " + std::to_string(expected) + ", got " +
                       std::to_string(got);
        } catch (const std::exception &e) {
            v.detail = std::string("threw: ") + e.what();
        }
        report.verdicts.push_back(std::move(v));
    };
    auto fobj = [](const ObjectiveInstance &inst) {
        return [&inst](std::span<const double> x) { return inst(x); };
    };

    check("statevector norm preserved by circuits", 1e-10, [&] {
        double err = 0.0;
        for (const auto &s : pool) {
            const Statevector psi = s.instance.circuit().prepare(s.theta0);
            err = std::max(err, std::abs(psi.norm_squared() - 1.0));
        }
        return err;
    });

    check("haar su4 unitary with unit determinant", 1e-12, [&] {
        RngStream r = RngStream::derive(opt.seed, "selftest-haar", 0);
        double err = 0.0;
        for (int i = 0; i < 200; ++i) {
            err = std::max(err, unitarity_defect(sample_haar_su4(r)));
        }
        return err;
    });

    for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
        if (order > m) {
            continue;
        }
        const std::string tag = "L=" + std::to_string(order);
        check("interpolation at shifted points, " + tag, 1e-10, [&] {
            double err = 0.0;
            for (const auto &s : pool) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
                for (std::size_t j = 0; j < sur.shift_set().size(); ++j) {
                    std::vector<double> x = sur.shift_set().shift(j);
                    for (std::size_t k = 0; k < m; ++k) {
                        x[k] += s.theta0[k];
                    }
                    err = std::max(err, std::abs(sur.value(x) - sur.values()[j]));
                }
            }
            return err;
        });
        check("exact on " + std::to_string(order) + "-axis displacements, " + tag, 1e-9,
              [&] {
                  double err = 0.0;
                  for (const auto &s : pool) {
                      const KernelSurrogate sur =
                          build_surrogate(s.instance, s.theta0, order);
                      for (int t = 0; t < 10; ++t) {
                          std::vector<double> x = s.theta0;
                          const std::size_t a = rng.below(m);
                          x[a] += rng.uniform(-std::numbers::pi, std::numbers::pi);
                          if (order == 2 && m > 1) {
                              std::size_t b = rng.below(m - 1);
                              b += b >= a ? 1 : 0;
                              x[b] += rng.uniform(-std::numbers::pi, std::numbers::pi);
                          }
                          err = std::max(err, std::abs(sur.value(x) - s.instance(x)));
                      }
                  }
                  return err;
              });
        check("surrogate gradient equals parameter shift at p, " + tag, 1e-8, [&] {
            double err = 0.0;
            for (const auto &s : pool) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
                err = std::max(err, detail::max_abs_diff(
                                        sur.gradient(s.theta0),
                                        parameter_shift_gradient(s.instance, s.theta0)));
            }
            return err;
        });
    }

    if (m >= 2) {
        check("second-order contact, L=2 surrogate", 1e-4, [&] {
            double err = 0.0;
            for (const auto &s : pool) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, 2);
                err = std::max(err, detail::max_abs_diff(
                                        detail::fd_hessian(
                                            [&](std::span<const double> x) {
                                                return sur.value(x);
                                            },
                                            s.theta0, 1e-4),
                                        detail::fd_hessian(fobj(s.instance), s.theta0,
                                                           1e-4)));
            }
            return err;
        });
    }
    check("second-order contact, qad model", 1e-4, [&] {
        double err = 0.0;
        for (const auto &s : pool) {
            const QadSurrogate q = build_qad_surrogate(s.instance, s.theta0);
            err = std::max(err, detail::max_abs_diff(
                                    q.gradient(s.theta0),
                                    parameter_shift_gradient(s.instance, s.theta0)));
            err = std::max(
                err, detail::max_abs_diff(
                         detail::fd_hessian(
                             [&](std::span<const double> x) { return q.value(x); },
                             s.theta0, 1e-4),
                         detail::fd_hessian(fobj(s.instance), s.theta0, 1e-4)));
        }
        return err;
    });

    check("parameter-shift gradient matches finite differences", 1e-6, [&] {
        double err = 0.0;
        for (const auto &s : pool) {
            err = std::max(err, detail::max_abs_diff(
                                    parameter_shift_gradient(s.instance, s.theta0),
                                    detail::fd_gradient(fobj(s.instance), s.theta0,
                                                        1e-5)));
        }
        return err;
    });

    const std::size_t rm = std::min<std::size_t>(m, 4);
    check("exact reconstruction with L=m (m=" + std::to_string(rm) + ")", 1e-9, [&] {
        double err = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            RngStream r = RngStream::derive(opt.seed, "selftest-reconstruct", i);
            const SampledInstance s =
                sample_instance(r, std::min<std::size_t>(n, 4), rm,
                                ObservableKind::GaussianSum20);
            const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, rm);
            for (int t = 0; t < 50; ++t) {
                const auto x = detail::uniform_point(r, rm, -std::numbers::pi,
                                                     std::numbers::pi);
                err = std::max(err, std::abs(sur.value(x) - s.instance(x)));
            }
        }
        return err;
    });

    check("shifted kernels orthonormal (m=1,2)", 1e-10, [&] {
        return std::max(detail::orthonormality_defect(1, opt.grid_step, rng),
                        detail::orthonormality_defect(2, opt.grid_step, rng));
    });

    const auto &inst = pool.front().instance;
    const auto &p = pool.front().theta0;
    auto delta = [&](const std::function<void()> &work) {
        const auto before = inst.evaluations();
        work();
        return inst.evaluations() - before;
    };
    count_check("evaluations: parameter-shift gradient = 2m", 2 * m,
                [&] { return delta([&] { (void)parameter_shift_gradient(inst, p); }); });
    count_check("evaluations: gradient descent iteration = 2m+1", 2 * m + 1, [&] {
        return gradient_descent(inst, p, 0.1, 1).evals_per_iteration.front();
    });
    count_check("evaluations: L=1 surrogate = 2m+1", 2 * m + 1,
                [&] { return delta([&] { (void)build_surrogate(inst, p, 1); }); });
    if (m >= 2) {
        count_check("evaluations: L=2 surrogate = 2m^2+1", 2 * m * m + 1,
                    [&] { return delta([&] { (void)build_surrogate(inst, p, 2); }); });
    }
    count_check("evaluations: qad model = 2m^2+m+1", 2 * m * m + m + 1,
                [&] { return delta([&] { (void)build_qad_surrogate(inst, p); }); });

    check("fixed-k inner path length = alpha |grad f|", 1e-9, [&] {
        double err = 0.0;
        for (const auto &s : pool) {
            const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, 1);
            const double alpha = 2.5;
            const InnerResult r =
                inner_fixed_k(sur, s.theta0, 50, alpha, kDefaultEpsilon, true);
            const double target = detail::norm2(sur.gradient(s.theta0));
            err = std::max(err, std::abs(r.path_length - alpha * target));
        }
        return err;
    });

    check("normalization invariant under affine maps", 1e-12, [&] {
        const std::vector<std::vector<double>> fam = {{4.0, 2.5, 1.0}, {4.0, 3.0, -0.5}};
        std::vector<std::vector<double>> moved = fam;
        for (auto &run : moved) {
            for (auto &x : run) {
                x = 3.7 * x - 11.0;
            }
        }
        const NormalizedFamily a = normalize_family(fam);
        const NormalizedFamily b = normalize_family(moved);
        double err = 0.0;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            err = std::max(err, detail::max_abs_diff(a.runs[i], b.runs[i]));
        }
        return err;
    });

    return report;
}

} // namespace kdescent
