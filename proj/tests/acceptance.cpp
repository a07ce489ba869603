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

// Acceptance runner: one PASS/FAIL line per criterion. The reproduction
// criteria 11-13 run at reduced size by default and at full size with --full.

#include <kdescent/kdescent.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace kdescent;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 2024;

using Fn = std::function<double(std::span<const double>)>;

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &name, const std::function<Outcome()> &body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << ' ' << id << ' ' << name << "  ("
              << o.detail << "; " << std::fixed << std::setprecision(1) << secs << " s)"
              << std::defaultfloat << std::setprecision(6) << std::endl;
}

std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << x;
    return os.str();
}

Outcome within(double err, double tol) {
    return {err <= tol, "max error " + sci(err) + ", tolerance " + sci(tol)};
}

std::vector<SampledInstance> instances(std::size_t count, std::size_t n, std::size_t m,
                                       const std::string &tag) {
    std::vector<SampledInstance> out;
    for (std::size_t i = 0; i < count; ++i) {
        RngStream rng = RngStream::derive(kSeed, tag, i);
        out.push_back(sample_instance(rng, n, m, i % 2 == 0 ? ObservableKind::SinglePauli
                                                            : ObservableKind::GaussianSum20));
    }
    return out;
}

std::vector<double> displaced(std::span<const double> p, RngStream &rng, std::size_t axes) {
    std::vector<double> x(p.begin(), p.end());
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t a = 0; a < axes; ++a) {
        const std::size_t j = a + rng.below(idx.size() - a);
        std::swap(idx[a], idx[j]);
        x[idx[a]] += rng.uniform(-kPi, kPi);
    }
    return x;
}

template <class Model>
Fn as_fn(const Model &model) {
    return [&model](std::span<const double> x) { return model.value(x); };
}

Fn as_fn(const ObjectiveInstance &inst) {
    return [&inst](std::span<const double> x) { return inst(x); };
}

std::string approx_csv(const ApproxConfig &cfg) {
    std::ostringstream os;
    write_approx_csv(os, run_approx_quality(cfg));
    return os.str();
}

std::string pct(double x) { return svg::percent(x); }

// Criteria 11-13 -------------------------------------------------------------

Outcome win_fractions(std::size_t nm, std::size_t samples, bool windowed) {
    static constexpr double target[2][3] = {{0.637, 0.762, 0.713}, {0.587, 0.799, 0.785}};
    bool ok = true;
    std::ostringstream detail;
    for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
        ApproxConfig cfg;
        cfg.n = nm;
        cfg.m = nm;
        cfg.samples = samples;
        cfg.order = order;
        cfg.seed = kSeed;
        cfg.workers = default_workers();
        const auto summary = summarize_approx(run_approx_quality(cfg), order);
        detail << (order == 1 ? "vs gd" : "; vs qad");
        for (std::size_t k = 0; k < summary.size(); ++k) {
            const double w = summary[k].kernel_wins.value;
            detail << ' ' << error_kind_name(summary[k].kind) << '=' << pct(w);
            ok = ok && (windowed ? std::abs(w - target[order - 1][k]) <= 0.02 : w > 0.5);
        }
    }
    return {ok, detail.str()};
}

Outcome descent_ordering(std::size_t nm, std::size_t runs, bool full) {
    DescentCompareConfig cfg;
    cfg.n = nm;
    cfg.m = nm;
    cfg.runs = runs;
    cfg.seed = kSeed;
    cfg.workers = default_workers();
    const CompareResult r = run_descent_compare(cfg);
    double worst_kd = -1e300;
    double best_gd = 1e300;
    double best = 1e300;
    std::size_t best_idx = 0;
    std::ostringstream detail;
    for (std::size_t c = 0; c < r.curves.size(); ++c) {
        const double v = r.curves[c].stats.mean.back();
        const bool kd = r.curves[c].algorithm == Algorithm::KernelDescent;
        detail << (c ? ", " : "") << algorithm_name(r.curves[c].algorithm) << '@'
               << r.curves[c].alpha << '=' << v;
        if (kd) {
            worst_kd = std::max(worst_kd, v);
        } else {
            best_gd = std::min(best_gd, v);
        }
        if (v < best) {
            best = v;
            best_idx = c;
        }
    }
    bool ok = worst_kd < best_gd;
    if (full) {
        const Curve &b = r.curves[best_idx];
        ok = ok && b.algorithm == Algorithm::KernelDescent && b.alpha == 10.0;
    }
    return {ok, "final means " + detail.str()};
}

Outcome qad_ordering(std::size_t nm, std::size_t runs, bool every_iteration) {
    QadCompareConfig cfg;
    cfg.n = nm;
    cfg.m = nm;
    cfg.runs = runs;
    cfg.seed = kSeed;
    cfg.workers = default_workers();
    const CompareResult r = run_qad_compare(cfg);
    const auto &qad = r.curves[0].stats.mean;
    const auto &kd = r.curves[1].stats.mean;
    bool ok = kd.back() < qad.back();
    if (every_iteration) {
        for (std::size_t t = 1; t < kd.size(); ++t) {
            ok = ok && kd[t] < qad[t];
        }
    }
    std::ostringstream detail;
    detail << "qad";
    for (const double v : qad) {
        detail << ' ' << v;
    }
    detail << "; kd";
    for (const double v : kd) {
        detail << ' ' << v;
    }
    return {ok, detail.str()};
}

} // namespace

int main(int argc, char **argv) {
    bool full = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full") == 0) {
            full = true;
        } else {
            std::cerr << "usage: acceptance [--full]\n";
            return 1;
        }
    }

    const std::size_t n = 5;
    const std::size_t m = 5;
    const auto pool = instances(20, n, m, "acceptance");

    report(1, "interpolation at shifted points, L=1,2", [&] {
        double err = 0.0;
        for (const auto &s : pool) {
            for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
                for (std::size_t j = 0; j < sur.shift_set().size(); ++j) {
                    std::vector<double> x = sur.shift_set().shift(j);
                    for (std::size_t k = 0; k < m; ++k) {
                        x[k] += s.theta0[k];
                    }
                    err = std::max(err, std::abs(sur.value(x) - s.instance(x)));
                }
            }
        }
        return within(err, 1e-10);
    });

    report(2, "exact on L-axis displacements", [&] {
        RngStream rng = RngStream::derive(kSeed, "acceptance-axes", 0);
        double err = 0.0;
        for (const auto &s : pool) {
            for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
                for (int t = 0; t < 20; ++t) {
                    const auto x = displaced(s.theta0, rng, order);
                    err = std::max(err, std::abs(sur.value(x) - s.instance(x)));
                }
            }
        }
        return within(err, 1e-9);
    });

    report(3, "first- and second-order contact", [&] {
        double grad_err = 0.0;
        double hess_err = 0.0;
        for (const auto &s : pool) {
            const auto ps = parameter_shift_gradient(s.instance, s.theta0);
            const auto truth = detail::fd_hessian(as_fn(s.instance), s.theta0, 1e-3);
            for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
                grad_err = std::max(grad_err, detail::max_abs_diff(sur.gradient(s.theta0), ps));
            }
            const KernelSurrogate l2 = build_surrogate(s.instance, s.theta0, 2);
            const QadSurrogate qad = build_qad_surrogate(s.instance, s.theta0);
            grad_err = std::max(grad_err, detail::max_abs_diff(qad.gradient(s.theta0), ps));
            hess_err = std::max(hess_err, detail::max_abs_diff(
                                              detail::fd_hessian(as_fn(l2), s.theta0, 1e-3),
                                              truth));
            hess_err = std::max(hess_err, detail::max_abs_diff(
                                              detail::fd_hessian(as_fn(qad), s.theta0, 1e-3),
                                              truth));
        }
        return Outcome{grad_err <= 1e-8 && hess_err <= 1e-4,
                       "gradient " + sci(grad_err) + " (tol 1e-08), hessian " +
                           sci(hess_err) + " (tol 1e-04)"};
    });

    report(4, "exact reconstruction with L=m", [&] {
        double err = 0.0;
        for (std::size_t size = 2; size <= 4; ++size) {
            for (const auto &s : instances(3, size, size, "acceptance-reconstruct")) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, size);
                RngStream rng = RngStream::derive(kSeed, "acceptance-reconstruct-x", size);
                for (int t = 0; t < 100; ++t) {
                    const auto x = detail::uniform_point(rng, size, -kPi, kPi);
                    err = std::max(err, std::abs(sur.value(x) - s.instance(x)));
                }
            }
        }
        return within(err, 1e-9);
    });

    report(5, "shifted kernels orthonormal", [&] {
        RngStream rng = RngStream::derive(kSeed, "acceptance-orthonormal", 0);
        double err = 0.0;
        for (const std::size_t dim : {std::size_t{1}, std::size_t{2}}) {
            for (int t = 0; t < 3; ++t) {
                err = std::max(err, detail::orthonormality_defect(dim, kGridStep, rng));
            }
        }
        return within(err, 1e-10);
    });

    report(6, "evaluation accounting", [&] {
        std::ostringstream detail;
        bool ok = true;
        auto expect = [&](const char *what, std::size_t dim, std::uint64_t want,
                          const std::function<void()> &body, const ObjectiveInstance &inst) {
            const auto before = inst.evaluations();
            body();
            const auto got = inst.evaluations() - before;
            if (got != want) {
                ok = false;
                detail << what << " m=" << dim << ": " << got << " != " << want << "; ";
            }
        };
        for (std::size_t dim = 1; dim <= 6; ++dim) {
            const auto s = instances(1, 3, dim, "acceptance-evals").front();
            const auto &inst = s.instance;
            const auto &p = s.theta0;
            expect("gradient", dim, 2 * dim, [&] { (void)parameter_shift_gradient(inst, p); },
                   inst);
            const auto gd = gradient_descent(inst, p, 0.1, 3);
            for (const auto e : gd.evals_per_iteration) {
                if (e != 2 * dim + 1) {
                    ok = false;
                    detail << "gd iteration m=" << dim << ": " << e << "; ";
                }
            }
            for (std::size_t order = 1; order <= std::min<std::size_t>(dim, 3); ++order) {
                expect("surrogate", dim, shift_count(dim, order),
                       [&] { (void)build_surrogate(inst, p, order); }, inst);
            }
            ok = ok && shift_count(dim, 1) == 2 * dim + 1;
            ok = ok && shift_count(dim, 2) == 2 * dim * dim + 1;
            expect("qad", dim, 2 * dim * dim + dim + 1,
                   [&] { (void)build_qad_surrogate(inst, p); }, inst);
        }
        detail << "dims 1..6 checked";
        return Outcome{ok, detail.str()};
    });

    report(7, "gradients match central differences", [&] {
        RngStream rng = RngStream::derive(kSeed, "acceptance-fd", 0);
        double err = 0.0;
        for (const auto &s : pool) {
            const auto x = detail::uniform_point(rng, m, -kPi, kPi);
            err = std::max(err, detail::max_abs_diff(
                                    parameter_shift_gradient(s.instance, x),
                                    detail::fd_gradient(as_fn(s.instance), x, 1e-5)));
            for (const std::size_t order : {std::size_t{1}, std::size_t{2}}) {
                const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, order);
                err = std::max(err, detail::max_abs_diff(
                                        sur.gradient(x), detail::fd_gradient(as_fn(sur), x, 1e-5)));
            }
            const QadSurrogate qad = build_qad_surrogate(s.instance, s.theta0);
            err = std::max(err, detail::max_abs_diff(qad.gradient(x),
                                                     detail::fd_gradient(as_fn(qad), x, 1e-5)));
        }
        return within(err, 1e-6);
    });

    report(8, "fixed-k inner path length", [&] {
        RngStream rng = RngStream::derive(kSeed, "acceptance-path", 0);
        double err = 0.0;
        for (const auto &s : pool) {
            const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, 1);
            const double gn = detail::norm2(parameter_shift_gradient(s.instance, s.theta0));
            for (const std::size_t k : {std::size_t{1}, std::size_t{10}, std::size_t{100}}) {
                const double alpha = rng.uniform(0.5, 10.0);
                const InnerResult r =
                    inner_fixed_k(sur, s.theta0, k, alpha, kDefaultEpsilon);
                err = std::max(err, std::abs(r.path_length - alpha * gn));
            }
        }
        return within(err, 1e-9);
    });

    report(9, "haar su4 sampler", [&] {
        RngStream rng = RngStream::derive(kSeed, "acceptance-haar", 0);
        constexpr int draws = 100000;
        double defect = 0.0;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < draws; ++i) {
            const Matrix4 u = sample_haar_su4(rng);
            defect = std::max(defect, unitarity_defect(u));
            const double p = std::norm(u[0]);
            sum += p;
            sum_sq += p * p;
        }
        const double mean = sum / draws;
        const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
        const double z = std::abs(mean - 0.25) / se;
        return Outcome{defect <= 1e-12 && z <= 4.0,
                       "unitarity " + sci(defect) + ", E|u00|^2 = " + std::to_string(mean) +
                           " (" + std::to_string(z) + " se from 1/4)"};
    });

    report(10, "byte-identical CSVs for 1 and 8 workers", [&] {
        std::string out[2][4];
        for (int w = 0; w < 2; ++w) {
            const std::size_t workers = w == 0 ? 1 : 8;
            ApproxConfig ac;
            ac.n = 4;
            ac.m = 4;
            ac.samples = 64;
            ac.seed = kSeed;
            ac.workers = workers;
            out[w][0] = approx_csv(ac);
            DescentCompareConfig dc;
            dc.n = 4;
            dc.m = 4;
            dc.iterations = 5;
            dc.runs = 16;
            dc.inner_steps = 20;
            dc.workers = workers;
            dc.keep_traces = true;
            const CompareResult r = run_descent_compare(dc);
            std::ostringstream c;
            std::ostringstream t;
            write_curves_csv(c, r.curves, true);
            write_traces_csv(t, r.traces, 1);
            out[w][1] = c.str();
            out[w][2] = t.str();
            QadCompareConfig qc;
            qc.n = 4;
            qc.m = 4;
            qc.iterations = 2;
            qc.runs = 8;
            qc.check_every = 100;
            qc.cap = 1000;
            qc.workers = workers;
            std::ostringstream q;
            write_curves_csv(q, run_qad_compare(qc).curves, false);
            out[w][3] = q.str();
        }
        bool ok = true;
        for (int f = 0; f < 4; ++f) {
            ok = ok && out[0][f] == out[1][f] && !out[0][f].empty();
        }
        return Outcome{ok, "approx, descent curves, traces, qad curves"};
    });

    if (full) {
        report(11, "win fractions at n=m=10, N=25000",
               [] { return win_fractions(10, 25000, true); });
        report(12, "descent ordering at n=m=8, T=20, N=5000",
               [] { return descent_ordering(8, 5000, true); });
        report(13, "kd below qad at n=m=8, T=5, N=500",
               [] { return qad_ordering(8, 500, true); });
    } else {
        report(11, "win fractions above 50% (smoke, n=m=6, N=2000)",
               [] { return win_fractions(6, 2000, false); });
        report(12, "kd final means below gd (smoke, n=m=6, N=200)",
               [] { return descent_ordering(6, 200, false); });
        report(13, "kd final mean below qad (smoke, n=m=6, N=50)",
               [] { return qad_ordering(6, 50, false); });
    }

    std::cout << (failures == 0 ? "all criteria passed" : "some criteria FAILED") << '\n';
    return failures == 0 ? 0 : 1;
}
