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
 * Benchmark harness: approximation-quality studies, gradient descent vs
 * kernel descent (L = 1), and quantum analytic descent vs kernel descent
 * (L = 2), with per-family normalization and aggregation.
 *
 * Every run draws from RngStream::derive(seed, <experiment tag>, run index),
 * so results are independent of the worker count.
 */
#pragma once

#include "baselines.hpp"
#include "circuit.hpp"
#include "descent.hpp"
#include "detail/parallel.hpp"
#include "rng.hpp"
#include "surrogate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace kdescent {

inline std::size_t default_workers() {
    return std::max(1U, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Error measures

struct ErrorTriple {
    double value = 0.0;    ///< |f - g|
    double grad_l2 = 0.0;  ///< |grad f - grad g|
    double grad_cos = 0.0; ///< 1 - <grad f, grad g> / ((|grad f|+eps)(|grad g|+eps))
};

inline ErrorTriple error_measures(double f_value, std::span<const double> f_grad,
                                  double g_value, std::span<const double> g_grad,
                                  double epsilon = kDefaultEpsilon) {
    detail::check_same_dim(f_grad.size(), g_grad.size(), "error_measures");
    double diff = 0.0;
    double dot = 0.0;
    double nf = 0.0;
    double ng = 0.0;
    for (std::size_t k = 0; k < f_grad.size(); ++k) {
        const double d = f_grad[k] - g_grad[k];
        diff += d * d;
        dot += f_grad[k] * g_grad[k];
        nf += f_grad[k] * f_grad[k];
        ng += g_grad[k] * g_grad[k];
    }
    ErrorTriple e;
    e.value = std::abs(f_value - g_value);
    e.grad_l2 = std::sqrt(diff);
    e.grad_cos = 1.0 - dot / ((std::sqrt(nf) + epsilon) * (std::sqrt(ng) + epsilon));
    return e;
}

/// Errors of a local model against the true objective at theta; costs
/// 1 + 2m objective evaluations.
template <LocalModel M>
ErrorTriple error_measures(const ObjectiveInstance &inst, const M &model,
                           std::span<const double> theta,
                           double epsilon = kDefaultEpsilon) {
    const double f = inst(theta);
    const std::vector<double> gf = parameter_shift_gradient(inst, theta);
    std::vector<double> gg(theta.size());
    const double g = model.value_and_gradient(theta, gg);
    return error_measures(f, gf, g, gg, epsilon);
}

enum class ErrorKind { Value = 0, GradL2 = 1, GradCos = 2 };

inline constexpr std::array<ErrorKind, 3> kErrorKinds = {
    ErrorKind::Value, ErrorKind::GradL2, ErrorKind::GradCos};

inline std::string error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Value: return "value";
    case ErrorKind::GradL2: return "grad_l2";
    case ErrorKind::GradCos: return "grad_cos";
    }
    return "?";
}

inline double pick(const ErrorTriple &e, ErrorKind k) {
    switch (k) {
    case ErrorKind::Value: return e.value;
    case ErrorKind::GradL2: return e.grad_l2;
    case ErrorKind::GradCos: return e.grad_cos;
    }
    return 0.0;
}

/// Exponent of the power curve fitted to each error cloud. For order L the
/// value error is O(d^{L+1}), the gradient error O(d^L) and the cosine
/// distance (quadratic in the angle) O(d^{2L}).
inline int fit_exponent(std::size_t order, ErrorKind k) {
    const int l = static_cast<int>(order);
    switch (k) {
    case ErrorKind::Value: return l + 1;
    case ErrorKind::GradL2: return l;
    case ErrorKind::GradCos: return 2 * l;
    }
    return 1;
}

// ---------------------------------------------------------------------------
// Approximation quality

struct ApproxSample {
    std::uint64_t sample_id = 0;
    double d_theta = 0.0;
    ErrorTriple kernel;
    ErrorTriple base;
};

struct ApproxConfig {
    std::size_t n = 10;
    std::size_t m = 10;
    std::size_t samples = 25000;
    std::size_t order = 1; ///< 1: kernel vs linear model; 2: kernel vs QAD
    std::uint64_t seed = 2024;
    std::size_t workers = 1;
    double displacement = 0.5; ///< theta - p uniform on [-d, d)^m
    double epsilon = kDefaultEpsilon;
};

inline ApproxSample approx_quality_sample(const ApproxConfig &cfg,
                                          std::uint64_t index) {
    RngStream rng = RngStream::derive(cfg.seed, "approx-quality", index);
    SampledInstance s = sample_instance(rng, cfg.n, cfg.m, ObservableKind::SinglePauli);
    const ObjectiveInstance &inst = s.instance;
    const std::vector<double> &p = s.theta0;
    std::vector<double> shift(cfg.m);
    for (auto &v : shift) {
        v = rng.uniform(-cfg.displacement, cfg.displacement);
    }
    std::vector<double> theta(cfg.m);
    double d2 = 0.0;
    for (std::size_t k = 0; k < cfg.m; ++k) {
        theta[k] = p[k] + shift[k];
        d2 += shift[k] * shift[k];
    }

    const KernelSurrogate kernel = build_surrogate(inst, p, cfg.order);
    const double f = inst(theta);
    const std::vector<double> gf = parameter_shift_gradient(inst, theta);

    ApproxSample out;
    out.sample_id = index;
    out.d_theta = std::sqrt(d2);
    std::vector<double> gg(cfg.m);
    {
        const double g = kernel.value_and_gradient(theta, gg);
        out.kernel = error_measures(f, gf, g, gg, cfg.epsilon);
    }
    if (cfg.order == 1) {
        const LinearModel linear(p, inst(p), parameter_shift_gradient(inst, p));
        const double g = linear.value_and_gradient(theta, gg);
        out.base = error_measures(f, gf, g, gg, cfg.epsilon);
    } else {
        const QadSurrogate qad = build_qad_surrogate(inst, p);
        const double g = qad.value_and_gradient(theta, gg);
        out.base = error_measures(f, gf, g, gg, cfg.epsilon);
    }
    return out;
}

/// One record per sample, sorted by sample index.
inline std::vector<ApproxSample> run_approx_quality(const ApproxConfig &cfg) {
    if (cfg.order != 1 && cfg.order != 2) {
        throw std::invalid_argument("run_approx_quality: L must be 1 or 2");
    }
    if (cfg.order > cfg.m) {
        throw std::invalid_argument("run_approx_quality: L must not exceed m");
    }
    std::vector<ApproxSample> out(cfg.samples);
    detail::parallel_for(cfg.samples, cfg.workers, [&](std::size_t i) {
        out[i] = approx_quality_sample(cfg, i);
    });
    return out;
}

struct Fraction {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Fraction of records where the kernel error is strictly below the
/// baseline error; ties count for the baseline.
inline Fraction win_fraction(std::span<const ApproxSample> samples, ErrorKind k) {
    if (samples.empty()) {
        return {};
    }
    std::size_t wins = 0;
    for (const auto &s : samples) {
        wins += (pick(s.kernel, k) < pick(s.base, k)) ? 1U : 0U;
    }
    const double n = static_cast<double>(samples.size());
    const double p = static_cast<double>(wins) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Least-squares c for y = c x^k: c = sum x^k y / sum x^{2k}.
inline double fit_power_curve(std::span<const Point2> points, int exponent) {
    double num = 0.0;
    double den = 0.0;
    for (const auto &p : points) {
        const double xk = std::pow(p.x, exponent);
        num += xk * p.y;
        den += xk * xk;
    }
    if (!(den > 0.0)) {
        throw std::invalid_argument("fit_power_curve: all x are zero");
    }
    return num / den;
}

/// Mean of atan2(y, x) over points not at the origin.
inline double mean_polar_angle(std::span<const Point2> points) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto &p : points) {
        if (p.x == 0.0 && p.y == 0.0) {
            continue;
        }
        sum += std::atan2(p.y, p.x);
        ++used;
    }
    if (used == 0) {
        throw std::invalid_argument("mean_polar_angle: all points at the origin");
    }
    return sum / static_cast<double>(used);
}

/// (baseline error, kernel error) pairs, the axes of the direct comparison
/// scatter plot.
inline std::vector<Point2> comparison_points(std::span<const ApproxSample> samples,
                                             ErrorKind k) {
    std::vector<Point2> pts;
    pts.reserve(samples.size());
    for (const auto &s : samples) {
        pts.push_back({pick(s.base, k), pick(s.kernel, k)});
    }
    return pts;
}

/// (d_theta, error) pairs for one side of the comparison.
inline std::vector<Point2> distance_points(std::span<const ApproxSample> samples,
                                           ErrorKind k, bool kernel_side) {
    std::vector<Point2> pts;
    pts.reserve(samples.size());
    for (const auto &s : samples) {
        pts.push_back({s.d_theta, pick(kernel_side ? s.kernel : s.base, k)});
    }
    return pts;
}

struct ApproxSummaryEntry {
    ErrorKind kind = ErrorKind::Value;
    Fraction kernel_wins;
    int exponent = 1;
    double c_kernel = 0.0;
    double c_base = 0.0;
    double mean_polar_angle = 0.0;
};

inline std::vector<ApproxSummaryEntry>
summarize_approx(std::span<const ApproxSample> samples, std::size_t order) {
    std::vector<ApproxSummaryEntry> out;
    for (const ErrorKind k : kErrorKinds) {
        ApproxSummaryEntry e;
        e.kind = k;
        e.kernel_wins = win_fraction(samples, k);
        e.exponent = fit_exponent(order, k);
        e.c_kernel = fit_power_curve(distance_points(samples, k, true), e.exponent);
        e.c_base = fit_power_curve(distance_points(samples, k, false), e.exponent);
        e.mean_polar_angle = mean_polar_angle(comparison_points(samples, k));
        out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalization and aggregation

struct NormalizedFamily {
    bool pathological = false;
    double floor = 0.0; ///< v, the family-wide minimum
    std::vector<std::vector<double>> runs;
};

/// Maps each value x to (x - v) / (f0 - v), where f0 is the shared first
/// entry and v the minimum over all sequences. Flags the family as
/// pathological when v >= f0.
inline NormalizedFamily
normalize_family(const std::vector<std::vector<double>> &sequences) {
    if (sequences.empty() || sequences.front().empty()) {
        throw std::invalid_argument("normalize_family: empty family");
    }
    const double f0 = sequences.front().front();
    double v = f0;
    for (const auto &seq : sequences) {
        if (seq.empty() || seq.front() != f0) {
            throw std::invalid_argument(
                "normalize_family: sequences must share their first value");
        }
        for (const double x : seq) {
            v = std::min(v, x);
        }
    }
    NormalizedFamily out;
    out.floor = v;
    if (!(v < f0)) {
        out.pathological = true;
        return out;
    }
    const double span = f0 - v;
    out.runs.reserve(sequences.size());
    for (const auto &seq : sequences) {
        std::vector<double> r(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
            r[i] = (seq[i] - v) / span;
        }
        r.front() = 1.0;
        out.runs.push_back(std::move(r));
    }
    return out;
}

namespace detail {

inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (const double x : xs) {
            s += x;
        }
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

} // namespace detail

struct CurveStats {
    std::vector<double> mean;
    std::vector<double> stddev; ///< population standard deviation
};

/// Componentwise mean and population standard deviation over runs, reduced
/// pairwise in run order.
inline CurveStats aggregate_runs(const std::vector<std::vector<double>> &runs) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate_runs: no runs");
    }
    const std::size_t len = runs.front().size();
    const double n = static_cast<double>(runs.size());
    CurveStats out;
    out.mean.resize(len);
    out.stddev.resize(len);
    std::vector<double> column(runs.size());
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t r = 0; r < runs.size(); ++r) {
            if (runs[r].size() != len) {
                throw std::invalid_argument("aggregate_runs: ragged runs");
            }
            column[r] = runs[r][t];
        }
        const double mean = detail::pairwise_sum(column) / n;
        for (auto &x : column) {
            x = (x - mean) * (x - mean);
        }
        out.mean[t] = mean;
        out.stddev[t] = std::sqrt(detail::pairwise_sum(column) / n);
    }
    return out;
}

struct Curve {
    Algorithm algorithm = Algorithm::GradientDescent;
    double alpha = 0.0; ///< 0 when not applicable
    CurveStats stats;
};

/// One run's traces, kept when per-run output is requested.
struct RunTraces {
    std::uint64_t run_id = 0;
    std::vector<Curve> labels; ///< algorithm/alpha only, stats unused
    std::vector<DescentTrace> traces;
};

inline constexpr std::size_t kMaxResampleAttempts = 64;

/// Stream for run `index`; attempt > 0 draws from the resampling stream.
inline RngStream run_stream(std::uint64_t seed, std::string_view tag,
                            std::uint64_t index, std::uint64_t attempt) {
    if (attempt == 0) {
        return RngStream::derive(seed, tag, index);
    }
    return RngStream::derive(seed, "resample", index).child(tag, attempt);
}

// ---------------------------------------------------------------------------
// Gradient descent vs kernel descent (L = 1)

struct DescentCompareConfig {
    std::size_t n = 8;
    std::size_t m = 8;
    std::size_t iterations = 20;
    std::size_t runs = 5000;
    std::vector<double> alphas = {7.0, 8.5, 10.0};
    std::size_t inner_steps = 100;
    std::uint64_t seed = 2024;
    std::size_t workers = 1;
    double epsilon = kDefaultEpsilon;
    bool keep_traces = false;
};

struct CompareResult {
    std::vector<Curve> curves;
    std::vector<RunTraces> traces;              ///< when keep_traces
    std::vector<std::uint64_t> resample_counts; ///< per run
    /// Per run, per curve: algorithm cost (sum of evals_per_iteration).
    std::vector<std::vector<std::uint64_t>> evals;
};

namespace detail {

struct RunOutcome {
    std::vector<std::vector<double>> normalized;
    std::vector<DescentTrace> traces;
    std::uint64_t attempts = 0;
};

template <class RunFamily>
RunOutcome run_normalized(std::uint64_t seed, std::string_view tag,
                          std::uint64_t index, RunFamily &&family) {
    for (std::uint64_t attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        RngStream rng = run_stream(seed, tag, index, attempt);
        std::vector<DescentTrace> traces = family(rng);
        std::vector<std::vector<double>> values;
        values.reserve(traces.size());
        for (const auto &t : traces) {
            values.push_back(t.objective_values);
        }
        NormalizedFamily norm = normalize_family(values);
        if (!norm.pathological) {
            return {std::move(norm.runs), std::move(traces), attempt};
        }
    }
    throw std::runtime_error("run_normalized: too many pathological families");
}

template <class RunFamily>
CompareResult compare(std::size_t runs, std::size_t workers, std::uint64_t seed,
                      std::string_view tag, std::vector<Curve> labels,
                      bool keep_traces, RunFamily &&family) {
    std::vector<RunOutcome> outcomes(runs);
    detail::parallel_for(runs, workers, [&](std::size_t i) {
        outcomes[i] = run_normalized(seed, tag, i, family);
        if (!keep_traces) {
            for (auto &t : outcomes[i].traces) {
                t.iterates.clear();
            }
        }
    });
    CompareResult result;
    result.curves = labels;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        std::vector<std::vector<double>> column;
        column.reserve(runs);
        for (const auto &o : outcomes) {
            column.push_back(o.normalized[c]);
        }
        result.curves[c].stats = aggregate_runs(column);
    }
    for (std::size_t i = 0; i < runs; ++i) {
        result.resample_counts.push_back(outcomes[i].attempts);
        std::vector<std::uint64_t> ev;
        for (const auto &t : outcomes[i].traces) {
            ev.push_back(t.total_evals);
        }
        result.evals.push_back(std::move(ev));
        if (keep_traces) {
            result.traces.push_back(
                {i, labels, std::move(outcomes[i].traces)});
        }
    }
    return result;
}

} // namespace detail

/// Per run: one single-Pauli instance and theta0; gradient descent and
/// kernel descent (L = 1, k rescaled inner steps) at each learning rate;
/// the family of 2 x |alphas| value sequences is normalized jointly.
/// Curves are ordered gd(alpha_1..), kd(alpha_1..).
inline CompareResult run_descent_compare(const DescentCompareConfig &cfg) {
    std::vector<Curve> labels;
    for (const double a : cfg.alphas) {
        labels.push_back({Algorithm::GradientDescent, a, {}});
    }
    for (const double a : cfg.alphas) {
        labels.push_back({Algorithm::KernelDescent, a, {}});
    }
    auto family = [&](RngStream &rng) {
        SampledInstance s =
            sample_instance(rng, cfg.n, cfg.m, ObservableKind::SinglePauli);
        std::vector<DescentTrace> traces;
        for (const double a : cfg.alphas) {
            traces.push_back(
                gradient_descent(s.instance, s.theta0, a, cfg.iterations));
        }
        for (const double a : cfg.alphas) {
            DescentConfig dc;
            dc.algorithm = Algorithm::KernelDescent;
            dc.order = 1;
            dc.iterations = cfg.iterations;
            dc.learning_rate = a;
            dc.inner = FixedStepsPolicy{cfg.inner_steps, true};
            dc.epsilon = cfg.epsilon;
            traces.push_back(kernel_descent(s.instance, s.theta0, dc));
        }
        return traces;
    };
    return detail::compare(cfg.runs, cfg.workers, cfg.seed, "descent-compare",
                           std::move(labels), cfg.keep_traces, family);
}

// ---------------------------------------------------------------------------
// Quantum analytic descent vs kernel descent (L = 2)

struct QadCompareConfig {
    std::size_t n = 8;
    std::size_t m = 8;
    std::size_t iterations = 5;
    std::size_t runs = 500;
    double inner_lr = 0.01;
    std::size_t check_every = 1000;
    std::size_t cap = 10000;
    std::uint64_t seed = 2024;
    std::size_t workers = 1;
    bool keep_traces = false;
};

/// Per run: one instance with a 20-term Gaussian Pauli-sum observable and
/// theta0; QAD and kernel descent (L = 2), both with the stop-on-increase
/// inner loop. Curves are ordered qad, kd.
inline CompareResult run_qad_compare(const QadCompareConfig &cfg) {
    std::vector<Curve> labels = {{Algorithm::QuantumAnalyticDescent, 0.0, {}},
                                 {Algorithm::KernelDescent, 0.0, {}}};
    auto family = [&](RngStream &rng) {
        SampledInstance s =
            sample_instance(rng, cfg.n, cfg.m, ObservableKind::GaussianSum20);
        DescentConfig dc;
        dc.iterations = cfg.iterations;
        dc.inner = StopOnIncreasePolicy{cfg.inner_lr, cfg.check_every, cfg.cap};
        std::vector<DescentTrace> traces;
        dc.algorithm = Algorithm::QuantumAnalyticDescent;
        traces.push_back(qad_descent(s.instance, s.theta0, dc));
        dc.algorithm = Algorithm::KernelDescent;
        dc.order = 2;
        traces.push_back(kernel_descent(s.instance, s.theta0, dc));
        return traces;
    };
    return detail::compare(cfg.runs, cfg.workers, cfg.seed, "qad-compare",
                           std::move(labels), cfg.keep_traces, family);
}

} // namespace kdescent
