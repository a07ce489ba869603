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
 * Outer optimization loops: gradient descent, kernel descent and quantum
 * analytic descent.
 *
 * Each outer iteration builds a local model of f around theta_t (consuming
 * objective evaluations) and then runs a purely classical inner loop on the
 * model to produce theta_{t+1}. Two inner loops are provided:
 *
 *  - fixed steps: k gradient steps on the model, each rescaled so the whole
 *    polyline has the length of the corresponding gradient-descent step;
 *  - stop on true increase: plain gradient steps on the model, checking the
 *    true objective every `check_every` steps and returning the best point
 *    seen once it goes up (or the step cap is hit).
 */
#pragma once

#include "baselines.hpp"
#include "circuit.hpp"
#include "surrogate.hpp"

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kdescent {

/// Anything with value(theta) and value_and_gradient(theta, grad).
template <class M>
concept LocalModel = requires(const M &model, std::span<const double> theta,
                              std::span<double> grad) {
    { model.value(theta) } -> std::convertible_to<double>;
    { model.value_and_gradient(theta, grad) } -> std::convertible_to<double>;
};

inline constexpr double kDefaultEpsilon = 1e-12;

enum class Algorithm { GradientDescent, KernelDescent, QuantumAnalyticDescent };

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::GradientDescent: return "gd";
    case Algorithm::KernelDescent: return "kd";
    case Algorithm::QuantumAnalyticDescent: return "qad";
    }
    return "?";
}

struct FixedStepsPolicy {
    std::size_t steps = 100;
    bool rescale = true;
};

struct StopOnIncreasePolicy {
    double learning_rate = 0.01;
    std::size_t check_every = 1000;
    std::size_t cap = 10000;
};

using InnerPolicy = std::variant<FixedStepsPolicy, StopOnIncreasePolicy>;

struct DescentConfig {
    Algorithm algorithm = Algorithm::KernelDescent;
    std::size_t order = 1;          ///< surrogate order L (kernel descent)
    std::size_t iterations = 20;    ///< T
    double learning_rate = 1.0;     ///< alpha
    InnerPolicy inner = FixedStepsPolicy{};
    double epsilon = kDefaultEpsilon;

    void validate() const {
        if (iterations < 1) {
            throw std::invalid_argument("DescentConfig: T must be >= 1");
        }
        if (!(epsilon > 0.0)) {
            throw std::invalid_argument("DescentConfig: epsilon must be > 0");
        }
        if (algorithm == Algorithm::KernelDescent && order < 1) {
            throw std::invalid_argument("DescentConfig: L must be >= 1");
        }
        if (const auto *fixed = std::get_if<FixedStepsPolicy>(&inner)) {
            if (fixed->steps < 1) {
                throw std::invalid_argument("DescentConfig: k must be >= 1");
            }
        } else {
            const auto &stop = std::get<StopOnIncreasePolicy>(inner);
            if (stop.check_every < 1 || stop.check_every > stop.cap ||
                stop.cap % stop.check_every != 0) {
                throw std::invalid_argument(
                    "DescentConfig: check_every must divide cap");
            }
        }
    }
};

struct DescentTrace {
    std::vector<std::vector<double>> iterates;         ///< theta_0..theta_T
    std::vector<double> objective_values;              ///< f(theta_t)
    std::vector<std::uint64_t> evals_per_iteration;    ///< T entries
    std::vector<double> inner_path_length;             ///< T entries
    std::uint64_t total_evals = 0;   ///< sum of evals_per_iteration
    std::uint64_t readout_evals = 0; ///< evaluation of f(theta_T)
};

struct InnerResult {
    std::vector<double> point;
    double path_length = 0.0;
    std::uint64_t true_evals = 0;
};

namespace detail {

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (const double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

} // namespace detail

/// k gradient steps on the model starting at theta_t, no objective
/// evaluations. With rescaling each step is
///   x <- x - (alpha/k) * target * grad(x) / (|grad(x)| + eps),
/// target = |grad model(theta_t)|, so the path length is alpha * target up
/// to the eps guard. Without rescaling the steps are x <- x - (alpha/k) grad(x).
template <LocalModel M>
InnerResult inner_fixed_k(const M &model, std::span<const double> theta_t,
                          std::size_t k, double alpha, double epsilon,
                          bool rescale = true) {
    if (k < 1) {
        throw std::invalid_argument("inner_fixed_k: k must be >= 1");
    }
    const std::size_t m = theta_t.size();
    InnerResult out;
    out.point.assign(theta_t.begin(), theta_t.end());
    std::vector<double> g(m);
    model.value_and_gradient(out.point, g);
    const double target = detail::norm2(g);
    const double step = alpha / static_cast<double>(k);
    for (std::size_t s = 0; s < k; ++s) {
        if (s > 0) {
            model.value_and_gradient(out.point, g);
        }
        const double gn = detail::norm2(g);
        const double scale = rescale ? step * target / (gn + epsilon) : step;
        for (std::size_t i = 0; i < m; ++i) {
            out.point[i] -= scale * g[i];
        }
        out.path_length += scale * gn;
    }
    return out;
}

/// Plain gradient descent on the model with the given rate. The true
/// objective is evaluated at steps check_every, 2*check_every, ...,
/// cap - check_every; the loop stops at the first checkpoint whose value
/// exceeds the previous one (the start counts as checkpoint zero with value
/// f_start) or when cap steps are done. Returns the best point seen.
template <LocalModel M>
InnerResult inner_stop_on_true_increase(const M &model,
                                        const ObjectiveInstance &inst,
                                        std::span<const double> theta_t,
                                        double f_start, double learning_rate,
                                        std::size_t check_every,
                                        std::size_t cap) {
    if (check_every < 1 || check_every > cap || cap % check_every != 0) {
        throw std::invalid_argument(
            "inner_stop_on_true_increase: check_every must divide cap");
    }
    const std::size_t m = theta_t.size();
    std::vector<double> x(theta_t.begin(), theta_t.end());
    std::vector<double> g(m);
    InnerResult best;
    best.point = x;
    double best_value = f_start;
    double previous = f_start;
    double travelled = 0.0;
    for (std::size_t step = 1; step <= cap; ++step) {
        model.value_and_gradient(x, g);
        for (std::size_t i = 0; i < m; ++i) {
            x[i] -= learning_rate * g[i];
        }
        travelled += learning_rate * detail::norm2(g);
        if (step % check_every != 0 || step + check_every > cap) {
            continue;
        }
        const double value = inst(x);
        ++best.true_evals;
        if (value < best_value) {
            best_value = value;
            best.point = x;
            best.path_length = travelled;
        }
        if (value > previous) {
            break;
        }
        previous = value;
    }
    return best;
}

namespace detail {

template <LocalModel M>
InnerResult run_inner(const M &model, const ObjectiveInstance &inst,
                      std::span<const double> theta_t, double f_t,
                      const DescentConfig &cfg) {
    if (const auto *fixed = std::get_if<FixedStepsPolicy>(&cfg.inner)) {
        return inner_fixed_k(model, theta_t, fixed->steps, cfg.learning_rate,
                             cfg.epsilon, fixed->rescale);
    }
    const auto &stop = std::get<StopOnIncreasePolicy>(cfg.inner);
    return inner_stop_on_true_increase(model, inst, theta_t, f_t,
                                       stop.learning_rate, stop.check_every,
                                       stop.cap);
}

inline void finish_trace(DescentTrace &trace, const ObjectiveInstance &inst) {
    const auto before = inst.evaluations();
    trace.objective_values.push_back(inst(trace.iterates.back()));
    trace.readout_evals = inst.evaluations() - before;
    trace.total_evals = 0;
    for (const auto e : trace.evals_per_iteration) {
        trace.total_evals += e;
    }
}

} // namespace detail

/// theta_{t+1} = theta_t - alpha grad f(theta_t); 2m + 1 evaluations per
/// iteration (gradient plus value tracking).
inline DescentTrace gradient_descent(const ObjectiveInstance &inst,
                                     std::span<const double> theta0,
                                     double alpha, std::size_t iterations) {
    if (iterations < 1) {
        throw std::invalid_argument("gradient_descent: T must be >= 1");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("gradient_descent: alpha must be > 0");
    }
    DescentTrace trace;
    trace.iterates.emplace_back(theta0.begin(), theta0.end());
    for (std::size_t t = 0; t < iterations; ++t) {
        const auto before = inst.evaluations();
        const std::vector<double> &x = trace.iterates.back();
        trace.objective_values.push_back(inst(x));
        const std::vector<double> g = parameter_shift_gradient(inst, x);
        std::vector<double> next = x;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] -= alpha * g[i];
        }
        trace.inner_path_length.push_back(alpha * detail::norm2(g));
        trace.evals_per_iteration.push_back(inst.evaluations() - before);
        trace.iterates.push_back(std::move(next));
    }
    detail::finish_trace(trace, inst);
    return trace;
}

/// Kernel descent: per iteration, D evaluations for the order-L surrogate at
/// theta_t followed by the configured inner loop on it.
inline DescentTrace kernel_descent(const ObjectiveInstance &inst,
                                   std::span<const double> theta0,
                                   const DescentConfig &cfg) {
    cfg.validate();
    DescentTrace trace;
    trace.iterates.emplace_back(theta0.begin(), theta0.end());
    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        const auto before = inst.evaluations();
        const std::vector<double> &x = trace.iterates.back();
        const KernelSurrogate surr = build_surrogate(inst, x, cfg.order);
        trace.objective_values.push_back(surr.base_value());
        InnerResult r = detail::run_inner(surr, inst, x, surr.base_value(), cfg);
        trace.inner_path_length.push_back(r.path_length);
        trace.evals_per_iteration.push_back(inst.evaluations() - before);
        trace.iterates.push_back(std::move(r.point));
    }
    detail::finish_trace(trace, inst);
    return trace;
}

/// Quantum analytic descent: per iteration, 2m^2 + m + 1 evaluations for the
/// QAD model followed by the configured inner loop on it.
inline DescentTrace qad_descent(const ObjectiveInstance &inst,
                                std::span<const double> theta0,
                                const DescentConfig &cfg) {
    cfg.validate();
    DescentTrace trace;
    trace.iterates.emplace_back(theta0.begin(), theta0.end());
    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        const auto before = inst.evaluations();
        const std::vector<double> &x = trace.iterates.back();
        const QadSurrogate model = build_qad_surrogate(inst, x);
        trace.objective_values.push_back(model.base_value());
        InnerResult r = detail::run_inner(model, inst, x, model.base_value(), cfg);
        trace.inner_path_length.push_back(r.path_length);
        trace.evals_per_iteration.push_back(inst.evaluations() - before);
        trace.iterates.push_back(std::move(r.point));
    }
    detail::finish_trace(trace, inst);
    return trace;
}

inline DescentTrace run_descent(const ObjectiveInstance &inst,
                                std::span<const double> theta0,
                                const DescentConfig &cfg) {
    cfg.validate();
    switch (cfg.algorithm) {
    case Algorithm::GradientDescent:
        return gradient_descent(inst, theta0, cfg.learning_rate, cfg.iterations);
    case Algorithm::KernelDescent:
        return kernel_descent(inst, theta0, cfg);
    case Algorithm::QuantumAnalyticDescent:
        return qad_descent(inst, theta0, cfg);
    }
    throw std::invalid_argument("run_descent: unknown algorithm");
}

} // namespace kdescent
