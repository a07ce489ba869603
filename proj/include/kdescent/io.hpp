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
 * Text serialization: JSON documents for instances and surrogates, CSV for
 * traces, samples and curves. The formats are described in docs/formats.md.
 */
#pragma once

#include "circuit.hpp"
#include "descent.hpp"
#include "experiments.hpp"
#include "surrogate.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdescent {

inline constexpr const char *kInstanceFormat = "kdescent-instance/1";
inline constexpr const char *kSurrogateFormat = "kdescent-surrogate/1";

/// Shortest-safe decimal form of a double: 17 significant digits.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json instance_to_json(const ObjectiveInstance &inst,
                                       std::span<const double> theta0) {
    using nlohmann::json;
    const ParamCircuit &c = inst.circuit();
    json doc;
    doc["format"] = kInstanceFormat;
    doc["n"] = c.num_qubits();
    doc["m"] = c.num_params();
    json layers = json::array();
    for (const auto &layer : c.layers()) {
        json blocks = json::array();
        for (const auto &u : layer.blocks) {
            json entries = json::array();
            for (const Complex &z : u) {
                entries.push_back({z.real(), z.imag()});
            }
            blocks.push_back(std::move(entries));
        }
        layers.push_back({{"permutation", layer.permutation},
                          {"blocks", std::move(blocks)}});
    }
    doc["layers"] = std::move(layers);
    json gens = json::array();
    for (const auto &g : c.generators()) {
        gens.push_back(g.str());
    }
    doc["generators"] = std::move(gens);
    json terms = json::array();
    for (const auto &t : inst.observable().terms()) {
        terms.push_back({{"coeff", t.coeff}, {"pauli", t.pauli.str()}});
    }
    doc["observable"] = std::move(terms);
    doc["theta0"] = std::vector<double>(theta0.begin(), theta0.end());
    return doc;
}

inline std::string serialize_instance(const ObjectiveInstance &inst,
                                      std::span<const double> theta0) {
    return instance_to_json(inst, theta0).dump(1);
}

inline SampledInstance instance_from_json(const nlohmann::json &doc) {
    if (doc.value("format", std::string{}) != kInstanceFormat) {
        throw std::invalid_argument("instance_from_json: unknown format tag");
    }
    const auto n = doc.at("n").get<std::size_t>();
    std::vector<QvLayer> layers;
    for (const auto &jl : doc.at("layers")) {
        QvLayer layer;
        layer.permutation = jl.at("permutation").get<std::vector<std::size_t>>();
        for (const auto &jb : jl.at("blocks")) {
            if (jb.size() != 16) {
                throw std::invalid_argument("instance_from_json: block needs 16 entries");
            }
            Matrix4 u;
            for (std::size_t i = 0; i < 16; ++i) {
                u[i] = Complex{jb[i].at(0).get<double>(), jb[i].at(1).get<double>()};
            }
            layer.blocks.push_back(u);
        }
        layers.push_back(std::move(layer));
    }
    std::vector<PauliString> gens;
    for (const auto &jg : doc.at("generators")) {
        gens.push_back(PauliString::parse(jg.get<std::string>()));
    }
    std::vector<Observable::Term> terms;
    for (const auto &jt : doc.at("observable")) {
        terms.push_back({jt.at("coeff").get<double>(),
                         PauliString::parse(jt.at("pauli").get<std::string>())});
    }
    auto theta0 = doc.at("theta0").get<std::vector<double>>();
    return {ObjectiveInstance(ParamCircuit(n, std::move(layers), std::move(gens)),
                              Observable(std::move(terms))),
            std::move(theta0)};
}

inline SampledInstance deserialize_instance(const std::string &text) {
    return instance_from_json(nlohmann::json::parse(text));
}

inline nlohmann::json surrogate_to_json(const KernelSurrogate &s) {
    nlohmann::json doc;
    doc["format"] = kSurrogateFormat;
    doc["m"] = s.dim();
    doc["order"] = s.shift_set().order();
    doc["base_point"] = s.base_point();
    nlohmann::json shifts = nlohmann::json::array();
    for (std::size_t j = 0; j < s.shift_set().size(); ++j) {
        std::string word;
        for (const auto c : s.shift_set().row(j)) {
            word.push_back(c == ShiftSet::kZero ? '0' : (c == ShiftSet::kMinus ? '-' : '+'));
        }
        shifts.push_back(std::move(word));
    }
    doc["shifts"] = std::move(shifts);
    doc["values"] = s.values();
    return doc;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_approx_csv(std::ostream &os, std::span<const ApproxSample> samples) {
    os << "sample_id,d_theta,err_value_kernel,err_value_base,err_gradl2_kernel,"
          "err_gradl2_base,err_cos_kernel,err_cos_base\n";
    for (const auto &s : samples) {
        os << s.sample_id << ',' << format_double(s.d_theta) << ','
           << format_double(s.kernel.value) << ',' << format_double(s.base.value) << ','
           << format_double(s.kernel.grad_l2) << ',' << format_double(s.base.grad_l2)
           << ',' << format_double(s.kernel.grad_cos) << ','
           << format_double(s.base.grad_cos) << '\n';
    }
}

inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

inline std::vector<ApproxSample> read_approx_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw std::invalid_argument("read_approx_csv: missing header");
    }
    std::vector<ApproxSample> out;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 8) {
            throw std::invalid_argument("read_approx_csv: expected 8 columns");
        }
        ApproxSample s;
        s.sample_id = std::stoull(cells[0]);
        s.d_theta = std::stod(cells[1]);
        s.kernel.value = std::stod(cells[2]);
        s.base.value = std::stod(cells[3]);
        s.kernel.grad_l2 = std::stod(cells[4]);
        s.base.grad_l2 = std::stod(cells[5]);
        s.kernel.grad_cos = std::stod(cells[6]);
        s.base.grad_cos = std::stod(cells[7]);
        out.push_back(s);
    }
    return out;
}

/// descent_curves.csv (with_alpha) or qad_curves.csv layout.
inline void write_curves_csv(std::ostream &os, std::span<const Curve> curves,
                             bool with_alpha) {
    os << (with_alpha ? "algorithm,alpha,iteration,mean,std\n"
                      : "algorithm,iteration,mean,std\n");
    for (const auto &c : curves) {
        for (std::size_t t = 0; t < c.stats.mean.size(); ++t) {
            os << algorithm_name(c.algorithm) << ',';
            if (with_alpha) {
                os << format_double(c.alpha) << ',';
            }
            os << t << ',' << format_double(c.stats.mean[t]) << ','
               << format_double(c.stats.stddev[t]) << '\n';
        }
    }
}

inline std::vector<Curve> read_curves_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw std::invalid_argument("read_curves_csv: missing header");
    }
    const bool with_alpha = split_csv_line(line).size() == 5;
    std::vector<Curve> out;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        std::size_t i = 0;
        const std::string &name = cells.at(i++);
        const double alpha = with_alpha ? std::stod(cells.at(i++)) : 0.0;
        i++; // iteration index; rows are in order
        const double mean = std::stod(cells.at(i++));
        const double sd = std::stod(cells.at(i++));
        Algorithm a = Algorithm::GradientDescent;
        if (name == "kd") {
            a = Algorithm::KernelDescent;
        } else if (name == "qad") {
            a = Algorithm::QuantumAnalyticDescent;
        }
        if (out.empty() || out.back().algorithm != a || out.back().alpha != alpha) {
            out.push_back({a, alpha, {}});
        }
        out.back().stats.mean.push_back(mean);
        out.back().stats.stddev.push_back(sd);
    }
    return out;
}

/// One row per (run, trace, iteration); theta columns theta_0..theta_{m-1}.
inline void write_traces_csv(std::ostream &os, std::span<const RunTraces> runs,
                             std::size_t order_for_kd) {
    if (runs.empty() || runs.front().traces.empty()) {
        return;
    }
    const std::size_t m = runs.front().traces.front().iterates.front().size();
    os << "run_id,algorithm,L,alpha,iteration";
    for (std::size_t k = 0; k < m; ++k) {
        os << ",theta_" << k;
    }
    os << ",f_value,evals_cumulative\n";
    for (const auto &run : runs) {
        for (std::size_t c = 0; c < run.traces.size(); ++c) {
            const DescentTrace &tr = run.traces[c];
            const Curve &label = run.labels[c];
            const std::size_t order =
                label.algorithm == Algorithm::KernelDescent ? order_for_kd : 0;
            std::uint64_t cumulative = 0;
            for (std::size_t t = 0; t < tr.iterates.size(); ++t) {
                os << run.run_id << ',' << algorithm_name(label.algorithm) << ','
                   << order << ',' << format_double(label.alpha) << ',' << t;
                for (const double x : tr.iterates[t]) {
                    os << ',' << format_double(x);
                }
                os << ',' << format_double(tr.objective_values[t]) << ','
                   << cumulative << '\n';
                if (t < tr.evals_per_iteration.size()) {
                    cumulative += tr.evals_per_iteration[t];
                }
            }
        }
    }
}

} // namespace kdescent
