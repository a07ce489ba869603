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
// Command-line front end. Exit codes: 0 success, 1 validation error,
// 2 selftest (or reconstruction check) failure.

#include <kdescent/kdescent.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace kdescent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCheckFailed = 2;

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

template <class Writer>
void write_file(const fs::path &path, Writer &&writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    writer(out);
}

std::ifstream open_input(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path.string() +
                          " (run without --render-only first)");
    }
    return in;
}

nlohmann::json curves_json(const std::vector<Curve> &curves) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &c : curves) {
        nlohmann::json e;
        e["algorithm"] = algorithm_name(c.algorithm);
        if (c.alpha > 0.0) {
            e["alpha"] = c.alpha;
        }
        e["final_mean"] = c.stats.mean.back();
        e["final_std"] = c.stats.stddev.back();
        out.push_back(std::move(e));
    }
    return out;
}

std::string curve_key(const Curve &c) {
    std::string k = algorithm_name(c.algorithm);
    if (c.alpha > 0.0) {
        k += "@" + format_double(c.alpha);
    }
    return k;
}

int approx_quality(const RunConfig &cfg, const fs::path &dir) {
    std::vector<ApproxSample> samples;
    if (cfg.render_only) {
        auto in = open_input(dir / "approx_samples.csv");
        samples = read_approx_csv(in);
    } else {
        ApproxConfig ac;
        ac.n = cfg.n;
        ac.m = cfg.m;
        ac.samples = cfg.N;
        ac.order = cfg.L;
        ac.seed = cfg.seed;
        ac.workers = cfg.effective_workers();
        samples = run_approx_quality(ac);
        write_file(dir / "approx_samples.csv",
                   [&](std::ostream &os) { write_approx_csv(os, samples); });
    }
    const auto summary = summarize_approx(samples, cfg.L);
    nlohmann::json doc;
    doc["command"] = cfg.command;
    doc["L"] = cfg.L;
    doc["competitor"] = cfg.L == 1 ? "gd" : "qad";
    doc["samples"] = samples.size();
    for (const auto &e : summary) {
        nlohmann::json j;
        j["kernel_win_fraction"] = e.kernel_wins.value;
        j["standard_error"] = e.kernel_wins.standard_error;
        j["fit_exponent"] = e.exponent;
        j["c_kernel"] = e.c_kernel;
        j["c_base"] = e.c_base;
        j["mean_polar_angle"] = e.mean_polar_angle;
        doc["errors"][error_kind_name(e.kind)] = std::move(j);
        std::cout << error_kind_name(e.kind) << ": kernel better in "
                  << svg::percent(e.kernel_wins.value) << " (se "
                  << svg::percent(e.kernel_wins.standard_error) << ")\n";
    }
    write_text(dir / "summary.json", doc.dump(2) + "\n");
    if (cfg.emit_svg) {
        const std::string base = cfg.L == 1 ? "gradient descent" : "quantum analytic descent";
        for (const ErrorKind k : kErrorKinds) {
            const std::string name = error_kind_name(k);
            const auto pts = comparison_points(samples, k);
            write_text(dir / ("approx_" + name + "_direct.svg"),
                       svg::render_scatter_type1(pts, base + " error",
                                                 "kernel descent error", name + " error"));
            write_text(dir / ("approx_" + name + "_distance.svg"),
                       svg::render_scatter_type2(samples, k, fit_exponent(cfg.L, k),
                                                 name + " error", name + " error"));
        }
    }
    return kExitOk;
}

int compare_command(const RunConfig &cfg, const fs::path &dir) {
    const bool descent = cfg.command == "descent-compare";
    const std::string csv_name = descent ? "descent_curves.csv" : "qad_curves.csv";
    std::vector<Curve> curves;
    nlohmann::json doc;
    doc["command"] = cfg.command;
    if (cfg.render_only) {
        auto in = open_input(dir / csv_name);
        curves = read_curves_csv(in);
    } else {
        CompareResult r;
        if (descent) {
            DescentCompareConfig dc;
            dc.n = cfg.n;
            dc.m = cfg.m;
            dc.iterations = cfg.T;
            dc.runs = cfg.N;
            dc.alphas = cfg.alphas;
            dc.inner_steps = cfg.k;
            dc.seed = cfg.seed;
            dc.workers = cfg.effective_workers();
            dc.keep_traces = cfg.traces;
            r = run_descent_compare(dc);
        } else {
            QadCompareConfig qc;
            qc.n = cfg.n;
            qc.m = cfg.m;
            qc.iterations = cfg.T;
            qc.runs = cfg.N;
            qc.inner_lr = cfg.inner_lr;
            qc.check_every = cfg.check_every;
            qc.cap = cfg.cap;
            qc.seed = cfg.seed;
            qc.workers = cfg.effective_workers();
            qc.keep_traces = cfg.traces;
            r = run_qad_compare(qc);
        }
        curves = r.curves;
        write_file(dir / csv_name,
                   [&](std::ostream &os) { write_curves_csv(os, curves, descent); });
        if (cfg.traces) {
            write_file(dir / "traces.csv", [&](std::ostream &os) {
                write_traces_csv(os, r.traces, descent ? 1 : 2);
            });
        }
        std::uint64_t resamples = 0;
        for (const auto a : r.resample_counts) {
            resamples += a;
        }
        doc["resampled_families"] = resamples;
        nlohmann::json evals;
        for (std::size_t c = 0; c < curves.size(); ++c) {
            std::uint64_t total = 0;
            for (const auto &run : r.evals) {
                total += run[c];
            }
            evals[curve_key(curves[c])] =
                static_cast<double>(total) / static_cast<double>(r.evals.size());
        }
        doc["mean_evaluations_per_run"] = std::move(evals);
    }
    doc["curves"] = curves_json(curves);
    for (const auto &c : curves) {
        std::cout << curve_key(c) << ": final mean " << c.stats.mean.back() << " (std "
                  << c.stats.stddev.back() << ")\n";
    }
    if (!cfg.render_only) {
        write_text(dir / "summary.json", doc.dump(2) + "\n");
    }
    if (cfg.emit_svg) {
        write_text(dir / (descent ? "descent_curves.svg" : "qad_curves.svg"),
                   svg::render_curves(curves, descent ? "gradient descent vs kernel descent"
                                                      : "quantum analytic descent vs "
                                                        "kernel descent"));
    }
    return kExitOk;
}

int reconstruct_check(const RunConfig &cfg, const fs::path &dir) {
    RngStream rng = RngStream::derive(cfg.seed, "reconstruct-check", 0);
    SampledInstance s = sample_instance(rng, cfg.n, cfg.m, ObservableKind::GaussianSum20);
    const KernelSurrogate sur = build_surrogate(s.instance, s.theta0, cfg.L);
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.N; ++i) {
        std::vector<double> x(cfg.m);
        for (auto &v : x) {
            v = rng.uniform(-std::numbers::pi, std::numbers::pi);
        }
        worst = std::max(worst, std::abs(sur.value(x) - s.instance(x)));
    }
    write_text(dir / "instance.json", serialize_instance(s.instance, s.theta0) + "\n");
    write_text(dir / "surrogate.json", surrogate_to_json(sur).dump(1) + "\n");
    const bool exact = cfg.L == cfg.m;
    const bool ok = !exact || worst <= 1e-9;
    nlohmann::json doc;
    doc["command"] = cfg.command;
    doc["L"] = cfg.L;
    doc["points"] = cfg.N;
    doc["max_abs_error"] = worst;
    doc["exact_expected"] = exact;
    doc["passed"] = ok;
    write_text(dir / "summary.json", doc.dump(2) + "\n");
    std::cout << "max |surrogate - f| over " << cfg.N << " points: " << worst
              << (exact ? (ok ? "  PASS" : "  FAIL") : "") << '\n';
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char **argv) {
    RunConfig cfg;
    try {
        cfg = parse_config(argc, argv);
    } catch (const HelpRequested &h) {
        std::cout << h.text;
        return kExitOk;
    } catch (const ConfigError &e) {
        std::cerr << "kdescent: " << e.what() << '\n';
        return kExitInvalid;
    }

    if (cfg.command == "selftest") {
        SelftestOptions opt;
        opt.seed = cfg.seed;
        opt.n = std::min<std::size_t>(cfg.n, 5);
        opt.m = std::min<std::size_t>(cfg.m, 5);
        const SelftestReport report = run_selftest(opt);
        print_report(std::cout, report);
        return report.all_passed() ? kExitOk : kExitCheckFailed;
    }

    try {
        const fs::path dir(cfg.out_dir);
        fs::create_directories(dir);
        if (!cfg.render_only) {
            write_file(dir / kEchoFile, [&](std::ostream &os) { write_config(os, cfg); });
        }
        if (cfg.command == "approx-quality") {
            return approx_quality(cfg, dir);
        }
        if (cfg.command == "reconstruct-check") {
            return reconstruct_check(cfg, dir);
        }
        return compare_command(cfg, dir);
    } catch (const ConfigError &e) {
        std::cerr << "kdescent: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument &e) {
        std::cerr << "kdescent: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception &e) {
        std::cerr << "kdescent: error: " << e.what() << '\n';
        return kExitInvalid;
    }
}
