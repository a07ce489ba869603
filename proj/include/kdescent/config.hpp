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
 * Run configuration for the command-line front end.
 *
 * Precedence: command-line flags, then a flat `key = value` config file,
 * then the per-command defaults. The environment variable KDESCENT_OUT_DIR
 * replaces the default output directory.
 */
#pragma once

#include "circuit.hpp"
#include "experiments.hpp"
#include "io.hpp"
#include "simulator.hpp"
#include "surrogate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdescent {

/// Validation failure in flags, file contents or value ranges.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char *kOutDirEnv = "KDESCENT_OUT_DIR";
inline constexpr const char *kDefaultOutDir = "kdescent_out";
inline constexpr const char *kEchoFile = "config.txt";

inline const std::vector<std::string> &known_commands() {
    static const std::vector<std::string> c = {"approx-quality", "descent-compare",
                                               "qad-compare", "reconstruct-check",
                                               "selftest"};
    return c;
}

struct RunConfig {
    std::string command;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t N = 0; ///< samples or runs
    std::size_t T = 0; ///< outer iterations
    std::size_t L = 1;
    std::vector<double> alphas;
    std::size_t k = 100;
    double inner_lr = 0.01;
    std::size_t check_every = 1000;
    std::size_t cap = 10000;
    std::uint64_t seed = 2024;
    std::string out_dir;
    bool emit_svg = false;
    bool traces = false;
    std::size_t workers = 0; ///< 0: one per hardware thread
    bool render_only = false; ///< re-render SVGs from CSVs in out_dir

    [[nodiscard]] std::size_t effective_workers() const {
        return workers == 0 ? default_workers() : workers;
    }
};

inline RunConfig default_config(const std::string &command) {
    RunConfig c;
    c.command = command;
    const char *env = std::getenv(kOutDirEnv);
    c.out_dir = (env != nullptr && *env != '\0') ? env : kDefaultOutDir;
    if (command == "approx-quality") {
        c.n = 10;
        c.m = 10;
        c.N = 25000;
        c.L = 1;
    } else if (command == "descent-compare") {
        c.n = 8;
        c.m = 8;
        c.T = 20;
        c.N = 5000;
        c.alphas = {7.0, 8.5, 10.0};
        c.k = 100;
    } else if (command == "qad-compare") {
        c.n = 8;
        c.m = 8;
        c.T = 5;
        c.N = 500;
        c.L = 2;
        c.inner_lr = 0.01;
        c.check_every = 1000;
        c.cap = 10000;
    } else if (command == "reconstruct-check") {
        c.n = 4;
        c.m = 4;
        c.N = 100;
        c.L = 4;
    } else if (command == "selftest") {
        c.n = 4;
        c.m = 4;
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return c;
}

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::size_t parse_size(const std::string &key, const std::string &v) {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        if (!v.empty() && v.front() == '-') {
            throw std::invalid_argument("negative");
        }
        x = std::stoull(v, &pos);
    } catch (const std::exception &) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    if (pos != v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return static_cast<std::size_t>(x);
}

inline double parse_real(const std::string &key, const std::string &v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception &) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    if (pos != v.size() || !std::isfinite(x)) {
        throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    }
    return x;
}

inline bool parse_bool(const std::string &key, const std::string &v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string &key, const std::string &v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(parse_real(key, trim(cell)));
    }
    return out;
}

} // namespace detail

/// Sets one field from its textual form. Unknown keys are rejected.
inline void apply_key(RunConfig &c, const std::string &key, const std::string &value) {
    using namespace detail;
    if (key == "command") {
        if (value != c.command) {
            throw ConfigError("command: file says '" + value + "' but running '" +
                              c.command + "'");
        }
    } else if (key == "n") {
        c.n = parse_size(key, value);
    } else if (key == "m") {
        c.m = parse_size(key, value);
    } else if (key == "N") {
        c.N = parse_size(key, value);
    } else if (key == "T") {
        c.T = parse_size(key, value);
    } else if (key == "L") {
        c.L = parse_size(key, value);
    } else if (key == "alphas") {
        c.alphas = parse_list(key, value);
    } else if (key == "k") {
        c.k = parse_size(key, value);
    } else if (key == "inner_lr") {
        c.inner_lr = parse_real(key, value);
    } else if (key == "check_every") {
        c.check_every = parse_size(key, value);
    } else if (key == "cap") {
        c.cap = parse_size(key, value);
    } else if (key == "seed") {
        c.seed = parse_size(key, value);
    } else if (key == "out_dir") {
        c.out_dir = value;
    } else if (key == "emit_svg") {
        c.emit_svg = parse_bool(key, value);
    } else if (key == "traces") {
        c.traces = parse_bool(key, value);
    } else if (key == "workers") {
        c.workers = parse_size(key, value);
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

/// `key = value` lines; blank lines and `#` comments ignored.
inline std::vector<std::pair<std::string, std::string>>
parse_config_text(std::istream &is) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

/// Range checks against what the experiment modules accept.
inline void validate(const RunConfig &c) {
    auto fail = [](const std::string &msg) { throw ConfigError(msg); };
    if (c.command == "selftest") {
        return;
    }
    if (c.n < 2 || c.n > kDefaultMaxQubits) {
        fail("n must be in [2, " + std::to_string(kDefaultMaxQubits) + "]");
    }
    if (c.m < 1) {
        fail("m must be >= 1");
    }
    if (c.N < 1) {
        fail("N must be >= 1");
    }
    if (c.command == "approx-quality" && c.L != 1 && c.L != 2) {
        fail("L must be 1 or 2 for approx-quality");
    }
    if (c.command == "reconstruct-check") {
        if (c.L < 1 || c.L > c.m) {
            fail("L must be in [1, m]");
        }
        if (c.m > kMaxFourierDim) {
            fail("m must be <= " + std::to_string(kMaxFourierDim) +
                 " for reconstruct-check");
        }
    }
    if (c.command == "descent-compare" || c.command == "qad-compare") {
        if (c.T < 1) {
            fail("T must be >= 1");
        }
    }
    if (c.command == "descent-compare") {
        if (c.alphas.empty()) {
            fail("alphas must not be empty");
        }
        for (const double a : c.alphas) {
            if (!(a > 0.0)) {
                fail("alphas must be positive");
            }
        }
        if (c.k < 1) {
            fail("k must be >= 1");
        }
    }
    if (c.command == "qad-compare") {
        if (!(c.inner_lr > 0.0)) {
            fail("inner_lr must be positive");
        }
        if (c.check_every < 1 || c.cap < c.check_every || c.cap % c.check_every != 0) {
            fail("check_every must divide cap");
        }
    }
    if (c.out_dir.empty()) {
        fail("out_dir must not be empty");
    }
}

/// Echo in the config-file format; feeding it back reproduces the run.
inline void write_config(std::ostream &os, const RunConfig &c) {
    os << "# effective configuration\n"
       << "command = " << c.command << '\n'
       << "n = " << c.n << '\n'
       << "m = " << c.m << '\n'
       << "N = " << c.N << '\n'
       << "T = " << c.T << '\n'
       << "L = " << c.L << '\n'
       << "alphas = ";
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
        os << (i ? "," : "") << format_double(c.alphas[i]);
    }
    os << '\n'
       << "k = " << c.k << '\n'
       << "inner_lr = " << format_double(c.inner_lr) << '\n'
       << "check_every = " << c.check_every << '\n'
       << "cap = " << c.cap << '\n'
       << "seed = " << c.seed << '\n'
       << "out_dir = " << c.out_dir << '\n'
       << "emit_svg = " << (c.emit_svg ? "true" : "false") << '\n'
       << "traces = " << (c.traces ? "true" : "false") << '\n'
       << "workers = " << c.workers << '\n';
}

/// Signals that --help was requested; carries the help text.
struct HelpRequested {
    std::string text;
};

/// argv[1] is the command; the rest are flags. A `--config FILE` supplies
/// file values beneath the flags. Throws ConfigError or HelpRequested.
inline RunConfig parse_config(int argc, const char *const *argv) {
    CLI::App app{"kernel descent experiments"};
    app.set_help_flag();
    bool help = false;
    app.add_flag("-h,--help", help, "Show help");
    std::string command;
    app.add_option("command", command, "Command")
        ->check(CLI::IsMember(known_commands()));
    std::optional<std::string> config_file;
    app.add_option("--config", config_file, "Config file with key = value lines");

    struct Flag {
        const char *names;
        const char *key;
        const char *help;
    };
    static constexpr Flag value_flags[] = {
        {"--n", "n", "Number of qubits"},
        {"--m", "m", "Number of parameters"},
        {"--N", "N", "Samples or runs"},
        {"--T", "T", "Outer iterations"},
        {"--L", "L", "Surrogate order"},
        {"--alphas", "alphas", "Comma-separated learning rates"},
        {"--k", "k", "Inner steps per outer iteration"},
        {"--inner-lr,--inner_lr", "inner_lr", "Inner learning rate"},
        {"--check-every,--check_every", "check_every", "Inner checkpoint spacing"},
        {"--cap", "cap", "Inner step cap"},
        {"--seed", "seed", "Master seed"},
        {"--out-dir,--out_dir", "out_dir", "Output directory"},
        {"--workers", "workers", "Worker threads (0: hardware)"},
    };
    std::map<std::string, std::optional<std::string>> flag_values;
    for (const auto &f : value_flags) {
        app.add_option(f.names, flag_values[f.key], f.help);
    }
    bool emit_svg = false;
    bool traces = false;
    bool render_only = false;
    app.add_flag("--emit-svg,--emit_svg", emit_svg, "Write SVG figures");
    app.add_flag("--traces", traces, "Write traces.csv");
    app.add_flag("--render-only", render_only,
                 "Re-render SVGs from the CSVs already in out_dir");

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) {
            args.emplace_back(argv[i]);
        }
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what());
    }
    if (help) {
        throw HelpRequested{app.help()};
    }

    std::vector<std::pair<std::string, std::string>> file_values;
    if (config_file) {
        std::ifstream in(*config_file);
        if (!in) {
            throw ConfigError("cannot read config file '" + *config_file + "'");
        }
        file_values = parse_config_text(in);
        if (command.empty()) {
            for (const auto &[key, value] : file_values) {
                if (key == "command") {
                    command = value;
                }
            }
        }
    }
    if (command.empty()) {
        throw ConfigError("missing command; one of approx-quality, descent-compare, "
                          "qad-compare, reconstruct-check, selftest");
    }
    RunConfig c = default_config(command);
    for (const auto &[key, value] : file_values) {
        apply_key(c, key, value);
    }
    for (const auto &[key, value] : flag_values) {
        if (value) {
            apply_key(c, key, *value);
        }
    }
    c.emit_svg = c.emit_svg || emit_svg;
    c.traces = c.traces || traces;
    c.render_only = render_only;
    validate(c);
    return c;
}

} // namespace kdescent
