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
 * Self-contained SVG figures: direct-comparison scatter plots, error vs
 * distance scatter plots with fitted power curves, and averaged descent
 * curves with standard-deviation bands. Output references no external
 * resources.
 */
#pragma once

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kdescent::svg {

inline constexpr int kScatterSize = 640;
inline constexpr int kCurveWidth = 960;
inline constexpr int kCurveHeight = 540;

inline constexpr const char *kBlue = "#1f77b4";
inline constexpr const char *kRed = "#d62728";
inline constexpr const char *kGreen = "#2ca02c";

inline std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

inline std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
    return buf;
}

inline std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

namespace detail {

struct Frame {
    double left, top, width, height;
    double x_min, x_max, y_min, y_max;

    [[nodiscard]] double px(double x) const {
        return left + (x - x_min) / (x_max - x_min) * width;
    }
    [[nodiscard]] double py(double y) const {
        return top + height - (y - y_min) / (y_max - y_min) * height;
    }
};

inline void header(std::ostringstream &os, int w, int h) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"white\"/>\n";
}

inline void axes(std::ostringstream &os, const Frame &f, std::string_view xlabel,
                 std::string_view ylabel, int ticks = 5) {
    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
       << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\""
       << num(f.width) << "\" height=\"" << num(f.height) << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (int i = 0; i <= ticks; ++i) {
        const double tx = f.x_min + (f.x_max - f.x_min) * i / ticks;
        const double ty = f.y_min + (f.y_max - f.y_min) * i / ticks;
        os << "<text x=\"" << num(f.px(tx)) << "\" y=\"" << num(f.top + f.height + 16)
           << "\" text-anchor=\"middle\">" << escape(tick_label(tx)) << "</text>\n";
        os << "<text x=\"" << num(f.left - 6) << "\" y=\"" << num(f.py(ty) + 4)
           << "\" text-anchor=\"end\">" << escape(tick_label(ty)) << "</text>\n";
    }
    os << "<text x=\"" << num(f.left + f.width / 2) << "\" y=\""
       << num(f.top + f.height + 36) << "\" text-anchor=\"middle\" font-size=\"13\">"
       << escape(xlabel) << "</text>\n";
    os << "<text transform=\"translate(" << num(f.left - 48) << ','
       << num(f.top + f.height / 2) << ") rotate(-90)\" text-anchor=\"middle\" "
          "font-size=\"13\">"
       << escape(ylabel) << "</text>\n</g>\n";
}

inline double finite_max(double a, double b) {
    return std::isfinite(b) ? std::max(a, b) : a;
}

} // namespace detail

struct ScatterType1 {
    std::size_t below = 0; ///< kernel better (red)
    std::size_t on_or_above = 0;
    double win_fraction = 0.0;
    double mean_angle = 0.0;
};

inline ScatterType1 classify_type1(std::span<const Point2> points) {
    ScatterType1 s;
    for (const auto &p : points) {
        if (p.y < p.x) {
            ++s.below;
        } else {
            ++s.on_or_above;
        }
    }
    s.win_fraction = static_cast<double>(s.below) / static_cast<double>(points.size());
    s.mean_angle = mean_polar_angle(points);
    return s;
}

/// Direct comparison: x = baseline error, y = kernel error. Points on or
/// above the diagonal are blue, below red; the green ray has the mean polar
/// angle of the points.
inline std::string render_scatter_type1(std::span<const Point2> points,
                                        std::string_view xlabel,
                                        std::string_view ylabel,
                                        std::string_view title = "") {
    if (points.empty()) {
        throw std::invalid_argument("render_scatter_type1: no points");
    }
    const ScatterType1 cls = classify_type1(points);
    double hi = 0.0;
    for (const auto &p : points) {
        hi = detail::finite_max(hi, p.x);
        hi = detail::finite_max(hi, p.y);
    }
    hi = hi > 0.0 ? hi * 1.05 : 1.0;
    const detail::Frame f{70, 40, 540, 520, 0.0, hi, 0.0, hi};

    std::ostringstream os;
    detail::header(os, kScatterSize, kScatterSize);
    if (!title.empty()) {
        os << "<text x=\"" << kScatterSize / 2
           << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"14\">"
           << escape(title) << "</text>\n";
    }
    detail::axes(os, f, xlabel, ylabel);
    os << "<line x1=\"" << num(f.px(0)) << "\" y1=\"" << num(f.py(0)) << "\" x2=\""
       << num(f.px(hi)) << "\" y2=\"" << num(f.py(hi))
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    os << "<g fill-opacity=\"0.5\" stroke=\"none\">\n";
    for (const auto &p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            continue;
        }
        os << "<circle cx=\"" << num(f.px(p.x)) << "\" cy=\"" << num(f.py(p.y))
           << "\" r=\"1.6\" fill=\"" << (p.y < p.x ? kRed : kBlue) << "\"/>\n";
    }
    os << "</g>\n";
    // Ray from the origin to the frame boundary.
    const double c = std::cos(cls.mean_angle);
    const double s = std::sin(cls.mean_angle);
    const double t = hi / std::max(c, s);
    os << "<line class=\"mean-angle\" x1=\"" << num(f.px(0)) << "\" y1=\""
       << num(f.py(0)) << "\" x2=\"" << num(f.px(t * c)) << "\" y2=\""
       << num(f.py(t * s)) << "\" stroke=\"" << kGreen << "\" stroke-width=\"2\"/>\n";
    os << "<text class=\"caption\" x=\"" << num(f.left + 8) << "\" y=\""
       << num(f.top + 18) << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << "kernel better in " << escape(percent(cls.win_fraction)) << " of "
       << points.size() << " points</text>\n";
    os << "</svg>\n";
    return os.str();
}

struct ScatterType2 {
    int exponent = 2;
    double c_kernel = 0.0;
    double c_base = 0.0;
};

inline double power_curve(double c, int exponent, double x) {
    return c * std::pow(x, exponent);
}

inline ScatterType2 fit_type2(std::span<const ApproxSample> samples, ErrorKind kind,
                              int exponent) {
    return {exponent,
            fit_power_curve(distance_points(samples, kind, true), exponent),
            fit_power_curve(distance_points(samples, kind, false), exponent)};
}

/// Error against distance to the development point: baseline in blue,
/// kernel in red, each with its fitted curve c x^k (2N points in total).
inline std::string render_scatter_type2(std::span<const ApproxSample> samples,
                                        ErrorKind kind, int exponent,
                                        std::string_view ylabel,
                                        std::string_view title = "") {
    if (samples.empty()) {
        throw std::invalid_argument("render_scatter_type2: no samples");
    }
    const ScatterType2 fit = fit_type2(samples, kind, exponent);
    double x_hi = 0.0;
    double y_hi = 0.0;
    for (const auto &s : samples) {
        x_hi = detail::finite_max(x_hi, s.d_theta);
        y_hi = detail::finite_max(y_hi, pick(s.kernel, kind));
        y_hi = detail::finite_max(y_hi, pick(s.base, kind));
    }
    x_hi = x_hi > 0.0 ? x_hi * 1.05 : 1.0;
    y_hi = y_hi > 0.0 ? y_hi * 1.05 : 1.0;
    const detail::Frame f{70, 40, 540, 520, 0.0, x_hi, 0.0, y_hi};

    std::ostringstream os;
    detail::header(os, kScatterSize, kScatterSize);
    if (!title.empty()) {
        os << "<text x=\"" << kScatterSize / 2
           << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"14\">"
           << escape(title) << "</text>\n";
    }
    detail::axes(os, f, "distance to development point", ylabel);
    auto cloud = [&](bool kernel_side, const char *colour) {
        os << "<g class=\"" << (kernel_side ? "kernel" : "base")
           << "\" fill-opacity=\"0.4\" stroke=\"none\" fill=\"" << colour << "\">\n";
        for (const auto &s : samples) {
            const double y = pick(kernel_side ? s.kernel : s.base, kind);
            if (!std::isfinite(y)) {
                continue;
            }
            os << "<circle cx=\"" << num(f.px(s.d_theta)) << "\" cy=\"" << num(f.py(y))
               << "\" r=\"1.4\"/>\n";
        }
        os << "</g>\n";
    };
    cloud(false, kBlue);
    cloud(true, kRed);
    auto curve = [&](double c, const char *colour) {
        os << "<polyline fill=\"none\" stroke=\"" << colour
           << "\" stroke-width=\"2\" points=\"";
        constexpr int samples_on_curve = 100;
        for (int i = 0; i <= samples_on_curve; ++i) {
            const double x = x_hi * i / samples_on_curve;
            const double y = std::min(power_curve(c, exponent, x), y_hi);
            os << num(f.px(x)) << ',' << num(f.py(y)) << ' ';
        }
        os << "\"/>\n";
    };
    curve(fit.c_base, kBlue);
    curve(fit.c_kernel, kRed);
    os << "<text class=\"caption\" x=\"" << num(f.left + 8) << "\" y=\""
       << num(f.top + 18) << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << "fit c x^" << exponent << ": kernel c=" << escape(tick_label(fit.c_kernel))
       << ", baseline c=" << escape(tick_label(fit.c_base)) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

/// Mean normalized objective per iteration, one polyline per curve with a
/// translucent +-1 standard deviation band.
inline std::string render_curves(std::span<const Curve> curves,
                                 std::string_view title = "") {
    if (curves.empty() || curves.front().stats.mean.empty()) {
        throw std::invalid_argument("render_curves: no curves");
    }
    static constexpr const char *palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                              "#d62728", "#9467bd", "#8c564b",
                                              "#e377c2", "#7f7f7f"};
    std::size_t len = 0;
    double lo = 0.0;
    double hi = 1.0;
    for (const auto &c : curves) {
        len = std::max(len, c.stats.mean.size());
        for (std::size_t t = 0; t < c.stats.mean.size(); ++t) {
            lo = std::min(lo, c.stats.mean[t] - c.stats.stddev[t]);
            hi = std::max(hi, c.stats.mean[t] + c.stats.stddev[t]);
        }
    }
    const double x_hi = len > 1 ? static_cast<double>(len - 1) : 1.0;
    const detail::Frame f{80, 40, 680, 440, 0.0, x_hi, lo, hi};

    std::ostringstream os;
    detail::header(os, kCurveWidth, kCurveHeight);
    if (!title.empty()) {
        os << "<text x=\"" << kCurveWidth / 2
           << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"14\">"
           << escape(title) << "</text>\n";
    }
    detail::axes(os, f, "iteration", "normalized objective");
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const auto &c = curves[ci];
        const char *colour = palette[ci % std::size(palette)];
        const auto &mean = c.stats.mean;
        const auto &sd = c.stats.stddev;
        os << "<polygon class=\"band\" fill=\"" << colour
           << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t t = 0; t < mean.size(); ++t) {
            os << num(f.px(static_cast<double>(t))) << ',' << num(f.py(mean[t] + sd[t]))
               << ' ';
        }
        for (std::size_t t = mean.size(); t-- > 0;) {
            os << num(f.px(static_cast<double>(t))) << ',' << num(f.py(mean[t] - sd[t]))
               << ' ';
        }
        os << "\"/>\n";
        os << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << colour
           << "\" stroke-width=\"2\" points=\"";
        for (std::size_t t = 0; t < mean.size(); ++t) {
            os << num(f.px(static_cast<double>(t))) << ',' << num(f.py(mean[t])) << ' ';
        }
        os << "\"/>\n";
        std::string label = algorithm_name(c.algorithm);
        if (c.alpha > 0.0) {
            label += " alpha=" + tick_label(c.alpha);
        }
        const double ly = f.top + 16 + 18 * static_cast<double>(ci);
        os << "<line x1=\"" << num(f.left + f.width + 12) << "\" y1=\"" << num(ly - 4)
           << "\" x2=\"" << num(f.left + f.width + 36) << "\" y2=\"" << num(ly - 4)
           << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << num(f.left + f.width + 42) << "\" y=\"" << num(ly)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace kdescent::svg
