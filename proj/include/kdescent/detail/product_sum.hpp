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
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kdescent::detail {

/// Per-coordinate factor values and derivatives for up to three factor
/// kinds, evaluated at one point.
template <std::size_t Kinds> struct FactorTable {
    std::vector<std::array<double, Kinds>> value;
    std::vector<std::array<double, Kinds>> deriv;

    explicit FactorTable(std::size_t m) : value(m), deriv(m) {}
};

/// Evaluates sum_j w_j prod_k F_k(kind_{j,k}) where kinds is a row-major
/// (terms x m) table. Gradient uses prefix/suffix products, so zero factors
/// are handled without division.
template <std::size_t Kinds>
double product_sum(std::span<const std::uint8_t> kinds,
                   std::span<const double> weights,
                   const FactorTable<Kinds> &table,
                   std::span<double> gradient) {
    const std::size_t m = table.value.size();
    const bool want_grad = !gradient.empty();
    if (want_grad) {
        for (auto &g : gradient) {
            g = 0.0;
        }
    }
    std::vector<double> suffix(m + 1);
    double total = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const std::uint8_t *row = kinds.data() + j * m;
        const double w = weights[j];
        if (!want_grad) {
            double prod = w;
            for (std::size_t k = 0; k < m; ++k) {
                prod *= table.value[k][row[k]];
            }
            total += prod;
            continue;
        }
        suffix[m] = 1.0;
        for (std::size_t k = m; k-- > 0;) {
            suffix[k] = suffix[k + 1] * table.value[k][row[k]];
        }
        total += w * suffix[0];
        double prefix = w;
        for (std::size_t k = 0; k < m; ++k) {
            gradient[k] += prefix * table.deriv[k][row[k]] * suffix[k + 1];
            prefix *= table.value[k][row[k]];
        }
    }
    return total;
}

} // namespace kdescent::detail
