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
 * Seedable, splittable random streams.
 *
 * Every sampled object draws from a child stream derived from
 * (master seed, purpose tag, index), so results do not depend on the order
 * in which runs are scheduled.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kdescent {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace detail

class RngStream {
  public:
    using engine_type = std::mt19937_64;
    using result_type = engine_type::result_type;

    explicit RngStream(std::uint64_t seed) : key_(seed), engine_(seed) {}

    /// Child stream keyed by (this stream's key, tag, index). Does not
    /// consume from the parent.
    [[nodiscard]] RngStream child(std::string_view tag,
                                  std::uint64_t index) const {
        return RngStream(derive_key(key_, tag, index));
    }

    static RngStream derive(std::uint64_t master_seed, std::string_view tag,
                            std::uint64_t index) {
        return RngStream(derive_key(detail::splitmix64(master_seed), tag,
                                    index));
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        double x = dist(engine_);
        // uniform_real_distribution may round up to hi on some libraries.
        return x < hi ? x : lo;
    }

    double normal() {
        std::normal_distribution<double> dist(0.0, 1.0);
        return dist(engine_);
    }

    /// Uniform integer on [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
        return dist(engine_);
    }

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

    // UniformRandomBitGenerator interface, for std algorithms.
    static constexpr result_type min() { return engine_type::min(); }
    static constexpr result_type max() { return engine_type::max(); }
    result_type operator()() { return engine_(); }

  private:
    static std::uint64_t derive_key(std::uint64_t key, std::string_view tag,
                                    std::uint64_t index) {
        std::uint64_t h = detail::splitmix64(key ^ detail::fnv1a(tag));
        return detail::splitmix64(h ^ detail::splitmix64(index));
    }

    std::uint64_t key_;
    engine_type engine_;
};

} // namespace kdescent
