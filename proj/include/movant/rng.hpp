// SPDX-License-Identifier: Apache-2.0
//
// movant: movable-antenna array simulation and optimization
// Copyright (C) 2026 The movant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MOVANT_RNG_HPP
#define MOVANT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace movant
{
    // Counter-based generator: the n-th draw of a stream is mix(key + n * golden), so a
    // stream is fully described by (key, counter) and child streams are derived by
    // hashing a tag into the key. The std:: distributions are implementation-defined,
    // so the distributions below are written out to keep draws identical across
    // standard libraries.
    class counter_rng
    {
      public:
        explicit constexpr counter_rng(std::uint64_t seed = 0) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

        [[nodiscard]] counter_rng split(std::uint64_t tag) const noexcept
        {
            counter_rng child;
            child.key_ = mix(key_ ^ mix(tag + 0x9e3779b97f4a7c15ULL));
            return child;
        }

        [[nodiscard]] counter_rng split(std::string_view tag) const noexcept
        {
            // FNV-1a
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (unsigned char c : tag)
            {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return split(h);
        }

        std::uint64_t next_u64() noexcept
        {
            ++counter_;
            return mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
        }

        // Uniform on the open interval (0, 1).
        double uniform() noexcept
        {
            return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        }

        double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

        // Standard normal via Box-Muller (one value per two uniforms, no caching).
        double normal() noexcept
        {
            const double u1 = uniform();
            const double u2 = uniform();
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        }

        // Uniform integer in [0, n) by rejection.
        std::uint64_t below(std::uint64_t n) noexcept
        {
            if (n <= 1)
                return 0;
            const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
            std::uint64_t v;
            do
                v = next_u64();
            while (v >= limit);
            return v % n;
        }

        template <typename T>
        void shuffle(std::vector<T> &v) noexcept
        {
            for (std::size_t i = v.size(); i > 1; --i)
            {
                const std::size_t j = static_cast<std::size_t>(below(i));
                std::swap(v[i - 1], v[j]);
            }
        }

        [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
        [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

      private:
        static constexpr std::uint64_t mix(std::uint64_t z) noexcept
        {
            // splitmix64 finalizer
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        std::uint64_t key_ = 0;
        std::uint64_t counter_ = 0;
    };
}

#endif
