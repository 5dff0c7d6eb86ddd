// SPDX-License-Identifier: Apache-2.0
//
// ddcs - simulator for dynamic double-directional mm-wave channel sounding
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

#pragma once

#include <cmath>
#include <cstdint>

namespace ddcs {

// Counter-based random stream. Every draw is a pure function of (key, counter),
// so results do not depend on evaluation order or thread schedule.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent substream key from a master seed and a domain tag.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t domain) {
    return splitmix64(splitmix64(seed) ^ (domain * 0xd6e8feb86659fd93ULL));
}

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    /// Uniform draw in (0, 1), indexed by counter.
    double uniform(std::uint64_t counter) const {
        std::uint64_t h = splitmix64(key_ ^ splitmix64(counter));
        return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal pair via Box-Muller, indexed by counter.
    void gaussian_pair(std::uint64_t counter, double &g0, double &g1) const {
        double u1 = uniform(counter * 2ULL);
        double u2 = uniform(counter * 2ULL + 1ULL);
        double r = std::sqrt(-2.0 * std::log(u1));
        g0 = r * std::cos(2.0 * 3.141592653589793 * u2);
        g1 = r * std::sin(2.0 * 3.141592653589793 * u2);
    }

  private:
    std::uint64_t key_;
};

} // namespace ddcs
