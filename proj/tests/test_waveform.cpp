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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "ddcs/geometry.hpp"
#include "ddcs/waveform.hpp"

using namespace ddcs;

TEST_CASE("papr of a constant envelope is 0 dB") {
    std::vector<std::complex<double>> s(64, std::polar(2.0, 0.3));
    CHECK(papr_db(s) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("papr of a single spike is 10 log10(L)") {
    std::vector<std::complex<double>> s(100, {0.0, 0.0});
    s[17] = {1.0, 0.0};
    CHECK(papr_db(s) == Catch::Approx(20.0).margin(1e-12));
}

TEST_CASE("two zero-phase tones beat as 2 + 2 cos") {
    MultitoneSpec spec;
    spec.tone_count = 2;
    spec.phases_rad = {0.0, 0.0};
    const int os = 16;
    auto s = time_domain(spec, os);
    REQUIRE(s.size() == 32);
    for (std::size_t n = 0; n < s.size(); ++n) {
        double t = static_cast<double>(n) / (2.0 * os) * spec.duration_s();
        double expected = 2.0 + 2.0 * std::cos(2.0 * kPi * spec.tone_spacing_hz * t);
        CHECK(std::norm(s[n]) == Catch::Approx(expected).margin(1e-9));
    }
}

TEST_CASE("tone energy satisfies Parseval") {
    MultitoneSpec spec;
    spec.tone_count = 31;
    spec.phases_rad.assign(31, 0.7);
    auto s = time_domain(spec, 4);
    double energy = 0.0;
    for (const auto &v : s) energy += std::norm(v);
    // sum over samples of |s|^2 == tone_count * sample_count for unit tones
    CHECK(energy == Catch::Approx(31.0 * static_cast<double>(s.size())).epsilon(1e-9));
}

TEST_CASE("zero phases pile up into a huge PAPR") {
    MultitoneSpec spec; // 801 tones, phases default to zero
    auto s = time_domain(spec, 4);
    CHECK(papr_db(s) > 10.0);
}

TEST_CASE("designed 801-tone waveform reaches the PAPR target") {
    auto phases = design_phases(801);
    MultitoneSpec spec;
    spec.phases_rad = phases;
    auto s = time_domain(spec, 4);
    CHECK(papr_db(s) <= 0.5 + 1e-9);

    // deterministic
    auto again = design_phases(801);
    REQUIRE(again.size() == phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) CHECK(again[i] == phases[i]);
}

TEST_CASE("an unreachable PAPR target is reported, not silently missed") {
    CHECK_THROWS_AS(design_phases(801, 0.0, 1), std::runtime_error);
}

TEST_CASE("single tone is constant envelope") {
    auto phases = design_phases(1);
    MultitoneSpec spec;
    spec.tone_count = 1;
    spec.phases_rad = phases;
    CHECK(papr_db(time_domain(spec, 8)) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("waveform timing identities") {
    MultitoneSpec spec;
    CHECK(spec.duration_s() * spec.tone_spacing_hz == 1.0);
    CHECK(spec.bandwidth_hz() == Catch::Approx(400.5e6));
    CHECK(spec.delay_bin_s() == Catch::Approx(2.4969e-9).epsilon(1e-4));
}

TEST_CASE("calibration identity and ripple") {
    auto id = CalibrationResponse::identity(16);
    for (const auto &g : id.gain) CHECK(g == std::complex<double>{1.0, 0.0});

    auto a = CalibrationResponse::ripple(801, 7);
    auto b = CalibrationResponse::ripple(801, 7);
    auto c = CalibrationResponse::ripple(801, 8);
    REQUIRE(a.gain.size() == 801);
    bool all_equal = true, any_diff_seed = false;
    for (std::size_t k = 0; k < a.gain.size(); ++k) {
        all_equal = all_equal && a.gain[k] == b.gain[k];
        any_diff_seed = any_diff_seed || a.gain[k] != c.gain[k];
        CHECK(std::abs(a.gain[k]) > 0.3);
    }
    CHECK(all_equal);
    CHECK(any_diff_seed);
}

TEST_CASE("applying then dividing the calibration is lossless") {
    auto cal = CalibrationResponse::ripple(801, 123);
    std::vector<std::complex<double>> h(801);
    for (int k = 0; k < 801; ++k)
        h[static_cast<std::size_t>(k)] = std::polar(1e-5, -0.013 * k);
    double worst = 0.0;
    for (int k = 0; k < 801; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        std::complex<double> round = h[ks] * cal.gain[ks] / cal.gain[ks];
        worst = std::max(worst, std::abs(round - h[ks]) / std::abs(h[ks]));
    }
    CHECK(worst < 1e-9);
}
