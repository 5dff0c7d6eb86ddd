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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ddcs {

/// Multitone sounding waveform: equally spaced unit-amplitude tones with
/// individually controlled phases. The tone grid doubles as the frequency
/// axis of every synthesized channel response: tone k sits at k * spacing
/// from the band edge.
struct MultitoneSpec {
    int tone_count = 801;
    double tone_spacing_hz = 500e3;
    double center_frequency_hz = 27.85e9;
    std::vector<double> phases_rad; // empty means all-zero phases

    double duration_s() const { return 1.0 / tone_spacing_hz; }
    double bandwidth_hz() const { return tone_count * tone_spacing_hz; }
    double delay_bin_s() const { return 1.0 / (tone_count * tone_spacing_hz); }
    void validate() const;
};

/// Peak-to-average power ratio of a complex envelope, dB.
double papr_db(std::span<const std::complex<double>> samples);

/// Complex baseband samples of one waveform period at the given oversampling
/// factor: s(t) = sum_k exp(j(2 pi k df t + phi_k)).
std::vector<std::complex<double>> time_domain(const MultitoneSpec &spec, int oversampling);

/// Low-PAPR phase design: quadratic-phase start, then clip-and-restore
/// refinement at 4x oversampling until the PAPR target is met. Deterministic.
/// Throws if the result is still above 1 dB after max_iterations.
std::vector<double> design_phases(int tone_count, double papr_target_db = 0.5,
                                  int max_iterations = 1000);

/// Combined TX+RX chain response on the tone grid; divided out during
/// evaluation. Entries are never zero.
struct CalibrationResponse {
    std::vector<std::complex<double>> gain;

    static CalibrationResponse identity(int tone_count);
    /// Smooth deterministic magnitude/phase ripple derived from the seed.
    static CalibrationResponse ripple(int tone_count, std::uint64_t seed);

    void validate() const;
};

} // namespace ddcs
