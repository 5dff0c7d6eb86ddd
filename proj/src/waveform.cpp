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

#include "ddcs/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddcs/fft.hpp"
#include "ddcs/geometry.hpp"
#include "ddcs/rng.hpp"

namespace ddcs {

void MultitoneSpec::validate() const {
    if (tone_count < 1) throw std::invalid_argument("MultitoneSpec: tone_count must be >= 1");
    if (tone_spacing_hz <= 0.0) throw std::invalid_argument("MultitoneSpec: tone_spacing must be positive");
    if (center_frequency_hz <= 0.0) throw std::invalid_argument("MultitoneSpec: center frequency must be positive");
    if (!phases_rad.empty() && phases_rad.size() != static_cast<std::size_t>(tone_count))
        throw std::invalid_argument("MultitoneSpec: phase list length must equal tone_count");
}

double papr_db(std::span<const std::complex<double>> samples) {
    if (samples.empty()) throw std::invalid_argument("papr_db: empty sample vector");
    double peak = 0.0, sum = 0.0;
    for (const auto &s : samples) {
        double p = std::norm(s);
        peak = std::max(peak, p);
        sum += p;
    }
    return power_to_db(peak / (sum / static_cast<double>(samples.size())));
}

namespace {

std::vector<std::complex<double>> synth_oversampled(std::span<const double> phases, int oversampling) {
    const std::size_t n = phases.size();
    const std::size_t len = n * static_cast<std::size_t>(oversampling);
    std::vector<std::complex<double>> spectrum(len, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) spectrum[k] = std::polar(1.0, phases[k]);
    return dft_for(len).inverse(spectrum);
}

} // namespace

std::vector<std::complex<double>> time_domain(const MultitoneSpec &spec, int oversampling) {
    spec.validate();
    if (oversampling < 1) throw std::invalid_argument("time_domain: oversampling must be >= 1");
    std::vector<double> ph = spec.phases_rad;
    if (ph.empty()) ph.assign(spec.tone_count, 0.0);
    return synth_oversampled(ph, oversampling);
}

std::vector<double> design_phases(int tone_count, double papr_target_db, int max_iterations) {
    if (tone_count < 1) throw std::invalid_argument("design_phases: tone_count must be >= 1");
    const std::size_t n = static_cast<std::size_t>(tone_count);
    std::vector<double> phases(n);
    for (std::size_t k = 0; k < n; ++k)
        phases[k] = kPi * static_cast<double>(k) * static_cast<double>(k) / static_cast<double>(n);
    if (tone_count == 1) return phases;

    const int oversampling = 4;
    const std::size_t len = n * oversampling;
    Dft &dft = dft_for(len);
    // Clipping slightly above the RMS level converges considerably faster
    // than clipping at the RMS itself.
    const double clip_over_rms = db_to_amplitude(0.25);

    std::vector<std::complex<double>> time(len), spectrum(len);
    double achieved = 0.0;
    for (int iter = 0; iter < max_iterations; ++iter) {
        time = synth_oversampled(phases, oversampling);
        achieved = papr_db(time);
        if (achieved <= papr_target_db) return phases;

        double mean_sq = 0.0;
        for (const auto &s : time) mean_sq += std::norm(s);
        mean_sq /= static_cast<double>(len);
        const double clip = std::sqrt(mean_sq) * clip_over_rms;
        for (auto &s : time) {
            double mag = std::abs(s);
            if (mag > clip) s *= clip / mag;
        }
        dft.forward(time.data(), spectrum.data());
        for (std::size_t k = 0; k < n; ++k) phases[k] = std::arg(spectrum[k]);
    }
    if (achieved > 1.0)
        throw std::runtime_error("design_phases: PAPR " + std::to_string(achieved) +
                                 " dB still above 1 dB after max iterations");
    return phases;
}

void CalibrationResponse::validate() const {
    if (gain.empty()) throw std::invalid_argument("CalibrationResponse: empty");
    for (const auto &g : gain)
        if (std::abs(g) == 0.0)
            throw std::invalid_argument("CalibrationResponse: zero entry (division-unsafe)");
}

CalibrationResponse CalibrationResponse::identity(int tone_count) {
    CalibrationResponse c;
    c.gain.assign(static_cast<std::size_t>(tone_count), {1.0, 0.0});
    return c;
}

CalibrationResponse CalibrationResponse::ripple(int tone_count, std::uint64_t seed) {
    CalibrationResponse c;
    c.gain.resize(static_cast<std::size_t>(tone_count));
    CounterRng rng(derive_key(seed, 0x43414cULL)); // "CAL"
    const int components = 3;
    std::vector<double> amp(components), cyc(components), pha(components);
    std::vector<double> pamp(components), pcyc(components), ppha(components);
    for (int i = 0; i < components; ++i) {
        amp[i] = 0.03 + 0.07 * rng.uniform(6 * i);        // magnitude ripple depth
        cyc[i] = 1.0 + std::floor(4.0 * rng.uniform(6 * i + 1));
        pha[i] = 2.0 * kPi * rng.uniform(6 * i + 2);
        pamp[i] = 0.05 + 0.15 * rng.uniform(6 * i + 3);   // phase ripple, radians
        pcyc[i] = 1.0 + std::floor(4.0 * rng.uniform(6 * i + 4));
        ppha[i] = 2.0 * kPi * rng.uniform(6 * i + 5);
    }
    for (int k = 0; k < tone_count; ++k) {
        double x = static_cast<double>(k) / static_cast<double>(tone_count);
        double mag = 1.0, phase = 0.0;
        for (int i = 0; i < components; ++i) {
            mag += amp[i] * std::cos(2.0 * kPi * cyc[i] * x + pha[i]);
            phase += pamp[i] * std::sin(2.0 * kPi * pcyc[i] * x + ppha[i]);
        }
        c.gain[static_cast<std::size_t>(k)] = std::polar(mag, phase);
    }
    c.validate();
    return c;
}

} // namespace ddcs
