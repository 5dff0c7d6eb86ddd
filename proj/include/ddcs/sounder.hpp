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

#include "ddcs/array.hpp"
#include "ddcs/scene.hpp"
#include "ddcs/waveform.hpp"

namespace ddcs {

/// Campaign protocol parameters. One SISO slot sounds one beam pair; a MIMO
/// snapshot sweeps all pairs back to back; a burst is `snapshots_per_burst`
/// snapshots without idle time; bursts repeat every `burst_period_s`.
struct SounderConfig {
    MultitoneSpec waveform;
    double slot_duration_s = 4e-6;   // 2 us waveform + 2 us beam-switch guard
    int snapshots_per_burst = 20;
    double burst_period_s = 60e-3;
    int burst_count = 200;
    double tx_eirp_dbm = 36.0;
    double max_tx_eirp_dbm = 57.0;
    double rx_noise_figure_db = 5.0;
    double bandwidth_hz = 400e6;
    BeamGrid tx_grid = BeamGrid::standard();
    BeamGrid rx_grid = BeamGrid::standard();
    double boresight_gain_dbi = 19.5;
    double beamwidth_az_deg = 12.0;
    double beamwidth_el_deg = 22.0;
    double sidelobe_floor_db = -20.0;
    std::uint64_t seed = 1;
    bool noise_enabled = true;
    bool identity_calibration = false;

    std::size_t pair_count() const { return tx_grid.beam_count() * rx_grid.beam_count(); }
    double sweep_duration_s() const { return slot_duration_s * static_cast<double>(pair_count()); }
    double burst_duration_s() const { return sweep_duration_s() * snapshots_per_burst; }
    double campaign_duration_s() const { return burst_period_s * burst_count; }

    BeamPattern tx_pattern(int beam) const;
    BeamPattern rx_pattern(int beam) const;

    void validate() const;
};

/// Calibration response selected by the config (identity or seeded ripple).
CalibrationResponse make_calibration(const SounderConfig &config);

/// Slot start time in integer nanoseconds; exact arithmetic so the timing
/// budget checks hold without float fuzz.
std::int64_t slot_time_ns(const SounderConfig &config, int burst, int snapshot, int pair);

/// All slot timestamps in seconds, [burst][snapshot][pair] order.
std::vector<double> campaign_timestamps(const SounderConfig &config);

/// Complex frequency responses for the whole campaign,
/// [burst][snapshot][txBeam][rxBeam][tone], with per-slot timestamps.
struct MeasurementTensor {
    int n_burst = 0, n_snapshot = 0, n_tx = 0, n_rx = 0, n_tone = 0;
    std::vector<std::complex<float>> data;
    std::vector<double> timestamps; // [burst][snapshot][pair]
    SounderConfig config;

    std::size_t tone_offset(int b, int s, int i, int j) const {
        return (((static_cast<std::size_t>(b) * n_snapshot + s) * n_tx + i) * n_rx + j) *
               static_cast<std::size_t>(n_tone);
    }
    std::span<const std::complex<float>> tones(int b, int s, int i, int j) const {
        return {data.data() + tone_offset(b, s, i, j), static_cast<std::size_t>(n_tone)};
    }
};

/// Thermal noise floor: -174 dBm/Hz + 10 log10(B) + NF.
double noise_floor_dbm(const SounderConfig &config);

/// Channel response on the tone grid for one beam pair:
/// H_k = cal_k * sum_l a_l g_tx g_rx e^{-j 2 pi f_k tau_l} e^{j 2 pi nu_l dt},
/// where dt is the time elapsed since the paths were evaluated (Doppler phase
/// advances within the sweep; geometry is frozen at the path snapshot).
std::vector<std::complex<double>> synthesize_response(std::span<const PathTruth> paths,
                                                      const BeamPattern &tx_beam,
                                                      const BeamPattern &rx_beam,
                                                      const MultitoneSpec &spec,
                                                      double doppler_elapsed_s,
                                                      const CalibrationResponse &cal);

/// Synthesizes one burst into `out` (layout [snapshot][tx][rx][tone]).
/// Exposed so file-streaming writers can run burst by burst.
void run_burst(const Scene &scene, const SounderConfig &config, const CalibrationResponse &cal,
               int burst, std::span<std::complex<float>> out);

/// Full campaign against a scene. Deterministic given (scene, config, seed):
/// per-tone noise comes from a counter-based stream indexed by
/// (burst, snapshot, pair, tone), so parallel execution cannot reorder it.
MeasurementTensor run_campaign(const Scene &scene, const SounderConfig &config);

/// Worker-count cap honoring the DDCS_THREADS environment variable.
int worker_count();

} // namespace ddcs
