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
#include <optional>
#include <span>
#include <vector>

#include "ddcs/waveform.hpp"

namespace ddcs {

/// Analysis knobs. Detection keeps cells above max(noise + detection_margin,
/// global peak - dynamic_range); delay-spread moments additionally clip at
/// peak - rms_clip so DFT leakage skirts stay out of the statistics.
struct EvalParams {
    double detection_margin_db = 6.0;
    double dynamic_range_db = 30.0;
    double rms_clip_db = 25.0;
    double sidelobe_floor_db = -20.0; // of the sounding beams; drives ghost rejection
    double ghost_margin_db = 3.0;
    double track_delay_gate_bins = 2.0;
    double track_angle_gate_deg = 10.0;
    int track_max_miss = 2;
    int idle_bursts = 10;
};

/// Directional power delay profiles of one sweep, [txBeam][rxBeam][delay bin].
struct PdpCube {
    int n_tx = 0, n_rx = 0, n_delay = 0;
    std::vector<double> power;

    double &at(int i, int j, int n) {
        return power[(static_cast<std::size_t>(i) * n_rx + j) * n_delay + n];
    }
    double at(int i, int j, int n) const {
        return power[(static_cast<std::size_t>(i) * n_rx + j) * n_delay + n];
    }
};

/// Beam-grid context the detector needs to label and de-embed detections.
struct BeamContext {
    std::vector<double> tx_azimuths_deg;
    std::vector<double> rx_azimuths_deg;
    double delay_bin_s = 0.0;
    double deembed_power_gain = 1.0; // product of boresight power gains
};

struct Mpc {
    int burst = 0;
    int tx_beam = 0, rx_beam = 0, delay_bin = 0;
    double delay_s = 0.0;
    double dod_az_deg = 0.0, doa_az_deg = 0.0;
    double power_db = 0.0; // de-embedded of antenna gains
    int track_id = -1;
};

struct Track {
    int id = 0;
    int start_burst = 0;
    int end_burst = 0;
    int hits = 0;
    double mean_power_db = 0.0;
    double mean_delay_ns = 0.0;
};

/// P(tau_n) = |IDFT{ H ./ cal }|^2 with the 1/N inverse-transform convention;
/// an identity input yields power 1 in bin 0.
std::vector<double> directional_pdp(std::span<const std::complex<double>> h,
                                    const CalibrationResponse &cal);

/// Noise power per delay bin estimated from the top 10% highest-delay bins
/// (median over all beam pairs).
double estimate_noise_floor(const PdpCube &cube);

/// Omnidirectional PDP: per delay bin the maximum over beam pairs of the
/// gain-de-embedded directional power. Max-combining avoids double counting
/// paths seen by adjacent overlapping beams.
std::vector<double> omni_pdp(const PdpCube &cube, double deembed_power_gain);

/// 3D peak search. A cell is a peak when it strictly exceeds its 3x3x3
/// neighborhood (ties resolved toward lower delay, then lower TX, then lower
/// RX index) and clears the detection threshold.
std::vector<Mpc> peak_search_3d(const PdpCube &cube, double noise_power, const BeamContext &beams,
                                const EvalParams &params);

/// Removes sidelobe ghosts: a detection within one delay bin of a stronger
/// one, on a different beam, at or below the sidelobe floor plus margin.
std::vector<Mpc> ghost_filter(std::vector<Mpc> mpcs, const EvalParams &params);

/// Greedy nearest-neighbor association across bursts; assigns track ids
/// in-place and returns the track table.
std::vector<Track> track_mpcs(std::vector<std::vector<Mpc>> &per_burst, const EvalParams &params);

/// Windowed DFT across the snapshots of one burst (Hann window, normalized so
/// a static unit-amplitude path peaks at 1). Input: complex amplitude of one
/// (beam pair, delay bin) per snapshot.
std::vector<double> doppler_spectrum(std::span<const std::complex<double>> snapshots);

/// Frequency grid for doppler_spectrum output, ascending, Nyquist positive:
/// n * 1/(S*spacing) for n in [-(S/2-1), S/2].
std::vector<double> doppler_frequencies(int snapshot_count, double snapshot_spacing_s);

/// Spectrum reordered to match doppler_frequencies.
std::vector<double> doppler_spectrum_ordered(std::span<const std::complex<double>> snapshots);

/// Peak frequency with circular 3-point interpolation, wrapped to
/// (-Nyquist, +Nyquist].
double estimate_doppler_peak_hz(std::span<const double> spectrum_ordered,
                                std::span<const double> freqs_hz);

/// RMS delay spread of a thresholded PDP; nullopt when nothing clears the
/// threshold.
std::optional<double> rms_delay_spread(std::span<const double> pdp, double noise_power,
                                       double delay_bin_s, const EvalParams &params);

enum class AngleSide { kDeparture, kArrival };

/// Power-weighted circular mean and spread of MPC azimuths, degrees.
std::optional<std::pair<double, double>> angular_stats(std::span<const Mpc> mpcs, AngleSide side);

/// Total received power above threshold, dB (already de-embedded).
std::optional<double> path_gain_db(std::span<const double> omni, double noise_power,
                                   const EvalParams &params);

/// Per-pair integrated gains for one burst, de-embedded; -inf for pairs with
/// nothing above the noise threshold.
std::vector<double> pair_gains_db(const PdpCube &cube, double noise_power,
                                  const BeamContext &beams, const EvalParams &params);

struct BeamPairAnalysis {
    int fixed_pair = 0;            // best pair over the idle window
    double reference_db = 0.0;     // idle median gain of the fixed pair
    std::vector<int> best_pair;    // per burst
    std::vector<double> best_gain_db;
    std::vector<double> fixed_gain_db;
    std::vector<double> excess_fixed_db;
    std::vector<double> excess_adaptive_db;
};

/// Fixed-beam vs adaptive-beam excess loss over the campaign. The idle
/// reference is the median gain of the best idle-window pair.
BeamPairAnalysis beam_pair_analysis(const std::vector<std::vector<double>> &gain_db_per_burst,
                                    int idle_bursts);

struct BeamSwitchResult {
    std::vector<int> chosen_pair;
    int switch_count = 0;
    double cumulative_loss_db = 0.0; // sum over bursts of (best - chosen)
};

/// Hysteresis + dwell beam-update policy evaluated on a gain series.
BeamSwitchResult beam_switch_strategy(const std::vector<std::vector<double>> &gain_db_per_burst,
                                      double hysteresis_db, int dwell_bursts);

} // namespace ddcs
