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

#include <cstddef>
#include <vector>

namespace ddcs {

/// Azimuth/elevation steering angles swept by one array. Only azimuth is
/// swept; the elevation list is carried for completeness and must have a
/// single entry.
struct BeamGrid {
    std::vector<double> azimuths_deg;
    std::vector<double> elevations_deg{0.0};

    /// 10 azimuth beams, -45..45 in 10 degree steps, elevation 0.
    static BeamGrid standard();

    std::size_t beam_count() const { return azimuths_deg.size(); }
    void validate() const;
};

/// Steerable beam: Gaussian mainlobe with a flat sidelobe floor.
struct BeamPattern {
    double steer_az_deg = 0.0;
    double steer_el_deg = 0.0;
    double beamwidth_az_deg = 12.0;  // 3 dB width
    double beamwidth_el_deg = 22.0;  // 3 dB width
    double boresight_gain_dbi = 19.5;
    double sidelobe_floor_db = -20.0; // relative to boresight

    void validate() const;
};

/// Power gain (linear) of the pattern toward (az, el).
double beam_power_gain(const BeamPattern &pattern, double az_deg, double el_deg);

/// Amplitude gain (linear), sqrt of the power gain.
double beam_amplitude_gain(const BeamPattern &pattern, double az_deg, double el_deg);

struct BeamPair {
    int tx_beam = 0;
    int rx_beam = 0;
    bool operator==(const BeamPair &) const = default;
};

/// Sweep order: row-major, all RX beams for the first TX beam, then the next
/// TX beam. Slot timestamps are defined against this order.
std::vector<BeamPair> enumerate_beam_pairs(const BeamGrid &tx, const BeamGrid &rx);

inline std::size_t pair_index(const BeamPair &p, std::size_t rx_count) {
    return static_cast<std::size_t>(p.tx_beam) * rx_count + static_cast<std::size_t>(p.rx_beam);
}

} // namespace ddcs
