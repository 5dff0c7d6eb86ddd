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

#include "ddcs/array.hpp"

#include <cmath>
#include <stdexcept>

#include "ddcs/geometry.hpp"

namespace ddcs {

BeamGrid BeamGrid::standard() {
    BeamGrid g;
    for (int a = -45; a <= 45; a += 10) g.azimuths_deg.push_back(static_cast<double>(a));
    return g;
}

void BeamGrid::validate() const {
    if (azimuths_deg.empty()) throw std::invalid_argument("BeamGrid: empty azimuth list");
    if (elevations_deg.size() != 1)
        throw std::invalid_argument("BeamGrid: elevation sweeping is not supported (one entry expected)");
    for (std::size_t i = 0; i < azimuths_deg.size(); ++i) {
        if (azimuths_deg[i] < -45.0 - 1e-9 || azimuths_deg[i] > 45.0 + 1e-9)
            throw std::invalid_argument("BeamGrid: azimuth outside steering range [-45, 45]");
        if (i > 0 && azimuths_deg[i] <= azimuths_deg[i - 1])
            throw std::invalid_argument("BeamGrid: azimuths must be strictly increasing");
    }
}

void BeamPattern::validate() const {
    if (beamwidth_az_deg <= 0.0 || beamwidth_el_deg <= 0.0)
        throw std::invalid_argument("BeamPattern: beamwidths must be positive");
    if (sidelobe_floor_db >= -3.0)
        throw std::invalid_argument("BeamPattern: sidelobe floor must be below -3 dB");
}

double beam_power_gain(const BeamPattern &pattern, double az_deg, double el_deg) {
    constexpr double four_ln2 = 2.772588722239781;
    double ra = wrap_deg(az_deg - pattern.steer_az_deg) / pattern.beamwidth_az_deg;
    double re = wrap_deg(el_deg - pattern.steer_el_deg) / pattern.beamwidth_el_deg;
    double main_lobe = std::exp(-four_ln2 * (ra * ra + re * re));
    double rel = std::max(main_lobe, db_to_power(pattern.sidelobe_floor_db));
    return db_to_power(pattern.boresight_gain_dbi) * rel;
}

double beam_amplitude_gain(const BeamPattern &pattern, double az_deg, double el_deg) {
    return std::sqrt(beam_power_gain(pattern, az_deg, el_deg));
}

std::vector<BeamPair> enumerate_beam_pairs(const BeamGrid &tx, const BeamGrid &rx) {
    tx.validate();
    rx.validate();
    std::vector<BeamPair> pairs;
    pairs.reserve(tx.beam_count() * rx.beam_count());
    for (int i = 0; i < static_cast<int>(tx.beam_count()); ++i)
        for (int j = 0; j < static_cast<int>(rx.beam_count()); ++j)
            pairs.push_back({i, j});
    return pairs;
}

} // namespace ddcs
