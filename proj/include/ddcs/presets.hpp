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

#include <string>
#include <vector>

#include "ddcs/scene.hpp"
#include "ddcs/sounder.hpp"

namespace ddcs {

/// Self-contained street-canyon scenario: scene plus a matching sounder
/// configuration and the burst window known to be idle.
struct ScenarioPreset {
    std::string name;
    Scene scene;
    SounderConfig config;
    int suggested_idle_bursts = 10;
};

/// Idle two-path channel (LOS at 51 m, wall reflection at 57.75 m), then a
/// bus that first shadows the LOS, later both dominant paths, and parks.
ScenarioPreset case1_blocking_bus();

/// No usable LOS (arrays face the same way); a static far wall plus cars and
/// pedestrians passing through the specular corridor.
ScenarioPreset case2_moving_scatterers();

/// Strong bare LOS crossed by a bus with metal front/back sections and a
/// glass middle.
ScenarioPreset case3_blocked_los();

ScenarioPreset preset_by_name(const std::string &name);
std::vector<std::string> preset_names();

} // namespace ddcs
