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

#include "ddcs/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace ddcs {

namespace {

// Street frame: x across the street, y along it, z up.

/// Vertical rectangular facet centered at the specular point, oriented so the
/// horizontal normal bisects the two leg directions (the wall that realizes
/// the reflection at that point).
ReflectorFacet wall_through(const Vec3 &specular, const Vec3 &tx, const Vec3 &rx,
                            double half_width, double z_top, double loss_db,
                            const std::string &name) {
    Vec3 to_tx = tx - specular, to_rx = rx - specular;
    Vec3 n{to_tx.x, to_tx.y, 0.0};
    Vec3 m{to_rx.x, to_rx.y, 0.0};
    Vec3 bis = (n.normalized() + m.normalized()).normalized();
    Vec3 tangent{-bis.y, bis.x, 0.0};
    Vec3 c{specular.x, specular.y, 0.0};
    ReflectorFacet f;
    f.vertices = {c - tangent * half_width, c + tangent * half_width,
                  Vec3{c.x, c.y, z_top} + tangent * half_width,
                  Vec3{c.x, c.y, z_top} - tangent * half_width};
    f.reflection_loss_db = loss_db;
    f.name = name;
    return f;
}

/// Intersection of horizontal rays leaving a and b at the given azimuths,
/// with the reflection-point height interpolated between the endpoint
/// heights by leg length.
Vec3 ray_intersection(const Vec3 &a, double az_a_deg, const Vec3 &b, double az_b_deg) {
    const double ta = deg2rad(az_a_deg), tb = deg2rad(az_b_deg);
    const Vec3 da{std::cos(ta), std::sin(ta), 0.0};
    const Vec3 db{std::cos(tb), std::sin(tb), 0.0};
    const double det = da.x * (-db.y) - (-db.x) * da.y;
    if (std::abs(det) < 1e-12) throw std::runtime_error("preset: parallel construction rays");
    const double rx_x = b.x - a.x, rx_y = b.y - a.y;
    const double t = (rx_x * (-db.y) + db.x * rx_y) / det;
    const double u = (da.x * rx_y - da.y * rx_x) / det;
    if (t <= 0.0 || u <= 0.0) throw std::runtime_error("preset: rays do not meet forward");
    Vec3 p = a + da * t;
    p.z = a.z + (b.z - a.z) * (t / (t + u));
    return p;
}

SounderConfig default_config() {
    SounderConfig c;
    c.waveform.phases_rad.clear();
    return c;
}

} // namespace

ScenarioPreset case1_blocking_bus() {
    ScenarioPreset preset;
    preset.name = "case1_blocking_bus";
    Scene &s = preset.scene;
    s.duration_s = 13.0;
    s.materials = {20.0, 10.0, 10.0}; // metal tuned so the bus body shadows 20 dB

    const double dz = 1.7;
    const double los_3d = 51.0;
    const double street_w = 18.0;
    const double horiz = std::sqrt(los_3d * los_3d - dz * dz);
    const double along = std::sqrt(horiz * horiz - street_w * street_w);
    s.tx = {{-street_w / 2.0, 0.0, 3.5}, 0.0};
    s.rx = {{street_w / 2.0, along, 1.8}, 0.0};
    const double los_az = azimuth_deg(s.rx.position - s.tx.position);
    const double los_back = los_az - 180.0;

    // Main reflection: solve the ray detune that makes the wall path 57.75 m
    // long, then split the detune between the LOS and reflection beams so
    // both sit the same distance off their grid angles.
    const double target_len = 57.75;
    auto reflection_length = [&](double detune) {
        Vec3 p = ray_intersection(s.tx.position, los_az + 50.0 + detune, s.rx.position,
                                  los_back - 10.0 - detune);
        return (p - s.tx.position).norm() + (s.rx.position - p).norm();
    };
    double lo = -4.9, hi = 4.9;
    if (reflection_length(lo) > target_len) std::swap(lo, hi);
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (reflection_length(mid) < target_len ? lo : hi) = mid;
    }
    const double detune = 0.5 * (lo + hi);
    const Vec3 s_main = ray_intersection(s.tx.position, los_az + 50.0 + detune, s.rx.position,
                                         los_back - 10.0 - detune);
    s.tx.boresight_az_deg = wrap_deg(los_az + 15.0 + detune / 2.0);
    s.rx.boresight_az_deg = wrap_deg(los_back + 25.0 - detune / 2.0);

    const double main_loss = 9.0 - 20.0 * std::log10(target_len / los_3d);
    s.facets.push_back(wall_through(s_main, s.tx.position, s.rx.position, 5.0, 6.5, main_loss,
                                    "building_main"));

    // Mid-delay reflector on the TX side; widens the idle delay spread.
    const Vec3 s_aux{-28.0, 16.0, 0.0};
    Vec3 aux = s_aux;
    {
        double l1 = std::hypot(aux.x - s.tx.position.x, aux.y - s.tx.position.y);
        double l2 = std::hypot(s.rx.position.x - aux.x, s.rx.position.y - aux.y);
        aux.z = s.tx.position.z - dz * l1 / (l1 + l2);
    }
    s.facets.push_back(wall_through(aux, s.tx.position, s.rx.position, 4.0, 6.0, 4.0, "wall_aux"));

    // Facade past the street end. The TX sector barely illuminates it, so it
    // only matters once the dominant paths are shadowed.
    Vec3 facade{0.0, 65.0, 0.0};
    {
        double l1 = std::hypot(facade.x - s.tx.position.x, facade.y - s.tx.position.y);
        double l2 = std::hypot(s.rx.position.x - facade.x, s.rx.position.y - facade.y);
        facade.z = s.tx.position.z - dz * l1 / (l1 + l2);
    }
    s.facets.push_back(wall_through(facade, s.tx.position, s.rx.position, 6.0, 7.0, 1.0,
                                    "facade_street_end"));

    // Bus: enters from the TX end, shadows the LOS, then the reflection, and
    // parks covering both.
    Mover bus;
    bus.id = "bus";
    bus.length_m = 13.5;
    bus.width_m = 2.6;
    bus.height_m = 3.2;
    bus.reflection_loss_db = 5.0;
    bus.spans = {{1.0, Material::kMetal}};
    bus.waypoints = {{0.0, {0.0, 5.0, 0.0}}, {2.0, {0.0, 29.0, 0.0}}};
    s.movers.push_back(bus);

    preset.config = default_config();
    preset.config.seed = 1;
    preset.suggested_idle_bursts = 12;
    return preset;
}

ScenarioPreset case2_moving_scatterers() {
    ScenarioPreset preset;
    preset.name = "case2_moving_scatterers";
    Scene &s = preset.scene;
    s.duration_s = 13.0;
    s.tx = {{9.0, 0.0, 2.5}, -90.0};
    s.rx = {{-9.0, 6.0, 1.8}, -90.0};

    // Static wall about 100 m down the street, hit at beams (-5, +5) with a
    // pair gain near -115 dB.
    const Vec3 wall_pt = ray_intersection(s.tx.position, -95.0, s.rx.position, -85.0);
    const double wall_len =
        (wall_pt - s.tx.position).norm() + (s.rx.position - wall_pt).norm();
    const double lambda = kSpeedOfLight / 27.85e9;
    const double fspl_db = -power_to_db(std::pow(free_space_amplitude(lambda, wall_len), 2.0));
    s.facets.push_back(wall_through(wall_pt, s.tx.position, s.rx.position, 7.0, 6.0,
                                    115.0 - fspl_db, "wall_street_end"));

    Mover car1;
    car1.id = "car_1";
    car1.length_m = 4.5;
    car1.width_m = 1.8;
    car1.height_m = 2.4; // van height; the specular point sits near 2.2 m
    car1.reflection_loss_db = 8.0;
    car1.spans = {{1.0, Material::kMetal}};
    car1.waypoints = {{0.0, {0.6, -140.0, 0.0}}, {13.0, {0.6, -62.0, 0.0}}};
    s.movers.push_back(car1);

    Mover ped1;
    ped1.id = "ped_1";
    ped1.length_m = 0.5;
    ped1.width_m = 0.6;
    ped1.height_m = 1.8;
    ped1.reflection_loss_db = 8.0;
    ped1.spans = {{1.0, Material::kBody}};
    ped1.waypoints = {{0.0, {1.2, -24.0, 0.0}}, {13.0, {1.2, -5.8, 0.0}}};
    s.movers.push_back(ped1);

    Mover car2;
    car2.id = "car_2";
    car2.length_m = 4.5;
    car2.width_m = 1.8;
    car2.height_m = 2.4;
    car2.reflection_loss_db = 8.0;
    car2.spans = {{1.0, Material::kMetal}};
    car2.waypoints = {{0.0, {-0.5, -68.0, 0.0}}, {5.0, {-0.5, -68.0, 0.0}}, {13.0, {-0.5, -124.0, 0.0}}};
    s.movers.push_back(car2);

    // A van that closes in over the whole run; near the end its reflection
    // sweeps onto other beams and briefly beats the static-wall pair.
    Mover van3;
    van3.id = "van_3";
    van3.length_m = 4.5;
    van3.width_m = 1.8;
    van3.height_m = 2.4;
    van3.reflection_loss_db = 6.0;
    van3.spans = {{1.0, Material::kMetal}};
    van3.waypoints = {{0.0, {0.6, -120.25, 0.0}}, {13.0, {0.6, -35.75, 0.0}}};
    s.movers.push_back(van3);

    Mover ped2;
    ped2.id = "ped_2";
    ped2.length_m = 0.5;
    ped2.width_m = 0.6;
    ped2.height_m = 1.8;
    ped2.reflection_loss_db = 8.0;
    ped2.spans = {{1.0, Material::kBody}};
    ped2.waypoints = {{0.0, {1.2, -20.0, 0.0}}, {6.0, {1.2, -20.0, 0.0}}, {13.0, {1.2, -30.5, 0.0}}};
    s.movers.push_back(ped2);

    preset.config = default_config();
    preset.config.seed = 2;
    preset.suggested_idle_bursts = 10;
    return preset;
}

ScenarioPreset case3_blocked_los() {
    ScenarioPreset preset;
    preset.name = "case3_blocked_los";
    Scene &s = preset.scene;
    s.duration_s = 13.0;
    s.tx = {{-9.0, 0.0, 4.5}, 0.0};
    s.rx = {{9.0, 30.0, 1.8}, 0.0};
    const double los_az = azimuth_deg(s.rx.position - s.tx.position);
    s.tx.boresight_az_deg = wrap_deg(los_az + 5.0);        // LOS departs at beam -5
    s.rx.boresight_az_deg = wrap_deg(los_az - 180.0 - 5.0); // and arrives at beam +5

    Mover bus;
    bus.id = "bus";
    bus.length_m = 12.0;
    bus.width_m = 2.6;
    bus.height_m = 3.4;
    bus.reflection_loss_db = 5.0;
    bus.spans = {{0.20, Material::kMetal}, {0.55, Material::kGlass}, {0.25, Material::kMetal}};
    bus.waypoints = {{0.0, {2.0, 38.0, 0.0}}, {3.8, {2.0, 0.0, 0.0}}};
    s.movers.push_back(bus);

    preset.config = default_config();
    preset.config.seed = 3;
    preset.suggested_idle_bursts = 15;
    return preset;
}

ScenarioPreset preset_by_name(const std::string &name) {
    if (name == "case1_blocking_bus" || name == "case1") return case1_blocking_bus();
    if (name == "case2_moving_scatterers" || name == "case2") return case2_moving_scatterers();
    if (name == "case3_blocked_los" || name == "case3") return case3_blocked_los();
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"case1_blocking_bus", "case2_moving_scatterers", "case3_blocked_los"};
}

} // namespace ddcs
