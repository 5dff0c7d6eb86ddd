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

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddcs/geometry.hpp"

namespace ddcs {

/// Antenna placement: position (z is the mounting height) and the azimuth the
/// array boresight points at, in the scene frame.
struct Pose {
    Vec3 position;
    double boresight_az_deg = 0.0;

    void validate() const;
};

/// Static planar reflector (building face, street furniture). Vertices must
/// be coplanar within 1 mm and form a convex quad.
struct ReflectorFacet {
    std::array<Vec3, 4> vertices;
    double reflection_loss_db = 6.0;
    std::string name;

    Vec3 plane_point() const { return vertices[0]; }
    Vec3 plane_normal() const; // unit
    bool contains(const Vec3 &p) const;
    void validate() const;
};

enum class Material { kMetal, kGlass, kBody };

Material material_from_string(const std::string &s);
const char *to_string(Material m);

/// Penetration attenuation per material, dB.
struct MaterialTable {
    double metal_db = 24.0;
    double glass_db = 10.0;
    double body_db = 10.0;

    double attenuation_db(Material m) const;
    void validate() const;
};

/// Longitudinal section of a mover, listed front (leading face) to back.
struct MaterialSpan {
    double fraction = 1.0;
    Material material = Material::kMetal;
};

struct Waypoint {
    double time_s = 0.0;
    Vec3 position; // footprint center, ground level
};

/// Moving box (bus, car, pedestrian). The box travels along piecewise-linear
/// waypoints, oriented with its length axis along the direction of travel.
/// Movers block paths and reflect off their four lateral faces.
struct Mover {
    std::string id;
    double length_m = 4.5;
    double width_m = 1.8;
    double height_m = 1.5;
    double reflection_loss_db = 6.0;
    std::vector<MaterialSpan> spans{{1.0, Material::kMetal}};
    std::vector<Waypoint> waypoints;

    void validate() const;
};

/// Instantaneous kinematic state of a mover.
struct MoverState {
    Vec3 position;
    Vec3 velocity;
    Vec3 heading; // unit, horizontal
};

enum class PathKind { kLineOfSight, kReflection };

/// One propagation path at an instant. The complex amplitude folds in free
/// space loss, reflection loss, blockage loss, the per-path random static
/// phase and the carrier phase of the current path length; only motion
/// (Doppler) evolves it over time.
struct PathTruth {
    double delay_s = 0.0;
    double dod_az_deg = 0.0, dod_el_deg = 0.0; // TX array frame
    double doa_az_deg = 0.0, doa_el_deg = 0.0; // RX array frame
    std::complex<double> amplitude;
    double doppler_hz = 0.0;
    PathKind kind = PathKind::kLineOfSight;
    bool blocked = false;
    double blockage_loss_db = 0.0;
    std::uint64_t path_id = 0;
};

struct Scene {
    Pose tx, rx;
    std::vector<ReflectorFacet> facets;
    std::vector<Mover> movers;
    MaterialTable materials;
    double duration_s = 0.0;
    std::uint64_t phase_seed = 0;

    void validate() const;
};

/// Mover poses and velocities at time t. Positions are linearly interpolated
/// between waypoints and clamped (stationary) outside the waypoint span.
std::vector<MoverState> scene_at(const Scene &scene, double t_s);

/// Total penetration loss of the segment a-b through the given movers, dB.
/// Each intersected mover contributes the attenuation of the material span
/// hit at the chord midpoint. skip_mover exempts a reflecting mover from
/// shadowing its own path.
double blockage_loss_db(const Vec3 &a, const Vec3 &b, std::span<const Mover> movers,
                        std::span<const MoverState> states, const MaterialTable &materials,
                        int skip_mover = -1);

/// Doppler shift of a path given its vertex chain and per-vertex velocities:
/// nu = -(1/lambda) d(total length)/dt. Reflection points carry the
/// translational velocity of their host surface.
double doppler_of_path(std::span<const Vec3> points, std::span<const Vec3> velocities,
                       double wavelength_m);

/// Ground-truth multipath at time t: the line of sight plus one image-method
/// reflection per facet / mover face whose specular point lies on the
/// reflector, ordered by delay. max_order 0 restricts to the LOS.
std::vector<PathTruth> enumerate_paths(const Scene &scene, double t_s, int max_order = 1,
                                       double carrier_hz = 27.85e9);

} // namespace ddcs
