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

#include "ddcs/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddcs/rng.hpp"

namespace ddcs {

void Pose::validate() const {
    if (position.z <= 0.0) throw std::invalid_argument("Pose: height must be positive");
    if (boresight_az_deg < -180.0 || boresight_az_deg >= 180.0)
        throw std::invalid_argument("Pose: boresight azimuth outside [-180, 180)");
}

Vec3 ReflectorFacet::plane_normal() const {
    return (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]).normalized();
}

bool ReflectorFacet::contains(const Vec3 &p) const {
    const Vec3 n = plane_normal();
    if (std::abs((p - vertices[0]).dot(n)) > 1e-6) return false;
    // Convex quad: p must be on a consistent side of all edges.
    double sign = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Vec3 &a = vertices[i];
        const Vec3 &b = vertices[(i + 1) % 4];
        double s = (b - a).cross(p - a).dot(n);
        if (std::abs(s) < 1e-12) continue;
        if (sign == 0.0) sign = s;
        else if (sign * s < 0.0) return false;
    }
    return true;
}

void ReflectorFacet::validate() const {
    if (reflection_loss_db < 0.0) throw std::invalid_argument("ReflectorFacet: reflection loss must be >= 0");
    const Vec3 n = plane_normal();
    if (n.norm() < 0.5) throw std::invalid_argument("ReflectorFacet: degenerate vertices");
    double offset = std::abs((vertices[3] - vertices[0]).dot(n));
    if (offset > 1e-3)
        throw std::invalid_argument("ReflectorFacet '" + name + "': vertices not coplanar within 1 mm");
}

Material material_from_string(const std::string &s) {
    if (s == "metal") return Material::kMetal;
    if (s == "glass") return Material::kGlass;
    if (s == "body") return Material::kBody;
    throw std::invalid_argument("unknown material '" + s + "'");
}

const char *to_string(Material m) {
    switch (m) {
        case Material::kMetal: return "metal";
        case Material::kGlass: return "glass";
        default: return "body";
    }
}

double MaterialTable::attenuation_db(Material m) const {
    switch (m) {
        case Material::kMetal: return metal_db;
        case Material::kGlass: return glass_db;
        default: return body_db;
    }
}

void MaterialTable::validate() const {
    if (metal_db < 0.0 || glass_db < 0.0 || body_db < 0.0)
        throw std::invalid_argument("MaterialTable: attenuations must be >= 0");
}

void Mover::validate() const {
    if (id.empty()) throw std::invalid_argument("Mover: empty id");
    if (length_m <= 0.0 || width_m <= 0.0 || height_m <= 0.0)
        throw std::invalid_argument("Mover '" + id + "': dimensions must be positive");
    if (reflection_loss_db < 0.0)
        throw std::invalid_argument("Mover '" + id + "': reflection loss must be >= 0");
    if (waypoints.empty()) throw std::invalid_argument("Mover '" + id + "': no waypoints");
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        if (waypoints[i].time_s <= waypoints[i - 1].time_s)
            throw std::invalid_argument("Mover '" + id + "': waypoint times must be strictly increasing");
    if (spans.empty()) throw std::invalid_argument("Mover '" + id + "': no material spans");
    double total = 0.0;
    for (const auto &s : spans) {
        if (s.fraction <= 0.0) throw std::invalid_argument("Mover '" + id + "': span fractions must be positive");
        total += s.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("Mover '" + id + "': span fractions must partition [0, 1]");
}

void Scene::validate() const {
    tx.validate();
    rx.validate();
    materials.validate();
    for (const auto &f : facets) f.validate();
    for (const auto &m : movers) m.validate();
    if (duration_s < 0.0) throw std::invalid_argument("Scene: negative duration");
}

namespace {

Vec3 horizontal_unit(const Vec3 &v) {
    Vec3 h{v.x, v.y, 0.0};
    double n = h.norm();
    return n > 1e-12 ? h / n : Vec3{1.0, 0.0, 0.0};
}

MoverState mover_state_at(const Mover &m, double t) {
    const auto &wp = m.waypoints;
    MoverState st;
    // Heading falls back to the nearest segment with nonzero displacement so a
    // parked mover keeps its travel orientation.
    auto segment_heading = [&](std::size_t i) -> std::optional<Vec3> {
        Vec3 d = wp[i + 1].position - wp[i].position;
        if (Vec3{d.x, d.y, 0.0}.norm() > 1e-12) return horizontal_unit(d);
        return std::nullopt;
    };

    std::size_t seg = 0;
    if (wp.size() == 1 || t <= wp.front().time_s) {
        st.position = wp.front().position;
        st.velocity = {};
        seg = 0;
    } else if (t >= wp.back().time_s) {
        st.position = wp.back().position;
        st.velocity = {};
        seg = wp.size() - 2;
    } else {
        while (seg + 2 < wp.size() && t >= wp[seg + 1].time_s) ++seg;
        const Waypoint &a = wp[seg];
        const Waypoint &b = wp[seg + 1];
        double f = (t - a.time_s) / (b.time_s - a.time_s);
        st.position = a.position + (b.position - a.position) * f;
        st.velocity = (b.position - a.position) / (b.time_s - a.time_s);
    }

    st.heading = {1.0, 0.0, 0.0};
    if (wp.size() >= 2) {
        for (std::size_t i = seg + 1; i-- > 0;) {
            if (auto h = segment_heading(i)) { st.heading = *h; return st; }
        }
        for (std::size_t i = seg; i + 1 < wp.size(); ++i) {
            if (auto h = segment_heading(i)) { st.heading = *h; return st; }
        }
    }
    return st;
}

struct MoverFrame {
    Vec3 origin; // footprint center at ground
    Vec3 ax;     // heading
    Vec3 ay;     // lateral (z cross heading)
    Vec3 az{0.0, 0.0, 1.0};

    explicit MoverFrame(const MoverState &st) : origin(st.position), ax(st.heading) {
        ay = Vec3{0.0, 0.0, 1.0}.cross(ax).normalized();
    }
    Vec3 to_local(const Vec3 &p) const {
        Vec3 d = p - origin;
        return {d.dot(ax), d.dot(ay), d.dot(az)};
    }
};

/// Material span hit at longitudinal coordinate x_local (front at +L/2).
Material span_at(const Mover &m, double x_local) {
    double frac = (m.length_m / 2.0 - x_local) / m.length_m;
    frac = std::clamp(frac, 0.0, 1.0);
    double acc = 0.0;
    for (const auto &s : m.spans) {
        acc += s.fraction;
        if (frac <= acc + 1e-12) return s.material;
    }
    return m.spans.back().material;
}

} // namespace

std::vector<MoverState> scene_at(const Scene &scene, double t_s) {
    std::vector<MoverState> states;
    states.reserve(scene.movers.size());
    for (const auto &m : scene.movers) states.push_back(mover_state_at(m, t_s));
    return states;
}

double blockage_loss_db(const Vec3 &a, const Vec3 &b, std::span<const Mover> movers,
                        std::span<const MoverState> states, const MaterialTable &materials,
                        int skip_mover) {
    if (movers.size() != states.size())
        throw std::invalid_argument("blockage_loss_db: mover/state count mismatch");
    double loss = 0.0;
    for (std::size_t mi = 0; mi < movers.size(); ++mi) {
        if (static_cast<int>(mi) == skip_mover) continue;
        const Mover &m = movers[mi];
        MoverFrame frame(states[mi]);
        Vec3 p0 = frame.to_local(a);
        Vec3 p1 = frame.to_local(b);
        Vec3 d = p1 - p0;
        double lo[3] = {-m.length_m / 2.0, -m.width_m / 2.0, 0.0};
        double hi[3] = {m.length_m / 2.0, m.width_m / 2.0, m.height_m};
        double c0[3] = {p0.x, p0.y, p0.z};
        double cd[3] = {d.x, d.y, d.z};
        double t0 = 0.0, t1 = 1.0;
        bool miss = false;
        for (int ax = 0; ax < 3 && !miss; ++ax) {
            if (std::abs(cd[ax]) < 1e-12) {
                if (c0[ax] < lo[ax] || c0[ax] > hi[ax]) miss = true;
            } else {
                double ta = (lo[ax] - c0[ax]) / cd[ax];
                double tb = (hi[ax] - c0[ax]) / cd[ax];
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
                if (t0 >= t1) miss = true;
            }
        }
        if (miss || t1 - t0 <= 1e-9) continue;
        double x_mid = c0[0] + cd[0] * 0.5 * (t0 + t1);
        loss += materials.attenuation_db(span_at(m, x_mid));
    }
    return loss;
}

double doppler_of_path(std::span<const Vec3> points, std::span<const Vec3> velocities,
                       double wavelength_m) {
    if (points.size() < 2 || points.size() != velocities.size())
        throw std::invalid_argument("doppler_of_path: need matching point/velocity chains");
    double dldt = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        Vec3 leg = points[i + 1] - points[i];
        double len = leg.norm();
        if (len < 1e-12) continue;
        dldt += (leg / len).dot(velocities[i + 1] - velocities[i]);
    }
    return -dldt / wavelength_m;
}

namespace {

struct SpecularHit {
    Vec3 point;
    double total_length;
};

/// Image-method reflection of tx->rx across the plane (point, unit normal).
/// Requires both terminals on the normal side of the plane.
std::optional<SpecularHit> specular_point(const Vec3 &tx, const Vec3 &rx, const Vec3 &plane_pt,
                                          const Vec3 &n) {
    double dt = (tx - plane_pt).dot(n);
    double dr = (rx - plane_pt).dot(n);
    if (dt <= 1e-9 || dr <= 1e-9) return std::nullopt;
    Vec3 txi = tx - n * (2.0 * dt);
    Vec3 dir = rx - txi;
    double denom = dir.dot(n);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    double t = (plane_pt - txi).dot(n) / denom;
    if (t <= 1e-9 || t >= 1.0 - 1e-9) return std::nullopt;
    return SpecularHit{txi + dir * t, dir.norm()};
}

} // namespace

std::vector<PathTruth> enumerate_paths(const Scene &scene, double t_s, int max_order,
                                       double carrier_hz) {
    if (max_order != 0 && max_order != 1)
        throw std::invalid_argument("enumerate_paths: max_order must be 0 or 1");
    const double lambda = kSpeedOfLight / carrier_hz;
    const Vec3 tx = scene.tx.position;
    const Vec3 rx = scene.rx.position;
    const auto states = scene_at(scene, t_s);
    const CounterRng phase_rng(derive_key(scene.phase_seed, 0x504854ULL)); // path phases

    std::vector<PathTruth> paths;

    auto finish_path = [&](PathTruth &p, const Vec3 &dod_dir, const Vec3 &doa_dir,
                           double total_len, double refl_loss_db, double block_db,
                           double doppler_hz) {
        p.delay_s = total_len / kSpeedOfLight;
        p.dod_az_deg = wrap_deg(azimuth_deg(dod_dir) - scene.tx.boresight_az_deg);
        p.dod_el_deg = elevation_deg(dod_dir);
        p.doa_az_deg = wrap_deg(azimuth_deg(doa_dir) - scene.rx.boresight_az_deg);
        p.doa_el_deg = elevation_deg(doa_dir);
        p.doppler_hz = doppler_hz;
        p.blocked = block_db > 0.0;
        p.blockage_loss_db = block_db;
        double static_phase = 2.0 * kPi * phase_rng.uniform(p.path_id);
        double mag = free_space_amplitude(lambda, total_len) *
                     db_to_amplitude(-(refl_loss_db + block_db));
        p.amplitude = std::polar(mag, static_phase - 2.0 * kPi * total_len / lambda);
        paths.push_back(p);
    };

    { // line of sight
        PathTruth p;
        p.kind = PathKind::kLineOfSight;
        p.path_id = 1;
        double len = (rx - tx).norm();
        double block = blockage_loss_db(tx, rx, scene.movers, states, scene.materials);
        finish_path(p, rx - tx, tx - rx, len, 0.0, block, 0.0);
    }

    if (max_order >= 1) {
        for (std::size_t fi = 0; fi < scene.facets.size(); ++fi) {
            const auto &facet = scene.facets[fi];
            Vec3 n = facet.plane_normal();
            if ((tx - facet.plane_point()).dot(n) < 0.0) n = n * -1.0;
            auto hit = specular_point(tx, rx, facet.plane_point(), n);
            if (!hit || !facet.contains(hit->point)) continue;
            const Vec3 s = hit->point;
            double block = blockage_loss_db(tx, s, scene.movers, states, scene.materials) +
                           blockage_loss_db(s, rx, scene.movers, states, scene.materials);
            PathTruth p;
            p.kind = PathKind::kReflection;
            p.path_id = 0x100 + fi;
            finish_path(p, s - tx, s - rx, hit->total_length, facet.reflection_loss_db, block, 0.0);
        }

        for (std::size_t mi = 0; mi < scene.movers.size(); ++mi) {
            const Mover &m = scene.movers[mi];
            MoverFrame frame(states[mi]);
            const Vec3 face_centers[4] = {
                frame.origin + frame.ax * (m.length_m / 2.0) + Vec3{0, 0, m.height_m / 2.0},
                frame.origin - frame.ax * (m.length_m / 2.0) + Vec3{0, 0, m.height_m / 2.0},
                frame.origin + frame.ay * (m.width_m / 2.0) + Vec3{0, 0, m.height_m / 2.0},
                frame.origin - frame.ay * (m.width_m / 2.0) + Vec3{0, 0, m.height_m / 2.0},
            };
            const Vec3 normals[4] = {frame.ax, frame.ax * -1.0, frame.ay, frame.ay * -1.0};
            for (int f = 0; f < 4; ++f) {
                auto hit = specular_point(tx, rx, face_centers[f], normals[f]);
                if (!hit) continue;
                Vec3 local = frame.to_local(hit->point);
                bool on_face = local.z >= 0.0 && local.z <= m.height_m;
                if (f < 2) on_face = on_face && std::abs(local.y) <= m.width_m / 2.0;
                else on_face = on_face && std::abs(local.x) <= m.length_m / 2.0;
                if (!on_face) continue;
                const Vec3 s = hit->point;
                double block =
                    blockage_loss_db(tx, s, scene.movers, states, scene.materials, static_cast<int>(mi)) +
                    blockage_loss_db(s, rx, scene.movers, states, scene.materials, static_cast<int>(mi));
                const Vec3 pts[3] = {tx, s, rx};
                const Vec3 vel[3] = {{}, states[mi].velocity, {}};
                double nu = doppler_of_path(pts, vel, lambda);
                PathTruth p;
                p.kind = PathKind::kReflection;
                p.path_id = 0x10000 + mi * 4 + static_cast<std::size_t>(f);
                finish_path(p, s - tx, s - rx, hit->total_length, m.reflection_loss_db, block, nu);
            }
        }
    }

    std::sort(paths.begin(), paths.end(), [](const PathTruth &a, const PathTruth &b) {
        if (a.delay_s != b.delay_s) return a.delay_s < b.delay_s;
        return a.path_id < b.path_id;
    });
    return paths;
}

} // namespace ddcs
