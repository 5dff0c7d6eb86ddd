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

#include <cmath>

namespace ddcs {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 &operator+=(const Vec3 &o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3 &o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return n > 0.0 ? *this / n : Vec3{};
    }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Wraps an angle in degrees to [-180, 180).
inline double wrap_deg(double a) {
    double w = std::fmod(a + 180.0, 360.0);
    if (w < 0.0) w += 360.0;
    return w - 180.0;
}

/// Azimuth of the horizontal projection of v, degrees in [-180, 180).
inline double azimuth_deg(const Vec3 &v) {
    return rad2deg(std::atan2(v.y, v.x));
}

/// Elevation of v above the horizontal plane, degrees.
inline double elevation_deg(const Vec3 &v) {
    double h = std::hypot(v.x, v.y);
    return rad2deg(std::atan2(v.z, h));
}

/// Free-space amplitude gain (linear) over distance d at wavelength lambda.
inline double free_space_amplitude(double lambda_m, double distance_m) {
    return lambda_m / (4.0 * kPi * distance_m);
}

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }

} // namespace ddcs
