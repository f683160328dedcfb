// SPDX-License-Identifier: Apache-2.0
//
// raysense - deterministic radio propagation and multipath sensing simulator
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
#include <span>
#include <vector>

namespace raysense
{

/// Speed of light in vacuum [m/s].
constexpr double kSpeedOfLight = 299792458.0;

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3 &, const Vec3 &) = default;
};

inline Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(const Vec3 &a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(double s, const Vec3 &a) { return a * s; }

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm_sq(const Vec3 &a) { return dot(a, a); }
inline double norm(const Vec3 &a) { return std::sqrt(norm_sq(a)); }
inline double distance(const Vec3 &a, const Vec3 &b) { return norm(b - a); }

inline Vec3 normalized(const Vec3 &a)
{
    const double n = norm(a);
    return n > 0.0 ? a * (1.0 / n) : Vec3{};
}

/// Newell normal of a planar polygon. The magnitude equals twice the enclosed
/// area, the direction follows the winding (right-hand rule).
inline Vec3 newell_normal(std::span<const Vec3> poly)
{
    Vec3 n{};
    const std::size_t count = poly.size();
    for (std::size_t i = 0; i < count; ++i)
    {
        const Vec3 &a = poly[i];
        const Vec3 &b = poly[(i + 1) % count];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
}

inline double polygon_area(std::span<const Vec3> poly) { return 0.5 * norm(newell_normal(poly)); }

} // namespace raysense
