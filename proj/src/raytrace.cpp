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

#include "raysense/raytrace.hpp"

#include <algorithm>
#include <cmath>

namespace raysense
{

namespace
{

constexpr double kBoundaryTol = 1e-9;  // m, occlusion grazes / interior margin
constexpr double kSegmentTol = 1e-12;  // parametric, backtrace crossing
constexpr double kMinLegLen = 1e-9;    // m, rejects mirror-degenerate paths

// Back-traces the mirror-image chain to concrete reflection points.
// images[j] is tx mirrored through seq[0..j-1]; images[0] == tx.
// Returns false when any crossing misses its polygon interior.
bool backtrace(std::span<const Surface> geometry, const std::vector<int> &seq,
               const std::vector<Vec3> &images, const Vec3 &rx, std::vector<Vec3> &points)
{
    const int k = static_cast<int>(seq.size());
    points.assign(k, Vec3{});
    Vec3 p = rx;
    for (int j = k - 1; j >= 0; --j)
    {
        const Surface &s = geometry[seq[j]];
        const Vec3 &img = images[j + 1];
        const Vec3 dir = p - img;
        const double denom = dot(s.normal, dir);
        if (std::abs(denom) < 1e-15)
            return false;
        const double t = (s.offset - dot(s.normal, img)) / denom;
        if (t <= kSegmentTol || t >= 1.0 - kSegmentTol)
            return false;
        const Vec3 hit = img + dir * t;
        // Reflection validity needs the strict polygon interior.
        if (edge_clearance(s, hit) < kBoundaryTol)
            return false;
        points[j] = hit;
        p = hit;
    }
    return true;
}

void try_sequence(std::span<const Surface> geometry, const Vec3 &tx, const Vec3 &rx,
                  const std::vector<int> &seq, const std::vector<Vec3> &images,
                  std::vector<PropagationPath> &out)
{
    std::vector<Vec3> points;
    if (!backtrace(geometry, seq, images, rx, points))
        return;

    const int k = static_cast<int>(seq.size());
    std::vector<Vec3> chain;
    chain.reserve(k + 2);
    chain.push_back(tx);
    chain.insert(chain.end(), points.begin(), points.end());
    chain.push_back(rx);

    double total = 0.0;
    for (int leg = 0; leg <= k; ++leg)
    {
        const double len = distance(chain[leg], chain[leg + 1]);
        if (len < kMinLegLen)
            return;
        total += len;

        int ign[2];
        int n_ign = 0;
        if (leg > 0)
            ign[n_ign++] = seq[leg - 1];
        if (leg < k)
            ign[n_ign++] = seq[leg];
        if (occluded(chain[leg], chain[leg + 1], geometry, std::span<const int>(ign, n_ign)))
            return;
    }

    PropagationPath path;
    path.order = k;
    path.surface_indices = seq;
    path.reflection_points = std::move(points);
    path.total_length = total;
    path.incidence_angles.reserve(k);
    path.materials.reserve(k);
    for (int j = 0; j < k; ++j)
    {
        const Surface &s = geometry[seq[j]];
        const Vec3 in_dir = normalized(chain[j + 1] - chain[j]);
        const double c = std::clamp(std::abs(dot(in_dir, s.normal)), 0.0, 1.0);
        path.incidence_angles.push_back(std::acos(c));
        path.materials.push_back(s.material);
    }
    out.push_back(std::move(path));
}

// Depth-first walk in ascending surface index keeps the output lexicographic.
void walk(std::span<const Surface> geometry, const Vec3 &tx, const Vec3 &rx, int remaining,
          std::vector<int> &seq, std::vector<Vec3> &images, std::vector<PropagationPath> &out)
{
    if (remaining == 0)
    {
        try_sequence(geometry, tx, rx, seq, images, out);
        return;
    }
    const int count = static_cast<int>(geometry.size());
    for (int si = 0; si < count; ++si)
    {
        if (!seq.empty() && seq.back() == si)
            continue; // consecutive bounces on one surface cannot be specular
        seq.push_back(si);
        images.push_back(mirror_point(images.back(), geometry[si]));
        walk(geometry, tx, rx, remaining - 1, seq, images, out);
        images.pop_back();
        seq.pop_back();
    }
}

} // namespace

Vec3 mirror_point(const Vec3 &p, const Surface &s)
{
    return p - s.normal * (2.0 * plane_distance(s, p));
}

bool occluded(const Vec3 &a, const Vec3 &b, std::span<const Surface> geometry,
              std::span<const int> ignore)
{
    const Vec3 dir = b - a;
    const int count = static_cast<int>(geometry.size());
    for (int si = 0; si < count; ++si)
    {
        if (std::find(ignore.begin(), ignore.end(), si) != ignore.end())
            continue;
        const Surface &s = geometry[si];
        const double denom = dot(s.normal, dir);
        if (std::abs(denom) < 1e-15)
            continue; // parallel segment never crosses the plane
        const double t = (s.offset - dot(s.normal, a)) / denom;
        if (t <= kBoundaryTol || t >= 1.0 - kBoundaryTol)
            continue;
        const Vec3 hit = a + dir * t;
        // Grazing the polygon rim blocks as well; the receiver shadow of an
        // edge is not resolvable at these wavelengths.
        if (edge_clearance(s, hit) >= -kBoundaryTol)
            return true;
    }
    return false;
}

std::vector<PropagationPath> enumerate_paths(std::span<const Surface> geometry, const Vec3 &tx,
                                             const Vec3 &rx, int max_order)
{
    std::vector<PropagationPath> paths;

    const double los_len = distance(tx, rx);
    if (los_len >= kMinLegLen && !occluded(tx, rx, geometry, {}))
    {
        PropagationPath los;
        los.order = 0;
        los.total_length = los_len;
        paths.push_back(std::move(los));
    }

    std::vector<int> seq;
    std::vector<Vec3> images{tx};
    for (int order = 1; order <= max_order; ++order)
        walk(geometry, tx, rx, order, seq, images, paths);
    return paths;
}

} // namespace raysense
