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

#include <span>
#include <vector>

#include "raysense/scene.hpp"

namespace raysense
{

/// One specular propagation path between a transmitter and a receiver,
/// produced by the image (mirror) method. Surfaces are referenced by index
/// into the geometry list passed to enumerate_paths(); the per-bounce
/// materials are copied so the path stays self-contained.
///
/// Invariants (asserted in tests, guaranteed by mirror construction):
///  - total_length equals the polyline length tx -> points -> rx within
///    1e-9 relative,
///  - every reflection point lies on its surface plane (1e-9 m) and strictly
///    inside its polygon,
///  - angle of incidence equals angle of reflection at every bounce.
struct PropagationPath
{
    int order = 0;
    std::vector<int> surface_indices;
    std::vector<Vec3> reflection_points;
    std::vector<double> incidence_angles; // measured from the surface normal
    std::vector<Material> materials;
    double total_length = 0.0;
};

/// Reflection of p across the surface's plane.
Vec3 mirror_point(const Vec3 &p, const Surface &s);

/// True iff the open segment (a, b) intersects any surface polygon whose
/// index is not in `ignore`. Intersections within 1e-9 m of a polygon
/// boundary count as hits; endpoints touching an ignored surface do not.
bool occluded(const Vec3 &a, const Vec3 &b, std::span<const Surface> geometry,
              std::span<const int> ignore);

/// All valid specular paths of reflection order 0..max_order between tx and
/// rx. For each ordered surface sequence (no consecutive repeats) nested
/// mirror images of tx are built, the back-traced segments are intersected
/// with each surface polygon, and the path is rejected if any reflection
/// point falls outside its polygon (strict interior by >= 1e-9 m) or any
/// segment is occluded. Line of sight (order 0) is included iff unoccluded.
/// Result order is deterministic: ascending reflection order, then
/// lexicographic surface sequence. Pure function of immutable geometry;
/// concurrent calls are safe.
std::vector<PropagationPath> enumerate_paths(std::span<const Surface> geometry, const Vec3 &tx,
                                             const Vec3 &rx, int max_order);

} // namespace raysense
