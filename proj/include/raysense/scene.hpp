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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "raysense/geometry.hpp"

namespace raysense
{

/// Electromagnetic surface description. A perfect reflector short-circuits the
/// Fresnel computation (reflection coefficient -1 at every angle); otherwise
/// rel_permittivity and rel_permeability must both be >= 1.
struct Material
{
    std::string name;
    double rel_permittivity = 1.0;
    double rel_permeability = 1.0;
    bool perfect_reflector = false;

    friend bool operator==(const Material &, const Material &) = default;
};

/// Planar convex polygon with an associated material. Vertices must be
/// coplanar within 1e-9 m and enclose an area > 1e-12 m^2. The unit normal,
/// plane offset (dot(normal, p) == offset for plane points) and area are
/// derived on construction via make_surface().
struct Surface
{
    std::vector<Vec3> vertices;
    Material material;
    bool is_target_face = false;

    // Derived plane data, filled by make_surface().
    Vec3 normal{};
    double offset = 0.0;
    double area = 0.0;

    friend bool operator==(const Surface &, const Surface &) = default;
};

/// Oriented box target (a vehicle). Expands to exactly 5 exposed faces
/// (4 sides + top, bottom omitted: ground contact hides it from rays).
/// `center` is the 3D centroid of the box; a box resting on the ground has
/// center.z == height/2. `yaw` rotates the box about +z; at yaw 0 the width
/// spans x and the depth spans y.
struct TargetObject
{
    std::string id;
    Vec3 center{};
    double width = 0.0;
    double depth = 0.0;
    double height = 0.0;
    double yaw = 0.0;
    Material material;

    friend bool operator==(const TargetObject &, const TargetObject &) = default;
};

/// Fixed transceiver. Every node acts as both transmitter and receiver.
struct Node
{
    std::string id;
    Vec3 position{};

    friend bool operator==(const Node &, const Node &) = default;
};

/// Physical-layer parameters. `bandwidth_hz` doubles as the CIR sample rate,
/// `num_samples` as the CIR window length.
struct RadioModel
{
    double center_frequency_hz = 0.0;
    double bandwidth_hz = 0.0;
    double tx_power_dbm = 0.0;
    double antenna_gain_dbi = 0.0;
    int num_samples = 256;
    int max_reflection_order = 2;

    friend bool operator==(const RadioModel &, const RadioModel &) = default;
};

/// Equidistant 2D sensing grid at a fixed height. Cell (i, j) is centered at
/// (origin_x + (i+0.5)*cell_size, origin_y + (j+0.5)*cell_size, plane_z).
struct GridSpec
{
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_size = 0.1;
    int width = 0;
    int height = 0;
    double plane_z = 1.0;

    double extent_x() const { return width * cell_size; }
    double extent_y() const { return height * cell_size; }
    Vec3 cell_center(int i, int j) const
    {
        return {origin_x + (i + 0.5) * cell_size, origin_y + (j + 0.5) * cell_size, plane_z};
    }
    bool contains(double x, double y) const
    {
        return x >= origin_x && x <= origin_x + extent_x() && y >= origin_y && y <= origin_y + extent_y();
    }

    friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// Named 2D region of the grid scored for occupancy.
struct ParkingLot
{
    std::string id;
    std::vector<std::array<double, 2>> polygon;

    friend bool operator==(const ParkingLot &, const ParkingLot &) = default;
};

/// Complete sensing scenario: environment geometry + materials, target
/// objects, transceiver nodes, radio parameters, sensing grid and parking
/// lots. Immutable after parse; safe to share across concurrent workers.
struct Scenario
{
    std::vector<Material> materials;
    std::vector<Surface> surfaces;
    std::vector<TargetObject> targets;
    std::vector<Node> nodes;
    RadioModel radio;
    GridSpec grid;
    std::vector<ParkingLot> lots;

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Materials available without declaration: concrete (eps_r 5.31), glass
/// (eps_r 6.27) and metal (perfect reflector). Scenario files may redefine
/// them by name. These are configuration defaults, not asserted truths.
std::vector<Material> builtin_materials();

/// Validating Surface constructor; throws ValidationError on a non-planar,
/// non-convex or degenerate polygon.
Surface make_surface(std::vector<Vec3> vertices, Material material, bool is_target_face = false);

/// The 5 exposed faces of a target box, in fixed order: +x, +y, -x, -y, top
/// (local frame before yaw). All faces carry is_target_face = true.
std::array<Surface, 5> target_faces(const TargetObject &t);

/// Parse and fully validate a scenario from JSON text.
/// Throws ParseError (syntax, position-annotated) or ValidationError
/// (unknown material reference, violated invariant; names the invariant).
Scenario parse_scenario(const std::string &text);

/// parse_scenario() applied to the contents of `path`. Throws IoError when
/// the file cannot be read.
Scenario load_scenario(const std::string &path);

/// Canonical JSON serialization; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario &s);

/// Copy of `s` with all targets removed ("empty" survey reference).
/// Idempotent; everything else is left identical.
Scenario reference_scene(const Scenario &s);

/// Full reflector list: static surfaces in declaration order, then the 5
/// faces of every target (targets ordered by id).
std::vector<Surface> expand_geometry(const Scenario &s);

/// FNV-1a hash of the canonical serialization; identifies the scenario in
/// occupancy reports.
std::uint64_t scenario_hash(const Scenario &s);

/// In-plane signed distance from p (assumed on the surface plane) to the
/// polygon boundary: positive inside, negative outside.
double edge_clearance(const Surface &s, const Vec3 &p);

/// Signed distance from p to the surface plane.
inline double plane_distance(const Surface &s, const Vec3 &p) { return dot(s.normal, p) - s.offset; }

/// Even-odd containment test for 2D polygons (lot regions).
bool point_in_polygon_2d(double px, double py, std::span<const std::array<double, 2>> poly);

} // namespace raysense
