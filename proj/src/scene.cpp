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

#include "raysense/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "raysense/errors.hpp"

namespace raysense
{

namespace
{

using nlohmann::json;

constexpr double kCoplanarTol = 1e-9;   // m
constexpr double kMinArea = 1e-12;      // m^2
constexpr double kMinNodeSep = 1e-6;    // m

double require_number(const json &obj, const char *key, const std::string &ctx)
{
    if (!obj.contains(key) || !obj[key].is_number())
        throw ValidationError(ctx + ": missing or non-numeric field '" + key + "'");
    return obj[key].get<double>();
}

double number_or(const json &obj, const char *key, double fallback)
{
    if (!obj.contains(key))
        return fallback;
    return obj[key].get<double>();
}

std::string require_string(const json &obj, const char *key, const std::string &ctx)
{
    if (!obj.contains(key) || !obj[key].is_string())
        throw ValidationError(ctx + ": missing or non-string field '" + key + "'");
    return obj[key].get<std::string>();
}

Vec3 parse_vec3(const json &arr, const std::string &ctx)
{
    if (!arr.is_array() || arr.size() != 3)
        throw ValidationError(ctx + ": expected a 3-element array");
    return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

std::array<double, 2> parse_vec2(const json &arr, const std::string &ctx)
{
    if (!arr.is_array() || arr.size() != 2)
        throw ValidationError(ctx + ": expected a 2-element array");
    return {arr[0].get<double>(), arr[1].get<double>()};
}

const Material &resolve_material(const std::vector<Material> &table, const std::string &name,
                                 const std::string &ctx)
{
    for (const auto &m : table)
        if (m.name == name)
            return m;
    throw ValidationError(ctx + ": unknown material reference '" + name + "'");
}

void validate_material(const Material &m)
{
    if (m.name.empty())
        throw ValidationError("material: name must be non-empty");
    if (m.perfect_reflector)
        return; // permittivity/permeability ignored
    if (!(m.rel_permittivity >= 1.0))
        throw ValidationError("material '" + m.name +
                              "': invariant violated: rel_permittivity >= 1 (got " +
                              std::to_string(m.rel_permittivity) + ")");
    if (!(m.rel_permeability >= 1.0))
        throw ValidationError("material '" + m.name +
                              "': invariant violated: rel_permeability >= 1 (got " +
                              std::to_string(m.rel_permeability) + ")");
}

void validate_radio(const RadioModel &r)
{
    if (!(r.bandwidth_hz > 0.0))
        throw ValidationError("radio: invariant violated: bandwidth > 0");
    if (!(r.center_frequency_hz > r.bandwidth_hz / 2.0))
        throw ValidationError("radio: invariant violated: center_frequency > bandwidth/2");
    if (r.num_samples < 2)
        throw ValidationError("radio: invariant violated: num_samples >= 2");
    if (r.max_reflection_order < 0 || r.max_reflection_order > 3)
        throw ValidationError("radio: invariant violated: max_reflection_order in [0, 3]");
}

void validate_grid(const GridSpec &g)
{
    if (!(g.cell_size > 0.0))
        throw ValidationError("grid: cell_size must be > 0");
    if (g.width < 1 || g.height < 1)
        throw ValidationError("grid: width and height must be >= 1");
}

void validate_scenario(const Scenario &s)
{
    validate_radio(s.radio);
    validate_grid(s.grid);

    std::set<std::string> node_ids;
    for (const auto &n : s.nodes)
    {
        if (n.id.empty())
            throw ValidationError("node: id must be non-empty");
        if (!node_ids.insert(n.id).second)
            throw ValidationError("node '" + n.id + "': duplicate node id");
        if (!s.grid.contains(n.position.x, n.position.y))
            throw ValidationError("node '" + n.id +
                                  "': invariant violated: grid must cover all node ground projections");
    }
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < s.nodes.size(); ++j)
            if (distance(s.nodes[i].position, s.nodes[j].position) <= kMinNodeSep)
                throw ValidationError("nodes '" + s.nodes[i].id + "' and '" + s.nodes[j].id +
                                      "': invariant violated: node positions pairwise distinct");

    std::set<std::string> target_ids;
    for (const auto &t : s.targets)
    {
        if (t.id.empty())
            throw ValidationError("target: id must be non-empty");
        if (!target_ids.insert(t.id).second)
            throw ValidationError("target '" + t.id + "': duplicate target id");
        if (!(t.width > 0.0 && t.depth > 0.0 && t.height > 0.0))
            throw ValidationError("target '" + t.id +
                                  "': invariant violated: dimensions must each be > 0");
        validate_material(t.material);
    }

    std::set<std::string> lot_ids;
    for (const auto &lot : s.lots)
    {
        if (lot.id.empty())
            throw ValidationError("lot: id must be non-empty");
        if (!lot_ids.insert(lot.id).second)
            throw ValidationError("lot '" + lot.id + "': duplicate lot id");
        if (lot.polygon.size() < 3)
            throw ValidationError("lot '" + lot.id + "': polygon needs at least 3 vertices");
        for (const auto &p : lot.polygon)
            if (!s.grid.contains(p[0], p[1]))
                throw ValidationError("lot '" + lot.id +
                                      "': invariant violated: lot polygons must lie within the grid extent");
    }
}

json vec3_to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

json material_to_json(const Material &m)
{
    json j;
    j["name"] = m.name;
    j["rel_permittivity"] = m.rel_permittivity;
    j["rel_permeability"] = m.rel_permeability;
    j["perfect_reflector"] = m.perfect_reflector;
    return j;
}

} // namespace

std::vector<Material> builtin_materials()
{
    return {
        {"concrete", 5.31, 1.0, false},
        {"glass", 6.27, 1.0, false},
        {"metal", 1.0, 1.0, true},
    };
}

Surface make_surface(std::vector<Vec3> vertices, Material material, bool is_target_face)
{
    if (vertices.size() < 3)
        throw ValidationError("surface: invariant violated: at least 3 vertices required");

    Surface s;
    s.vertices = std::move(vertices);
    s.material = std::move(material);
    s.is_target_face = is_target_face;
    validate_material(s.material);

    const Vec3 n_raw = newell_normal(s.vertices);
    s.area = 0.5 * norm(n_raw);
    if (!(s.area > kMinArea))
        throw ValidationError("surface: invariant violated: polygon is degenerate (area <= 1e-12 m^2)");
    s.normal = normalized(n_raw);

    // Plane through the vertex centroid; check coplanarity against it.
    Vec3 centroid{};
    for (const auto &v : s.vertices)
        centroid = centroid + v;
    centroid = centroid * (1.0 / static_cast<double>(s.vertices.size()));
    s.offset = dot(s.normal, centroid);

    for (const auto &v : s.vertices)
        if (std::abs(dot(s.normal, v) - s.offset) > kCoplanarTol)
            throw ValidationError("surface: invariant violated: vertices not coplanar within 1e-9 m");

    // Convexity: consecutive edge cross products must not oppose the normal.
    const std::size_t count = s.vertices.size();
    for (std::size_t i = 0; i < count; ++i)
    {
        const Vec3 e0 = s.vertices[(i + 1) % count] - s.vertices[i];
        const Vec3 e1 = s.vertices[(i + 2) % count] - s.vertices[(i + 1) % count];
        if (dot(cross(e0, e1), s.normal) < -kCoplanarTol)
            throw ValidationError("surface: invariant violated: polygon must be convex");
    }
    return s;
}

std::array<Surface, 5> target_faces(const TargetObject &t)
{
    const double hx = t.width / 2.0;
    const double hy = t.depth / 2.0;
    const double hz = t.height / 2.0;
    const double cy = std::cos(t.yaw);
    const double sy = std::sin(t.yaw);

    auto world = [&](double lx, double ly, double lz) -> Vec3 {
        return {t.center.x + cy * lx - sy * ly, t.center.y + sy * lx + cy * ly, t.center.z + lz};
    };

    auto face = [&](std::array<std::array<double, 3>, 4> local) {
        std::vector<Vec3> v;
        v.reserve(4);
        for (const auto &p : local)
            v.push_back(world(p[0], p[1], p[2]));
        return make_surface(std::move(v), t.material, true);
    };

    // Fixed side order: +x, +y, -x, -y, top. Bottom omitted (ground contact).
    return {
        face({{{hx, -hy, -hz}, {hx, hy, -hz}, {hx, hy, hz}, {hx, -hy, hz}}}),
        face({{{hx, hy, -hz}, {-hx, hy, -hz}, {-hx, hy, hz}, {hx, hy, hz}}}),
        face({{{-hx, hy, -hz}, {-hx, -hy, -hz}, {-hx, -hy, hz}, {-hx, hy, hz}}}),
        face({{{-hx, -hy, -hz}, {hx, -hy, -hz}, {hx, -hy, hz}, {-hx, -hy, hz}}}),
        face({{{-hx, -hy, hz}, {hx, -hy, hz}, {hx, hy, hz}, {-hx, hy, hz}}}),
    };
}

Scenario parse_scenario(const std::string &text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ParseError(std::string("scenario syntax error: ") + e.what());
    }
    if (!root.is_object())
        throw ParseError("scenario syntax error: top level must be an object");

    try
    {
        Scenario s;
        s.materials = builtin_materials();

        if (root.contains("materials"))
        {
            for (const auto &jm : root["materials"])
            {
                Material m;
                m.name = require_string(jm, "name", "material");
                m.perfect_reflector = jm.value("perfect_reflector", false);
                m.rel_permittivity = number_or(jm, "rel_permittivity", 1.0);
                m.rel_permeability = number_or(jm, "rel_permeability", 1.0);
                validate_material(m);
                auto existing = std::find_if(s.materials.begin(), s.materials.end(),
                                             [&](const Material &x) { return x.name == m.name; });
                if (existing != s.materials.end())
                    *existing = m; // redefinition of a builtin keeps its slot
                else
                    s.materials.push_back(m);
            }
        }

        if (root.contains("surfaces"))
        {
            for (const auto &js : root["surfaces"])
            {
                const std::string name = require_string(js, "material", "surface");
                const Material &mat = resolve_material(s.materials, name, "surface");
                if (!js.contains("vertices") || !js["vertices"].is_array())
                    throw ValidationError("surface: missing 'vertices' array");
                std::vector<Vec3> verts;
                for (const auto &jv : js["vertices"])
                    verts.push_back(parse_vec3(jv, "surface vertex"));
                s.surfaces.push_back(make_surface(std::move(verts), mat, false));
            }
        }

        if (root.contains("targets"))
        {
            for (const auto &jt : root["targets"])
            {
                TargetObject t;
                t.id = require_string(jt, "id", "target");
                t.center = parse_vec3(jt.value("center", json::array({0, 0, 0})), "target '" + t.id + "' center");
                if (!jt.contains("dimensions") || !jt["dimensions"].is_array() || jt["dimensions"].size() != 3)
                    throw ValidationError("target '" + t.id + "': 'dimensions' must be [width, depth, height]");
                t.width = jt["dimensions"][0].get<double>();
                t.depth = jt["dimensions"][1].get<double>();
                t.height = jt["dimensions"][2].get<double>();
                t.yaw = number_or(jt, "yaw", 0.0);
                // Vehicles default to the metal builtin: a perfect reflector.
                const std::string mat_name = jt.value("material", std::string("metal"));
                t.material = resolve_material(s.materials, mat_name, "target '" + t.id + "'");
                s.targets.push_back(std::move(t));
            }
        }

        if (root.contains("nodes"))
        {
            for (const auto &jn : root["nodes"])
            {
                Node n;
                n.id = require_string(jn, "id", "node");
                if (!jn.contains("position"))
                    throw ValidationError("node '" + n.id + "': missing 'position'");
                n.position = parse_vec3(jn["position"], "node '" + n.id + "' position");
                s.nodes.push_back(std::move(n));
            }
        }

        if (!root.contains("radio"))
            throw ValidationError("scenario: missing 'radio' block");
        const json &jr = root["radio"];
        s.radio.center_frequency_hz = require_number(jr, "center_frequency_hz", "radio");
        s.radio.bandwidth_hz = require_number(jr, "bandwidth_hz", "radio");
        s.radio.tx_power_dbm = number_or(jr, "tx_power_dbm", 0.0);
        s.radio.antenna_gain_dbi = number_or(jr, "antenna_gain_dbi", 0.0);
        s.radio.num_samples = static_cast<int>(number_or(jr, "num_samples", 256));
        s.radio.max_reflection_order = static_cast<int>(number_or(jr, "max_reflection_order", 2));

        if (!root.contains("grid"))
            throw ValidationError("scenario: missing 'grid' block");
        const json &jg = root["grid"];
        const auto origin = parse_vec2(jg.value("origin", json::array({0, 0})), "grid origin");
        s.grid.origin_x = origin[0];
        s.grid.origin_y = origin[1];
        s.grid.cell_size = require_number(jg, "cell_size", "grid");
        s.grid.width = static_cast<int>(require_number(jg, "width", "grid"));
        s.grid.height = static_cast<int>(require_number(jg, "height", "grid"));
        s.grid.plane_z = number_or(jg, "plane_z", 1.0);

        if (root.contains("lots"))
        {
            for (const auto &jl : root["lots"])
            {
                ParkingLot lot;
                lot.id = require_string(jl, "id", "lot");
                if (!jl.contains("polygon") || !jl["polygon"].is_array())
                    throw ValidationError("lot '" + lot.id + "': missing 'polygon' array");
                for (const auto &jp : jl["polygon"])
                    lot.polygon.push_back(parse_vec2(jp, "lot '" + lot.id + "' vertex"));
                s.lots.push_back(std::move(lot));
            }
        }

        validate_scenario(s);
        return s;
    }
    catch (const json::exception &e)
    {
        throw ParseError(std::string("scenario syntax error: ") + e.what());
    }
}

Scenario load_scenario(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario &s)
{
    json root;

    root["materials"] = json::array();
    for (const auto &m : s.materials)
        root["materials"].push_back(material_to_json(m));

    root["surfaces"] = json::array();
    for (const auto &surf : s.surfaces)
    {
        json js;
        js["vertices"] = json::array();
        for (const auto &v : surf.vertices)
            js["vertices"].push_back(vec3_to_json(v));
        js["material"] = surf.material.name;
        root["surfaces"].push_back(js);
    }

    root["targets"] = json::array();
    for (const auto &t : s.targets)
    {
        json jt;
        jt["id"] = t.id;
        jt["center"] = vec3_to_json(t.center);
        jt["dimensions"] = json::array({t.width, t.depth, t.height});
        jt["yaw"] = t.yaw;
        jt["material"] = t.material.name;
        root["targets"].push_back(jt);
    }

    root["nodes"] = json::array();
    for (const auto &n : s.nodes)
    {
        json jn;
        jn["id"] = n.id;
        jn["position"] = vec3_to_json(n.position);
        root["nodes"].push_back(jn);
    }

    root["radio"] = {{"center_frequency_hz", s.radio.center_frequency_hz},
                     {"bandwidth_hz", s.radio.bandwidth_hz},
                     {"tx_power_dbm", s.radio.tx_power_dbm},
                     {"antenna_gain_dbi", s.radio.antenna_gain_dbi},
                     {"num_samples", s.radio.num_samples},
                     {"max_reflection_order", s.radio.max_reflection_order}};

    root["grid"] = {{"origin", json::array({s.grid.origin_x, s.grid.origin_y})},
                    {"cell_size", s.grid.cell_size},
                    {"width", s.grid.width},
                    {"height", s.grid.height},
                    {"plane_z", s.grid.plane_z}};

    root["lots"] = json::array();
    for (const auto &lot : s.lots)
    {
        json jl;
        jl["id"] = lot.id;
        jl["polygon"] = json::array();
        for (const auto &p : lot.polygon)
            jl["polygon"].push_back(json::array({p[0], p[1]}));
        root["lots"].push_back(jl);
    }

    return root.dump(2);
}

Scenario reference_scene(const Scenario &s)
{
    Scenario ref = s;
    ref.targets.clear();
    return ref;
}

std::vector<Surface> expand_geometry(const Scenario &s)
{
    std::vector<Surface> geometry = s.surfaces;

    std::vector<const TargetObject *> ordered;
    ordered.reserve(s.targets.size());
    for (const auto &t : s.targets)
        ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](const TargetObject *a, const TargetObject *b) { return a->id < b->id; });

    for (const TargetObject *t : ordered)
        for (auto &face : target_faces(*t))
            geometry.push_back(std::move(face));
    return geometry;
}

std::uint64_t scenario_hash(const Scenario &s)
{
    const std::string text = serialize_scenario(s);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double edge_clearance(const Surface &s, const Vec3 &p)
{
    double min_dist = std::numeric_limits<double>::infinity();
    const std::size_t count = s.vertices.size();
    for (std::size_t i = 0; i < count; ++i)
    {
        const Vec3 &a = s.vertices[i];
        const Vec3 &b = s.vertices[(i + 1) % count];
        const Vec3 e = b - a;
        const double len = norm(e);
        if (len <= 0.0)
            continue;
        // Signed in-plane distance to the edge line; positive on the interior
        // side for winding consistent with the Newell normal.
        const double d = dot(cross(e, p - a), s.normal) / len;
        min_dist = std::min(min_dist, d);
    }
    return min_dist;
}

bool point_in_polygon_2d(double px, double py, std::span<const std::array<double, 2>> poly)
{
    bool inside = false;
    const std::size_t count = poly.size();
    for (std::size_t i = 0, j = count - 1; i < count; j = i++)
    {
        const double xi = poly[i][0], yi = poly[i][1];
        const double xj = poly[j][0], yj = poly[j][1];
        const bool crosses = (yi > py) != (yj > py);
        if (crosses && px < (xj - xi) * (py - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

} // namespace raysense
