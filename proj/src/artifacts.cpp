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

#include "raysense/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "raysense/errors.hpp"

namespace raysense
{

namespace
{

std::ofstream open_out(const std::string &path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream out(path, mode);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream &out, const std::string &path)
{
    out.flush();
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

std::string hash_hex(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string json_escape(const std::string &s)
{
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s)
    {
        switch (c)
        {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20)
            {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            }
            else
                out += c;
        }
    }
    return out;
}

void write_grid_json(std::ofstream &out, const GridSpec &g, const char *indent)
{
    out << indent << "\"grid\": {\n";
    out << indent << "  \"origin\": [" << format_double(g.origin_x) << ", "
        << format_double(g.origin_y) << "],\n";
    out << indent << "  \"cell_size\": " << format_double(g.cell_size) << ",\n";
    out << indent << "  \"width\": " << g.width << ",\n";
    out << indent << "  \"height\": " << g.height << ",\n";
    out << indent << "  \"plane_z\": " << format_double(g.plane_z) << "\n";
    out << indent << "}";
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_heatmap_csv(const std::string &path, const Heatmap &h)
{
    std::ofstream out = open_out(path);
    out << "x_meters,y_meters,value\n";
    for (int j = 0; j < h.grid.height; ++j)
    {
        for (int i = 0; i < h.grid.width; ++i)
        {
            const Vec3 p = h.grid.cell_center(i, j);
            out << format_double(p.x) << ',' << format_double(p.y) << ','
                << format_double(h.at(i, j)) << '\n';
        }
    }
    finish(out, path);
}

void write_heatmap_pgm(const std::string &path, const std::string &sidecar_path, const Heatmap &h)
{
    double peak = 0.0;
    for (double v : h.values)
        peak = std::max(peak, v);

    std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
    out << "P5\n" << h.grid.width << ' ' << h.grid.height << "\n65535\n";
    // Image rows run top to bottom; the top row is the highest y.
    for (int j = h.grid.height - 1; j >= 0; --j)
    {
        for (int i = 0; i < h.grid.width; ++i)
        {
            const double v = peak > 0.0 ? h.at(i, j) / peak : 0.0;
            const unsigned pixel = static_cast<unsigned>(std::lround(v * 65535.0));
            const unsigned char bytes[2] = {static_cast<unsigned char>(pixel >> 8),
                                            static_cast<unsigned char>(pixel & 0xff)};
            out.write(reinterpret_cast<const char *>(bytes), 2);
        }
    }
    finish(out, path);

    std::ofstream side = open_out(sidecar_path);
    side << "pgm " << path.substr(path.find_last_of('/') + 1) << "\n";
    side << "pixel_scale " << format_double(peak) << "\n";
    side << "pixel_value_equals value_div_pixel_scale_times_65535\n";
    side << "row_order descending_y\n";
    side << "grid_origin " << format_double(h.grid.origin_x) << ' '
         << format_double(h.grid.origin_y) << "\n";
    side << "cell_size " << format_double(h.grid.cell_size) << "\n";
    side << "width " << h.grid.width << "\n";
    side << "height " << h.grid.height << "\n";
    side << "plane_z " << format_double(h.grid.plane_z) << "\n";
    finish(side, sidecar_path);
}

void write_report_json(const std::string &path, const OccupancyReport &report)
{
    std::ofstream out = open_out(path);
    out << "{\n";
    out << "  \"scenario_hash\": \"" << hash_hex(report.scenario_hash) << "\",\n";
    out << "  \"threshold\": " << format_double(report.threshold) << ",\n";
    write_grid_json(out, report.grid, "  ");
    out << ",\n  \"lots\": [\n";
    for (std::size_t k = 0; k < report.lots.size(); ++k)
    {
        const auto &lot = report.lots[k];
        out << "    {\"id\": \"" << json_escape(lot.id) << "\", \"score\": "
            << format_double(lot.score) << ", \"occupied\": " << (lot.occupied ? "true" : "false")
            << '}' << (k + 1 < report.lots.size() ? "," : "") << '\n';
    }
    out << "  ]\n}\n";
    finish(out, path);
}

void write_paths_json(const std::string &path, std::span<const LinkPaths> links)
{
    std::ofstream out = open_out(path);
    out << "{\n  \"links\": [\n";
    for (std::size_t li = 0; li < links.size(); ++li)
    {
        const LinkPaths &link = links[li];
        out << "    {\n      \"tx\": \"" << json_escape(link.tx_id) << "\",\n      \"rx\": \""
            << json_escape(link.rx_id) << "\",\n      \"paths\": [\n";
        for (std::size_t pi = 0; pi < link.paths.size(); ++pi)
        {
            const PropagationPath &p = link.paths[pi];
            out << "        {\"order\": " << p.order << ", \"length_m\": "
                << format_double(p.total_length) << ", \"surfaces\": [";
            for (std::size_t k = 0; k < p.surface_indices.size(); ++k)
                out << p.surface_indices[k] << (k + 1 < p.surface_indices.size() ? ", " : "");
            out << "], \"points\": [";
            for (std::size_t k = 0; k < p.reflection_points.size(); ++k)
            {
                const Vec3 &v = p.reflection_points[k];
                out << '[' << format_double(v.x) << ", " << format_double(v.y) << ", "
                    << format_double(v.z) << ']'
                    << (k + 1 < p.reflection_points.size() ? ", " : "");
            }
            out << "]}" << (pi + 1 < link.paths.size() ? "," : "") << '\n';
        }
        out << "      ]\n    }" << (li + 1 < links.size() ? "," : "") << '\n';
    }
    out << "  ]\n}\n";
    finish(out, path);
}

namespace
{

template <typename Cir> void write_cir_impl(const std::string &path, const Cir &cir)
{
    std::ofstream out = open_out(path);
    out << "n,t_n_seconds,real,imag,magnitude\n";
    for (std::size_t n = 0; n < cir.values.size(); ++n)
    {
        const auto v = cir.values[n];
        out << n << ',' << format_double(cir.sample_time(static_cast<int>(n))) << ','
            << format_double(v.real()) << ',' << format_double(v.imag()) << ','
            << format_double(std::abs(v)) << '\n';
    }
    finish(out, path);
}

} // namespace

void write_cir_csv(const std::string &path, const SampledCir &cir) { write_cir_impl(path, cir); }
void write_cir_csv(const std::string &path, const DifferentialCir &cir) { write_cir_impl(path, cir); }

} // namespace raysense
