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

#include <string>
#include <vector>

#include "raysense/pipeline.hpp"
#include "raysense/raytrace.hpp"
#include "raysense/sensing.hpp"

namespace raysense
{

// All artifact writers serialize floating-point values with 17 significant
// digits so that identical runs produce byte-identical files.

/// CSV with header `x_meters,y_meters,value`, one row per cell, rows grouped
/// by y (row-major).
void write_heatmap_csv(const std::string &path, const Heatmap &h);

/// 16-bit binary PGM (P5, maxval 65535, big-endian), one pixel per cell,
/// image rows top-to-bottom = descending y. Values are scaled linearly to
/// [0, 65535]; the scale and grid metadata go to the `sidecar_path` text
/// file.
void write_heatmap_pgm(const std::string &path, const std::string &sidecar_path, const Heatmap &h);

/// JSON report: per-lot {id, score, occupied} plus threshold, scenario hash
/// and grid metadata.
void write_report_json(const std::string &path, const OccupancyReport &report);

/// Debug dump of per-link propagation paths (order, reflection points,
/// length) for visual inspection.
struct LinkPaths
{
    std::string tx_id;
    std::string rx_id;
    std::vector<PropagationPath> paths;
};
void write_paths_json(const std::string &path, std::span<const LinkPaths> links);

/// Per-link CIR dump: CSV with columns `n,t_n_seconds,real,imag,magnitude`.
void write_cir_csv(const std::string &path, const SampledCir &cir);
void write_cir_csv(const std::string &path, const DifferentialCir &cir);

/// snprintf("%.17g") helper shared by the writers.
std::string format_double(double v);

} // namespace raysense
