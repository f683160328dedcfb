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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raysense/sensing.hpp"

namespace raysense
{

struct NoiseSpec
{
    bool enabled = false;
    double power_dbm = 0.0;
    std::uint64_t seed = 0;
};

/// Pipeline configuration. Values <= 0 (or unset optionals) fall back to the
/// scenario. Exactly one of `threshold` / `calibrate_margin` is active:
/// when `threshold` is set the calibration margin is ignored.
struct RunOptions
{
    int max_order = -1;          // < 0: scenario value
    double grid_cell_m = 0.0;    // <= 0: scenario value
    double bandwidth_hz = 0.0;   // <= 0: scenario value
    NoiseSpec noise;
    std::optional<double> threshold;
    double calibrate_margin = 3.0;
    bool dump_paths = false;
    bool dump_cir = false;
    double max_seconds = 0.0;    // <= 0: unlimited
    int threads = 0;             // <= 0: hardware concurrency
};

struct RunResult
{
    Heatmap fused;
    std::vector<LotScore> scores;
    OccupancyReport report;
    double threshold = 0.0;
    int truncated_links = 0; // links whose CIR window clipped at least one tap
    double wall_seconds = 0.0;
};

/// Full sensing pipeline: derive the reference scene, simulate every
/// unordered node pair against both scenes, subtract, map the differential
/// CIRs onto the grid, fuse, score the lots and decide occupancy.
///
/// When `out_dir` is non-empty, writes heatmap.csv, heatmap.pgm (+ .txt scale
/// sidecar) and report.json there, plus paths.json and cir/*.csv when the
/// dump flags are set. Artifacts are only written after the whole run
/// succeeded; a failed run leaves no partial files.
///
/// Per-link work runs on `opt.threads` workers; the result is bit-identical
/// across runs and worker counts for a fixed (scenario, options, seed).
/// Throws BudgetError when opt.max_seconds is exceeded.
RunResult run_pipeline(const Scenario &s, const RunOptions &opt, const std::string &out_dir);

/// The scenario with RunOptions overrides (max order, grid cell, bandwidth)
/// applied and re-validated. Exposed for tests and sweep tooling.
Scenario apply_overrides(const Scenario &s, const RunOptions &opt);

/// Deterministic per-link noise seed: mixes the master seed with the link
/// identity and a stream tag ("obs", "ref", "cal_obs", "cal_ref").
std::uint64_t link_noise_seed(std::uint64_t master, const std::string &stream,
                              const std::string &tx_id, const std::string &rx_id);

} // namespace raysense
