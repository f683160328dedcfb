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

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "raysense/channel.hpp"
#include "raysense/scene.hpp"

namespace raysense
{

/// Observed-minus-reference CIR for one link. Construction fails unless both
/// sides share sample rate, start time, length and link identity.
struct DifferentialCir
{
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;
    std::vector<std::complex<double>> values;
    std::string tx_id;
    std::string rx_id;

    double sample_time(int n) const { return start_time_s + n / sample_rate_hz; }
};

/// Non-negative reflection-intensity grid. A per-link-normalized layer has
/// max value exactly 1 unless it is all-zero; a fused map is the sum of
/// per-link layers and is bounded by the number of links.
struct Heatmap
{
    enum class Norm
    {
        PerLinkNormalized,
        Fused
    };

    GridSpec grid;
    std::vector<double> values; // width * height, row-major: values[j * width + i]
    Norm norm = Norm::PerLinkNormalized;
    std::string tx_id; // per-link layers only, empty for fused maps
    std::string rx_id;

    std::string link_id() const { return tx_id + "|" + rx_id; }

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.width + i]; }
};

struct LotScore
{
    std::string id;
    double score = 0.0;
};

/// Per-lot occupancy decision: occupied == (score > threshold).
struct OccupancyReport
{
    struct Lot
    {
        std::string id;
        double score = 0.0;
        bool occupied = false;
    };

    std::vector<Lot> lots;
    double threshold = 0.0;
    std::uint64_t scenario_hash = 0;
    GridSpec grid;
};

/// Gaussian interpolation kernel placed around each ellipse. sigma defaults
/// to the bandlimited range resolution c / (2 f_s). The kernel is evaluated
/// within +-cutoff_sigmas (contributions beyond are below double-precision
/// relevance). Samples whose range sum is closer than min_excess_m to the
/// focal baseline are skipped as degenerate ellipses.
struct EllipseKernel
{
    double sigma_m = 0.0;
    double cutoff_sigmas = 8.5;
    double min_excess_m = 1e-6;
};

/// Kernel with the default width for a given sample rate.
EllipseKernel default_kernel(double sample_rate_hz);

/// Elementwise complex difference observed - reference.
/// Throws ValidationError naming the differing metadata field.
DifferentialCir subtract(const SampledCir &observed, const SampledCir &reference);

/// Maps one differential CIR onto the grid as a weighted family of ellipses
/// with the transceiver pair as focal points: every sample n with range sum
/// r_n = c * t_n >= |tx - rx| + eps adds w_n * exp(-delta^2 / (2 sigma^2)) to
/// each cell, where w_n = |values[n]|^2 (power weighting) and delta is the
/// cell's focal distance sum minus r_n, evaluated at the grid plane. The
/// finished layer is normalized to max 1 (all-zero layers stay zero).
Heatmap ellipse_layer(const DifferentialCir &d, const Node &tx, const Node &rx,
                      const GridSpec &grid, const EllipseKernel &kernel);

/// Elementwise sum of per-link layers in a fixed deterministic order (sorted
/// by the (tx_id, rx_id) pair). Throws ValidationError on grid metadata
/// mismatch.
Heatmap fuse(std::span<const Heatmap> layers);

/// Mean heatmap value over the cells whose centers fall inside each lot
/// polygon. Throws ValidationError naming any lot that covers zero cells.
std::vector<LotScore> score_lots(const Heatmap &fused, std::span<const ParkingLot> lots);

/// Binary occupancy per lot: occupied == score > threshold.
OccupancyReport detect(std::span<const LotScore> scores, double threshold,
                       std::uint64_t scenario_hash, const GridSpec &grid);

/// threshold = margin * max per-lot score of the empty-scene heatmap
/// (margin defaults to 3 at the pipeline level).
double calibrate_threshold(const Heatmap &empty_scene_fused, std::span<const ParkingLot> lots,
                           double margin);

} // namespace raysense
