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

#include "raysense/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "raysense/errors.hpp"

namespace raysense
{

EllipseKernel default_kernel(double sample_rate_hz)
{
    if (!(sample_rate_hz > 0.0))
        throw ValidationError("kernel: sample rate must be > 0");
    EllipseKernel k;
    k.sigma_m = kSpeedOfLight / (2.0 * sample_rate_hz); // bandlimited range resolution
    return k;
}

DifferentialCir subtract(const SampledCir &observed, const SampledCir &reference)
{
    if (observed.sample_rate_hz != reference.sample_rate_hz)
        throw ValidationError("differential: sample_rate_hz differs between observed and reference");
    if (observed.start_time_s != reference.start_time_s)
        throw ValidationError("differential: start_time_s differs between observed and reference");
    if (observed.values.size() != reference.values.size())
        throw ValidationError("differential: sample count differs between observed and reference");
    if (observed.tx_id != reference.tx_id || observed.rx_id != reference.rx_id)
        throw ValidationError("differential: link identity differs between observed and reference");

    DifferentialCir d;
    d.sample_rate_hz = observed.sample_rate_hz;
    d.start_time_s = observed.start_time_s;
    d.tx_id = observed.tx_id;
    d.rx_id = observed.rx_id;
    d.values.resize(observed.values.size());
    for (std::size_t n = 0; n < d.values.size(); ++n)
        d.values[n] = observed.values[n] - reference.values[n];
    return d;
}

Heatmap ellipse_layer(const DifferentialCir &d, const Node &tx, const Node &rx,
                      const GridSpec &grid, const EllipseKernel &kernel)
{
    if (!(kernel.sigma_m > 0.0))
        throw ValidationError("ellipse layer: kernel sigma must be > 0");
    if (grid.width < 1 || grid.height < 1)
        throw ValidationError("ellipse layer: grid must have at least one cell");

    Heatmap hm;
    hm.grid = grid;
    hm.norm = Heatmap::Norm::PerLinkNormalized;
    hm.tx_id = tx.id;
    hm.rx_id = rx.id;
    hm.values.assign(static_cast<std::size_t>(grid.width) * grid.height, 0.0);

    const int num = static_cast<int>(d.values.size());
    const double fs = d.sample_rate_hz;
    const double baseline = distance(tx.position, rx.position);

    // Sample n maps to range sum r_n = c * t_n. Ranges below the focal
    // baseline have no real ellipse; skip them.
    std::vector<double> weight(num);
    bool any_weight = false;
    for (int n = 0; n < num; ++n)
    {
        weight[n] = std::norm(d.values[n]);
        if (weight[n] > 0.0)
            any_weight = true;
    }
    if (!any_weight)
        return hm; // all-zero differential stays exactly zero

    const double r0 = kSpeedOfLight * d.start_time_s; // range of sample 0
    const double dr = kSpeedOfLight / fs;             // range step per sample
    const double window = kernel.cutoff_sigmas * kernel.sigma_m;
    const double inv_two_sigma_sq = 1.0 / (2.0 * kernel.sigma_m * kernel.sigma_m);
    const int first_valid =
        std::max(0, static_cast<int>(std::ceil((baseline + kernel.min_excess_m - r0) / dr)));

    for (int j = 0; j < grid.height; ++j)
    {
        for (int i = 0; i < grid.width; ++i)
        {
            const Vec3 p = grid.cell_center(i, j);
            const double focal = distance(p, tx.position) + distance(p, rx.position);

            int lo = static_cast<int>(std::ceil((focal - window - r0) / dr));
            int hi = static_cast<int>(std::floor((focal + window - r0) / dr));
            lo = std::max(lo, first_valid);
            hi = std::min(hi, num - 1);

            double acc = 0.0;
            for (int n = lo; n <= hi; ++n)
            {
                if (weight[n] == 0.0)
                    continue;
                const double delta = focal - (r0 + n * dr);
                acc += weight[n] * std::exp(-delta * delta * inv_two_sigma_sq);
            }
            hm.values[static_cast<std::size_t>(j) * grid.width + i] = acc;
        }
    }

    const double peak = *std::max_element(hm.values.begin(), hm.values.end());
    if (peak > 0.0)
        for (double &v : hm.values)
            v /= peak;
    return hm;
}

Heatmap fuse(std::span<const Heatmap> layers)
{
    if (layers.empty())
        throw ValidationError("fuse: at least one layer required");

    std::vector<std::size_t> order(layers.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&layers](std::size_t a, std::size_t b) {
        return std::tie(layers[a].tx_id, layers[a].rx_id) <
               std::tie(layers[b].tx_id, layers[b].rx_id);
    });

    Heatmap fused;
    fused.grid = layers[0].grid;
    fused.norm = Heatmap::Norm::Fused;
    fused.values.assign(layers[0].values.size(), 0.0);

    for (std::size_t idx : order)
    {
        const Heatmap &layer = layers[idx];
        if (layer.grid != fused.grid || layer.values.size() != fused.values.size())
            throw ValidationError("fuse: grid metadata differs between layers");
        for (std::size_t c = 0; c < fused.values.size(); ++c)
            fused.values[c] += layer.values[c];
    }
    return fused;
}

std::vector<LotScore> score_lots(const Heatmap &fused, std::span<const ParkingLot> lots)
{
    std::vector<LotScore> scores;
    scores.reserve(lots.size());
    for (const auto &lot : lots)
    {
        double sum = 0.0;
        long count = 0;
        for (int j = 0; j < fused.grid.height; ++j)
        {
            for (int i = 0; i < fused.grid.width; ++i)
            {
                const Vec3 p = fused.grid.cell_center(i, j);
                if (!point_in_polygon_2d(p.x, p.y, lot.polygon))
                    continue;
                sum += fused.at(i, j);
                ++count;
            }
        }
        if (count == 0)
            throw ValidationError("lot '" + lot.id + "': covers no grid cell centers");
        scores.push_back({lot.id, sum / static_cast<double>(count)});
    }
    return scores;
}

OccupancyReport detect(std::span<const LotScore> scores, double threshold,
                       std::uint64_t scenario_hash, const GridSpec &grid)
{
    OccupancyReport report;
    report.threshold = threshold;
    report.scenario_hash = scenario_hash;
    report.grid = grid;
    report.lots.reserve(scores.size());
    for (const auto &s : scores)
        report.lots.push_back({s.id, s.score, s.score > threshold});
    return report;
}

double calibrate_threshold(const Heatmap &empty_scene_fused, std::span<const ParkingLot> lots,
                           double margin)
{
    if (!(margin > 0.0))
        throw ValidationError("calibration: margin must be > 0");
    double max_score = 0.0;
    for (const auto &s : score_lots(empty_scene_fused, lots))
        max_score = std::max(max_score, s.score);
    return margin * max_score;
}

} // namespace raysense
